#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hefs/adaline.hpp"
#include "hefs/baseline_fft.hpp"
#include "hefs/flicker_grid.hpp"
#include "hefs/hinf.hpp"
#include "hefs/metrics.hpp"
#include "hefs/signal_model.hpp"

namespace hefs {

enum class frequency_mode_kind { fixed, tracked, tracked_with_offset };

struct frequency_mode {
    frequency_mode_kind kind = frequency_mode_kind::tracked;
    double fixed_hz = 50.0;   // used by `fixed`
    double offset_hz = 0.0;   // injected bias for `tracked_with_offset`
};

struct pipeline_config {
    hinf_config hinf;
    adaline_config adaline;
    flicker_grid grid;
    frequency_mode frequency;
    int report_stride = 1;
    // Correct reported flicker amplitudes/phases by the envelope channel's
    // own probe-measured response (the spectral baseline gets the equivalent
    // correction for its demodulation filter).
    bool compensate_envelope_response = true;
    // Seed each unit's DC weight from its first envelope frame.
    bool seed_dc_from_envelope = true;
};

// Complex small-signal response of the H-inf envelope channel at each grid
// frequency, measured by deterministic synthetic probes.
struct envelope_response {
    std::array<double, kGridSize> gain{};
    std::array<double, kGridSize> phase_rad{};
};

envelope_response calibrate_envelope_response(const hinf_config& config, double f_hz, double rate_hz,
                                              const flicker_grid& grid);

struct flicker_report {
    std::vector<int> harmonic_orders;
    std::vector<double> harmonic_amplitudes;  // H-inf envelope at the last step
    std::vector<double> harmonic_phases_rad;  // H-inf quadrature phases
    std::size_t primary_envelope = 1;         // 1-based channel used for sensation

    // Per envelope channel (N x 36), compensated when enabled.
    std::vector<std::array<double, kGridSize>> relative_amplitudes;
    std::vector<std::array<double, kGridSize>> flicker_phases_rad;
    std::vector<double> adaline_dc;  // Vn per channel from the units

    sensation_report sensation_index;

    double frequency_hz = 0.0;
    double frequency_confidence_hz = 0.0;
    std::string frequency_mode_label;

    // First time the primary channel's bin estimate stays within a 0.1%
    // relative band over a trailing 0.1 s window; <0 when never reached.
    std::array<double, kGridSize> convergence_time_s{};

    bool response_compensated = false;
    envelope_response response;

    // Strided envelope frames for plotting/tracing.
    std::vector<double> trace_time_s;
    std::vector<std::vector<double>> trace_envelopes;

    double estimation_seconds_final_2s = 0.0;
    double estimation_seconds_total = 0.0;
    std::int64_t samples_processed = 0;
};

// Full two-stage estimation over a series. `truth`, when given, is the
// generating spec (used only for error reporting, never by the estimator).
// `precalibrated` skips the probe pass (e.g. across Monte-Carlo runs).
flicker_report run_hefs(const sample_series& series, const pipeline_config& config,
                        const std::optional<envelope_response>& precalibrated = std::nullopt);

struct monte_carlo_spec {
    int runs = 100;
    std::uint64_t seed = 0;
    std::array<double, 2> harmonic_range = {0.8, 1.2};
    std::array<double, 2> flicker_range = {0.0, 0.02};
    waveform_spec base_spec;
};

struct mc_result {
    int run_id = 0;
    double s_error_pct = 0.0;
    double envelope_error_pct = 0.0;
    bool s_error_is_absolute = false;  // reported absolute when S_true < 0.01
    bool failed = false;
    std::string message;
};

// Deterministic campaign: run i uses substream_seed(spec.seed, i) for its
// parameter draws and noise. Per-run failures are recorded, not fatal.
std::vector<mc_result> monte_carlo(const monte_carlo_spec& spec, const pipeline_config& config,
                                   int workers = 1);

struct comparison_report {
    flicker_report hefs;
    baseline_estimate fft;
    bool has_truth = false;
    error_stats hefs_envelope_stats;  // reconstruction vs true envelope, final 2 s
    error_stats fft_envelope_stats;
    double hefs_seconds_final_2s = 0.0;
    double fft_seconds = 0.0;
};

// Head-to-head on identical input. `truth` enables reconstruction-error
// statistics against the known envelope.
comparison_report compare(const sample_series& series, const pipeline_config& config,
                          const baseline_config& baseline,
                          const std::optional<waveform_spec>& truth = std::nullopt);

}  // namespace hefs
