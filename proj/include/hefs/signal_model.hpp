#pragma once

#include <cstdint>
#include <vector>

namespace hefs {

// One power harmonic: order n, per-unit amplitude, phase in radians.
struct harmonic_component {
    int order = 1;
    double amplitude_pu = 0.0;
    double phase_rad = 0.0;
};

// One flicker component. relative_amplitude is dV/Vt (the reported
// quantity); the generative model applies the factor 1/2 internally.
struct flicker_component {
    double frequency_hz = 0.0;
    double relative_amplitude = 0.0;
    double phase_rad = 0.0;
};

struct sampling_spec {
    double rate_hz = 1200.0;
    double duration_s = 1.0;
    double power_frequency_hz = 50.0;
};

struct noise_spec {
    double sigma = 0.0;
    std::uint64_t seed = 0;
};

struct waveform_spec {
    std::vector<harmonic_component> harmonics;
    std::vector<flicker_component> flickers;
    sampling_spec sampling;
    noise_spec noise;
};

struct sample_series {
    std::int64_t start_index = 0;
    double rate_hz = 0.0;
    std::vector<double> samples;

    double time_at(std::size_t i) const noexcept {
        return static_cast<double>(start_index + static_cast<std::int64_t>(i)) / rate_hz;
    }
};

// Vt = sqrt(sum Vn^2), the per-unit base for relative fluctuations.
double base_voltage(const waveform_spec& spec);

// Throws config_error on spec violations (empty harmonics, duplicate
// orders, Nyquist violation, negative amplitudes/sigma).
void validate(const waveform_spec& spec);

// Modulated multi-harmonic synthesis with seeded Gaussian noise.
// sample_k = sum_n Vn cos(2 pi n f k ts + phi_n)
//            * (1 + sum_i (a_i/2) cos(2 pi F_i k ts + th_i)) + sigma g_k
sample_series synthesize(const waveform_spec& spec);

// Deterministic part only (sigma treated as 0); used by oracles/harness.
sample_series synthesize_clean(const waveform_spec& spec);

// True envelope of harmonic `which` (1-based among spec.harmonics order):
// Vn * (1 + sum_i (a_i/2) cos(2 pi F_i k ts + th_i)).
std::vector<double> true_envelope(const waveform_spec& spec, std::size_t which_harmonic);

inline double deg_to_rad(double deg) noexcept { return deg * 3.14159265358979323846 / 180.0; }
inline double rad_to_deg(double rad) noexcept { return rad * 180.0 / 3.14159265358979323846; }

}  // namespace hefs
