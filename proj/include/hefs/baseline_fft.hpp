#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include "hefs/flicker_grid.hpp"
#include "hefs/signal_model.hpp"

namespace hefs {

struct baseline_config {
    double window_seconds = 2.0;
    double demodulation_cutoff_hz = 35.0;
};

struct baseline_estimate {
    double v1 = 0.0;  // fundamental amplitude from the analysis window
    std::array<double, kGridSize> relative_amplitudes{};
    std::array<double, kGridSize> phases_rad{};  // modulation phase at global t=0
};

// Exact single-bin DFT: X(F) = sum_k x[k] e^{-j 2 pi F k / fs}.
std::complex<double> goertzel(const std::vector<double>& x, double frequency_hz, double rate_hz);

// 4 cascaded identical one-pole sections; the cascade is -3 dB at cutoff_hz.
// Returns the filtered signal; section_pole_hz reports the per-section cutoff.
std::vector<double> demodulation_lowpass(const std::vector<double>& x, double rate_hz,
                                         double cutoff_hz, double* section_pole_hz = nullptr);

// Complex response of the cascade at a frequency (for droop/lag correction).
std::complex<double> demodulation_lowpass_response(double frequency_hz, double rate_hz,
                                                   double cutoff_hz);

// Spectral reference estimator: square, low-pass, remove DC, evaluate each
// grid bin with Goertzel over the trailing window, normalize by the DC level.
// Throws data_error when the series is shorter than the window.
baseline_estimate fft_estimate(const sample_series& series, double f_hz, const flicker_grid& grid,
                               const baseline_config& config);

}  // namespace hefs
