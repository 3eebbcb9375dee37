#pragma once

#include "hefs/signal_model.hpp"

namespace hefs {

struct frequency_estimate {
    double frequency_hz = 0.0;
    double confidence_window_hz = 0.0;  // half-width of estimate uncertainty
    int window_samples = 0;
};

// Fundamental-frequency estimate from rising zero crossings of the
// low-passed series (single pole at 2x nominal), with hysteresis against
// distortion/noise and linear interpolation between samples.
// Requires at least 4 nominal cycles of data (data_error otherwise).
frequency_estimate track_frequency(const sample_series& series, double nominal_hz);

}  // namespace hefs
