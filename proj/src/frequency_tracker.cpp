#include "hefs/frequency_tracker.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "hefs/errors.hpp"

namespace hefs {

frequency_estimate track_frequency(const sample_series& series, double nominal_hz) {
    if (nominal_hz <= 0.0) throw config_error("nominal frequency must be > 0");
    const double fs = series.rate_hz;
    if (fs <= 0.0) throw data_error("series has no sample rate");
    const std::size_t n = series.samples.size();
    const std::size_t min_samples = static_cast<std::size_t>(std::ceil(4.0 * fs / nominal_hz));
    if (n < min_samples)
        throw data_error("series too short for frequency tracking: " + std::to_string(n) +
                         " samples, need >= 4 cycles (" + std::to_string(min_samples) + ")");

    // Single-pole low-pass at 2x nominal.
    const double a = std::exp(-2.0 * M_PI * 2.0 * nominal_hz / fs);
    std::vector<double> y(n);
    double acc = series.samples[0];
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc = a * acc + (1.0 - a) * series.samples[i];
        y[i] = acc;
        mean += acc;
    }
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (auto& v : y) {
        v -= mean;
        var += v * v;
    }
    var /= static_cast<double>(n);
    const double rms = std::sqrt(var);
    if (rms <= 0.0) throw data_error("series is constant, no fundamental to track");

    // Rising crossings with hysteresis: armed after the signal has been below
    // -h; the crossing instant is the last sign change before it exceeds +h.
    const double h = 0.3 * std::sqrt(2.0) * rms;
    std::vector<double> crossings;  // in samples
    enum class arm_state { unknown, low, high };
    arm_state st = arm_state::unknown;
    for (std::size_t i = 1; i < n; ++i) {
        if (y[i] <= -h) {
            st = arm_state::low;
        } else if (y[i] >= h && st == arm_state::low) {
            std::size_t j = i;
            while (j > 0 && !(y[j - 1] < 0.0 && y[j] >= 0.0)) --j;
            if (j > 0) {
                const double frac = -y[j - 1] / (y[j] - y[j - 1]);
                crossings.push_back(static_cast<double>(j - 1) + frac);
            }
            st = arm_state::high;
        }
    }
    if (crossings.size() < 3)
        throw data_error("too few zero crossings found (" + std::to_string(crossings.size()) + ")");

    const double span = (crossings.back() - crossings.front()) / fs;
    const double f_hat = static_cast<double>(crossings.size() - 1) / span;

    // Spread of the per-cycle intervals gives the uncertainty half-width.
    const std::size_t m = crossings.size() - 1;
    const double mean_period = span / static_cast<double>(m);
    double pvar = 0.0;
    for (std::size_t i = 0; i + 1 < crossings.size(); ++i) {
        const double p = (crossings[i + 1] - crossings[i]) / fs;
        pvar += (p - mean_period) * (p - mean_period);
    }
    pvar /= static_cast<double>(m);
    const double period_sem = std::sqrt(pvar / static_cast<double>(m));
    const double confidence = period_sem / (mean_period * mean_period);

    frequency_estimate est;
    est.frequency_hz = f_hat;
    est.confidence_window_hz = confidence;
    est.window_samples = static_cast<int>(n);
    return est;
}

}  // namespace hefs
