#include "hefs/baseline_fft.hpp"

#include <cmath>
#include <string>

#include "hefs/errors.hpp"

namespace hefs {

namespace {
constexpr double kTwoPi = 2.0 * 3.14159265358979323846;
}

std::complex<double> goertzel(const std::vector<double>& x, double frequency_hz, double rate_hz) {
    const double w = kTwoPi * frequency_hz / rate_hz;
    const double coeff = 2.0 * std::cos(w);
    double s0 = 0.0, s1 = 0.0;
    for (const double v : x) {
        const double s = v + coeff * s0 - s1;
        s1 = s0;
        s0 = s;
    }
    // Finalize to X = sum_k x[k] e^{-jwk}.
    const std::complex<double> ejw(std::cos(w), std::sin(w));
    const std::complex<double> y = s0 - s1 * std::conj(ejw);
    const double n1 = static_cast<double>(x.size()) - 1.0;
    return y * std::complex<double>(std::cos(w * n1), -std::sin(w * n1));
}

std::vector<double> demodulation_lowpass(const std::vector<double>& x, double rate_hz,
                                         double cutoff_hz, double* section_pole_hz) {
    // Per-section cutoff so that the 4-stage cascade is -3 dB at cutoff_hz.
    const double f1 = cutoff_hz / std::sqrt(std::pow(2.0, 0.25) - 1.0);
    if (section_pole_hz) *section_pole_hz = f1;
    const double a = std::exp(-kTwoPi * f1 / rate_hz);
    std::vector<double> y = x;
    for (int stage = 0; stage < 4; ++stage) {
        double acc = y.empty() ? 0.0 : y[0];
        for (auto& v : y) {
            acc = a * acc + (1.0 - a) * v;
            v = acc;
        }
    }
    return y;
}

std::complex<double> demodulation_lowpass_response(double frequency_hz, double rate_hz,
                                                   double cutoff_hz) {
    const double f1 = cutoff_hz / std::sqrt(std::pow(2.0, 0.25) - 1.0);
    const double a = std::exp(-kTwoPi * f1 / rate_hz);
    const std::complex<double> z = std::exp(std::complex<double>(0.0, kTwoPi * frequency_hz / rate_hz));
    const std::complex<double> h1 = (1.0 - a) / (1.0 - a / z);
    return h1 * h1 * h1 * h1;
}

baseline_estimate fft_estimate(const sample_series& series, double f_hz, const flicker_grid& grid,
                               const baseline_config& config) {
    if (config.window_seconds <= 0.0) throw config_error("baseline window must be > 0");
    if (config.demodulation_cutoff_hz <= grid[grid.size() - 1])
        throw config_error("demodulation cutoff must exceed the top grid frequency");
    const double fs = series.rate_hz;
    const auto window_n = static_cast<std::size_t>(std::llround(config.window_seconds * fs));
    if (series.samples.size() < window_n)
        throw data_error("series shorter than baseline window: " + std::to_string(series.samples.size()) +
                         " < " + std::to_string(window_n));

    // Demodulate over the whole record so the filter is settled inside the
    // trailing analysis window.
    std::vector<double> squared(series.samples.size());
    for (std::size_t i = 0; i < squared.size(); ++i) squared[i] = series.samples[i] * series.samples[i];
    const std::vector<double> demod = demodulation_lowpass(squared, fs, config.demodulation_cutoff_hz);

    const std::size_t n0 = series.samples.size() - window_n;
    std::vector<double> window(demod.begin() + static_cast<std::ptrdiff_t>(n0), demod.end());
    double dc = 0.0;
    for (const double v : window) dc += v;
    dc /= static_cast<double>(window_n);
    for (auto& v : window) v -= dc;
    if (dc <= 0.0) throw numeric_error("baseline demodulated DC level is not positive");

    baseline_estimate est;
    const double t0 = series.time_at(n0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double fi = grid[i];
        const std::complex<double> x = goertzel(window, fi, fs);
        const std::complex<double> resp = demodulation_lowpass_response(fi, fs, config.demodulation_cutoff_hz);
        const double amp = 2.0 * std::abs(x) / static_cast<double>(window_n) / std::abs(resp);
        est.relative_amplitudes[i] = amp / dc;
        // Phase re-referenced to global t = 0.
        est.phases_rad[i] = std::arg(x) - std::arg(resp) + kTwoPi * fi * t0;
    }

    std::vector<double> raw_window(series.samples.begin() + static_cast<std::ptrdiff_t>(n0),
                                   series.samples.end());
    est.v1 = 2.0 * std::abs(goertzel(raw_window, f_hz, fs)) / static_cast<double>(window_n);
    return est;
}

}  // namespace hefs
