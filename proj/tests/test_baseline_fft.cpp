#include <doctest.h>

#include <cmath>
#include <complex>

#include "hefs/baseline_fft.hpp"
#include "hefs/errors.hpp"
#include "hefs/rng.hpp"
#include "hefs/signal_model.hpp"

using namespace hefs;

namespace {
const flicker_grid kGrid;

sample_series eq18_series(double flicker_hz, double rel, double sigma, double duration) {
    waveform_spec spec;
    spec.harmonics = {{1, 1.5, deg_to_rad(80)}};
    if (rel > 0.0) spec.flickers = {{flicker_hz, rel, 0.0}};
    spec.sampling = {1200.0, duration, 50.0};
    spec.noise = {sigma, 21};
    return synthesize(spec);
}
}  // namespace

TEST_CASE("goertzel equals the naive single-bin DFT") {
    xoshiro256pp rng(5);
    std::vector<double> x(977);
    for (auto& v : x) v = rng.uniform(-1.0, 1.0);
    for (const double f : kGrid.frequencies()) {
        const auto g = goertzel(x, f, 1200.0);
        std::complex<double> naive(0.0, 0.0);
        const double w = 2.0 * M_PI * f / 1200.0;
        for (std::size_t k = 0; k < x.size(); ++k)
            naive += x[k] * std::complex<double>(std::cos(w * k), -std::sin(w * k));
        CHECK(std::abs(g - naive) <= 1e-9 * std::abs(naive));
    }
}

TEST_CASE("goertzel recovers amplitude and phase of a pure tone") {
    std::vector<double> x(2400);
    for (std::size_t k = 0; k < x.size(); ++k)
        x[k] = 0.7 * std::cos(2.0 * M_PI * 8.8 * k / 1200.0 + 0.9);
    const auto g = goertzel(x, 8.8, 1200.0);
    CHECK(2.0 * std::abs(g) / x.size() == doctest::Approx(0.7).epsilon(1e-3));
    CHECK(std::arg(g) == doctest::Approx(0.9).epsilon(1e-2));
}

TEST_CASE("unmodulated carrier yields near-zero flicker estimates") {
    const auto series = eq18_series(0.0, 0.0, 0.0, 3.0);
    const auto est = fft_estimate(series, 50.0, kGrid, baseline_config{});
    CHECK(est.v1 == doctest::Approx(1.5).epsilon(1e-3));
    for (const double a : est.relative_amplitudes) CHECK(a < 1e-3);
}

TEST_CASE("single 5 Hz flicker estimated within 5 percent") {
    const auto series = eq18_series(5.0, 0.02, 0.0, 3.0);
    const auto est = fft_estimate(series, 50.0, kGrid, baseline_config{});
    const std::size_t i = kGrid.index_of(5.0);
    CHECK(std::abs(est.relative_amplitudes[i] - 0.02) / 0.02 < 0.05);
}

TEST_CASE("estimates are invariant under a DC offset") {
    auto series = eq18_series(5.0, 0.02, 0.0, 3.0);
    const auto base = fft_estimate(series, 50.0, kGrid, baseline_config{});
    // The demodulated window has its mean removed, so an input DC offset only
    // perturbs through the squaring cross-term at the carrier frequency.
    for (auto& v : series.samples) v += 0.25;
    const auto shifted = fft_estimate(series, 50.0, kGrid, baseline_config{});
    const std::size_t i = kGrid.index_of(5.0);
    CHECK(shifted.relative_amplitudes[i] ==
          doctest::Approx(base.relative_amplitudes[i]).epsilon(0.05));
}

TEST_CASE("window longer than the series is rejected") {
    const auto series = eq18_series(5.0, 0.02, 0.0, 1.0);
    baseline_config cfg;
    cfg.window_seconds = 2.0;
    CHECK_THROWS_AS(fft_estimate(series, 50.0, kGrid, cfg), data_error);
}

TEST_CASE("cutoff below the grid top is rejected") {
    const auto series = eq18_series(5.0, 0.02, 0.0, 3.0);
    baseline_config cfg;
    cfg.demodulation_cutoff_hz = 20.0;
    CHECK_THROWS_AS(fft_estimate(series, 50.0, kGrid, cfg), config_error);
}

TEST_CASE("lowpass response magnitude matches a measured tone") {
    const double fs = 1200.0;
    const double fc = 35.0;
    std::vector<double> x(6000);
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = std::cos(2.0 * M_PI * 10.0 * k / fs);
    const auto y = demodulation_lowpass(x, fs, fc);
    // steady-state amplitude over the last second
    double peak = 0.0;
    for (std::size_t k = x.size() - 1200; k < x.size(); ++k) peak = std::max(peak, std::abs(y[k]));
    const auto resp = demodulation_lowpass_response(10.0, fs, fc);
    CHECK(peak == doctest::Approx(std::abs(resp)).epsilon(2e-3));
}
