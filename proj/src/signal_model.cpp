#include "hefs/signal_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "hefs/errors.hpp"
#include "hefs/rng.hpp"

namespace hefs {

double base_voltage(const waveform_spec& spec) {
    if (spec.harmonics.empty()) throw config_error("waveform spec has no harmonics");
    double sum = 0.0;
    for (const auto& h : spec.harmonics) sum += h.amplitude_pu * h.amplitude_pu;
    return std::sqrt(sum);
}

void validate(const waveform_spec& spec) {
    if (spec.harmonics.empty()) throw config_error("waveform spec has no harmonics");
    std::set<int> orders;
    int max_order = 0;
    for (const auto& h : spec.harmonics) {
        if (h.order < 1) throw config_error("harmonic order must be >= 1");
        if (h.amplitude_pu < 0.0) throw config_error("harmonic amplitude must be >= 0");
        if (!orders.insert(h.order).second)
            throw config_error("duplicate harmonic order " + std::to_string(h.order));
        max_order = std::max(max_order, h.order);
    }
    if (base_voltage(spec) <= 0.0) throw config_error("base voltage Vt must be > 0");
    for (const auto& f : spec.flickers) {
        if (f.frequency_hz <= 0.0) throw config_error("flicker frequency must be > 0");
        if (f.relative_amplitude < 0.0) throw config_error("flicker amplitude must be >= 0");
    }
    if (spec.sampling.rate_hz <= 0.0 || spec.sampling.duration_s <= 0.0 ||
        spec.sampling.power_frequency_hz <= 0.0)
        throw config_error("sampling rate, duration and power frequency must be > 0");
    if (spec.sampling.rate_hz <= 2.0 * max_order * spec.sampling.power_frequency_hz)
        throw config_error("sample rate " + std::to_string(spec.sampling.rate_hz) +
                           " Hz violates Nyquist for harmonic order " + std::to_string(max_order));
    if (spec.noise.sigma < 0.0) throw config_error("noise sigma must be >= 0");
}

namespace {

sample_series synth_impl(const waveform_spec& spec, bool with_noise) {
    validate(spec);
    const double ts = 1.0 / spec.sampling.rate_hz;
    const double f = spec.sampling.power_frequency_hz;
    const auto n = static_cast<std::size_t>(std::llround(spec.sampling.duration_s * spec.sampling.rate_hz));
    const double two_pi = 2.0 * 3.14159265358979323846;

    sample_series out;
    out.start_index = 0;
    out.rate_hz = spec.sampling.rate_hz;
    out.samples.resize(n);

    gaussian_sampler noise(spec.noise.seed);
    const bool noisy = with_noise && spec.noise.sigma > 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * ts;
        double carrier = 0.0;
        for (const auto& h : spec.harmonics)
            carrier += h.amplitude_pu * std::cos(two_pi * h.order * f * t + h.phase_rad);
        double mod = 1.0;
        for (const auto& fl : spec.flickers)
            mod += 0.5 * fl.relative_amplitude * std::cos(two_pi * fl.frequency_hz * t + fl.phase_rad);
        double v = carrier * mod;
        if (noisy) v += spec.noise.sigma * noise.next();
        out.samples[k] = v;
    }
    return out;
}

}  // namespace

sample_series synthesize(const waveform_spec& spec) { return synth_impl(spec, true); }

sample_series synthesize_clean(const waveform_spec& spec) { return synth_impl(spec, false); }

std::vector<double> true_envelope(const waveform_spec& spec, std::size_t which_harmonic) {
    validate(spec);
    if (which_harmonic < 1 || which_harmonic > spec.harmonics.size())
        throw config_error("harmonic index out of range");
    const double vn = spec.harmonics[which_harmonic - 1].amplitude_pu;
    const double ts = 1.0 / spec.sampling.rate_hz;
    const auto n = static_cast<std::size_t>(std::llround(spec.sampling.duration_s * spec.sampling.rate_hz));
    const double two_pi = 2.0 * 3.14159265358979323846;
    std::vector<double> env(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * ts;
        double mod = 1.0;
        for (const auto& fl : spec.flickers)
            mod += 0.5 * fl.relative_amplitude * std::cos(two_pi * fl.frequency_hz * t + fl.phase_rad);
        env[k] = vn * mod;
    }
    return env;
}

}  // namespace hefs
