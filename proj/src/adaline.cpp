#include "hefs/adaline.hpp"

#include <cmath>
#include <string>

#include "hefs/errors.hpp"
#include "hefs/rng.hpp"

namespace hefs {

namespace {
constexpr double kTwoPi = 2.0 * 3.14159265358979323846;
}

std::array<double, kAdalineInputs> basis_vector(std::int64_t k, double tau_s, const flicker_grid& grid) {
    std::array<double, kAdalineInputs> u{};
    u[0] = 1.0;
    u[1] = 0.0;
    const double t = static_cast<double>(k) * tau_s;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double ang = kTwoPi * grid[i] * t;
        u[2 + 2 * i] = std::cos(ang);
        u[3 + 2 * i] = -std::sin(ang);
    }
    return u;
}

double learning_rate(std::int64_t k, const adaline_config& config) {
    return config.initial_rate / (1.0 + static_cast<double>(k) / config.decay);
}

adaline_unit::adaline_unit(const adaline_config& config) : config_(config) {
    if (config_.initial_rate <= 0.0) throw config_error("adaline initial rate must be > 0");
    if (config_.decay <= 0.0) throw config_error("adaline decay must be > 0");
    if (config_.regularizer <= 0.0) throw config_error("adaline regularizer must be > 0");
    if (!config_.initial_weights.empty()) {
        if (config_.initial_weights.size() != kAdalineInputs)
            throw config_error("adaline initial weights must have 74 entries");
        for (std::size_t i = 0; i < kAdalineInputs; ++i) state_.weights[i] = config_.initial_weights[i];
    } else {
        switch (config_.init) {
            case weight_init::zero:
                state_.weights.fill(0.0);
                break;
            case weight_init::table_ones:
                state_.weights.fill(1.0);
                break;
            case weight_init::random: {
                xoshiro256pp rng(config_.init_seed);
                for (auto& w : state_.weights) w = rng.uniform(-1.0, 1.0);
                break;
            }
        }
    }
    // The second basis entry is identically zero; its weight gets no gradient
    // and would bias the Vn readout, so it is pinned at zero.
    state_.weights[1] = 0.0;
}

void adaline_unit::update(double target, const std::array<double, kAdalineInputs>& basis) {
    if (!std::isfinite(target))
        throw numeric_error("adaline target not finite at step " + std::to_string(state_.step));
    double dot = 0.0;
    double energy = 0.0;
    for (std::size_t i = 0; i < kAdalineInputs; ++i) {
        const double b = basis[i];
        if (!std::isfinite(b))
            throw numeric_error("adaline basis entry not finite at step " + std::to_string(state_.step));
        dot += state_.weights[i] * b;
        energy += b * b;
    }
    const double e = target - dot;
    const double scale = learning_rate(state_.step, config_) * e / (config_.regularizer + energy);
    for (std::size_t i = 0; i < kAdalineInputs; ++i) state_.weights[i] += scale * basis[i];
    state_.last_error = e;
    ++state_.step;
}

flicker_estimate adaline_unit::extract(const flicker_grid& grid) const {
    flicker_estimate est;
    est.harmonic_amplitude = std::abs(state_.weights[0]);
    if (est.harmonic_amplitude < 1e-9)
        throw degenerate_envelope("adaline harmonic amplitude below 1e-9, cannot normalize");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double wc = state_.weights[2 + 2 * i];
        const double ws = state_.weights[3 + 2 * i];
        // Eq-style ratio is dV/(2Vt); reported quantity is dV/Vt.
        est.relative_amplitudes[i] = 2.0 * std::hypot(wc, ws) / est.harmonic_amplitude;
        est.phases_rad[i] = std::atan2(ws, wc);
    }
    return est;
}

}  // namespace hefs
