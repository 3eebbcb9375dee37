#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "hefs/flicker_grid.hpp"

namespace hefs {

inline constexpr std::size_t kAdalineInputs = 2 + 2 * kGridSize;  // 74

enum class weight_init { zero, table_ones, random };

struct adaline_config {
    double initial_rate = 1.0;   // theta0
    double decay = 1000.0;       // beta
    double regularizer = 1e-4;   // lambda
    weight_init init = weight_init::zero;
    std::uint64_t init_seed = 0;          // for weight_init::random
    std::vector<double> initial_weights;  // explicit override, 74 entries
};

struct adaline_state {
    std::array<double, kAdalineInputs> weights{};
    std::int64_t step = 0;  // updates applied so far (drives the rate decay)
    double last_error = 0.0;
};

struct flicker_estimate {
    double harmonic_amplitude = 0.0;                  // Vn
    std::array<double, kGridSize> relative_amplitudes{};  // dV_i/Vt
    std::array<double, kGridSize> phases_rad{};
};

// Basis at global sample index k: [1, 0, cos(2 pi F1 k ts), -sin(2 pi F1 k ts), ...]
std::array<double, kAdalineInputs> basis_vector(std::int64_t k, double tau_s, const flicker_grid& grid);

// theta_k = theta0 / (1 + k/beta)
double learning_rate(std::int64_t k, const adaline_config& config);

// One adaptive linear unit per envelope, normalized Widrow-Hoff updates.
class adaline_unit {
public:
    explicit adaline_unit(const adaline_config& config);

    // w += theta_k * e * u / (lambda + u.u), then the step count advances.
    // Throws numeric_error on non-finite target or basis entries.
    void update(double target, const std::array<double, kAdalineInputs>& basis);

    // Vn = |w1| (w2 is pinned at zero), dV_i/Vt = 2*hypot(pair_i)/Vn.
    // Throws degenerate_envelope when Vn < 1e-9.
    flicker_estimate extract(const flicker_grid& grid) const;

    const adaline_state& state() const noexcept { return state_; }
    adaline_state& state() noexcept { return state_; }
    const adaline_config& config() const noexcept { return config_; }

    // Seed the DC weight from the first observed envelope value.
    void seed_dc_weight(double value) noexcept { state_.weights[0] = value; }

private:
    adaline_config config_;
    adaline_state state_;
};

}  // namespace hefs
