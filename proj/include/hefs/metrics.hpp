#pragma once

#include <array>
#include <string>
#include <vector>

#include "hefs/flicker_grid.hpp"
#include "hefs/signal_model.hpp"

namespace hefs {

// Per-frequency amplitude-ratio sum against the unity-sensation grid.
// A proxy index, not the flickermeter block-4 output.
struct sensation_report {
    std::array<double, kGridSize> contributions{};
    double total = 0.0;
    std::string reference_table = "unity-sensation-grid-50hz";
};

struct error_stats {
    double mean = 0.0;
    double variance = 0.0;  // population
    double mse = 0.0;
    double max_abs = 0.0;
};

sensation_report sensation(const std::array<double, kGridSize>& estimated, const flicker_grid& grid);

// envelope_k = Vn * (1 + sum_i (a_i/2) cos(2 pi F_i k ts + phase_i))
sample_series reconstruct_envelope(double vn, const std::array<double, kGridSize>& amplitudes,
                                   const std::array<double, kGridSize>& phases_rad,
                                   const flicker_grid& grid, const sampling_spec& sampling);

error_stats compute_error_stats(const std::vector<double>& estimated, const std::vector<double>& truth);

}  // namespace hefs
