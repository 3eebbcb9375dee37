#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace hefs {

inline constexpr std::size_t kGridSize = 36;

// IEC 61000-4-15 flicker frequency grid, 0.5..25 Hz.
inline constexpr std::array<double, kGridSize> kIecFrequenciesHz = {
    0.5,  1.0,  1.5,  2.0,  2.5,  3.0,  3.5,  4.0,  4.5,  5.0,  5.5,  6.0,
    6.5,  7.0,  7.5,  8.0,  8.8,  9.5,  10.0, 10.5, 11.0, 11.5, 12.0, 13.0,
    14.0, 15.0, 16.0, 17.0, 18.0, 19.0, 20.0, 21.0, 22.0, 23.0, 24.0, 25.0};

// Relative amplitudes dV/Vt that produce unity instantaneous flicker
// sensation at each grid frequency (230 V / 50 Hz systems).
inline constexpr std::array<double, kGridSize> kUnitySensationAmplitude = {
    0.0234,  0.01432, 0.0108,  0.00882, 0.00754, 0.00654, 0.00568, 0.005,
    0.00446, 0.00398, 0.0036,  0.00328, 0.003,   0.0028,  0.00266, 0.00256,
    0.0025,  0.00254, 0.0026,  0.0027,  0.00282, 0.00296, 0.00312, 0.00348,
    0.00388, 0.00432, 0.0048,  0.0053,  0.00584, 0.0064,  0.007,   0.0076,
    0.00824, 0.0089,  0.00962, 0.01042};

class flicker_grid {
public:
    flicker_grid() : frequencies_(kIecFrequenciesHz.begin(), kIecFrequenciesHz.end()) {}

    const std::vector<double>& frequencies() const noexcept { return frequencies_; }
    std::size_t size() const noexcept { return frequencies_.size(); }
    double operator[](std::size_t i) const noexcept { return frequencies_[i]; }

    // Index of a grid frequency, or npos for off-grid values.
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t index_of(double frequency_hz, double tol = 1e-9) const noexcept {
        for (std::size_t i = 0; i < frequencies_.size(); ++i) {
            if (frequency_hz > frequencies_[i] - tol && frequency_hz < frequencies_[i] + tol) return i;
        }
        return npos;
    }

private:
    std::vector<double> frequencies_;
};

// Unity-sensation reference amplitude for a grid frequency.
// Throws unknown-frequency (config_error) for off-grid input.
double iec_reference_amplitude(double frequency_hz);

}  // namespace hefs
