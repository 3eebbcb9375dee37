#include "hefs/flicker_grid.hpp"

#include <string>

#include "hefs/errors.hpp"

namespace hefs {

double iec_reference_amplitude(double frequency_hz) {
    static const flicker_grid grid;
    const std::size_t i = grid.index_of(frequency_hz);
    if (i == flicker_grid::npos)
        throw config_error("unknown flicker frequency " + std::to_string(frequency_hz) +
                           " Hz: not on the 36-entry grid");
    return kUnitySensationAmplitude[i];
}

}  // namespace hefs
