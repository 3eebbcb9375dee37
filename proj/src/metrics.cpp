#include "hefs/metrics.hpp"

#include <cmath>
#include <string>

#include "hefs/errors.hpp"

namespace hefs {

sensation_report sensation(const std::array<double, kGridSize>& estimated, const flicker_grid& grid) {
    sensation_report rep;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(estimated[i]) || estimated[i] < 0.0)
            throw numeric_error("sensation input must be finite and >= 0");
        rep.contributions[i] = estimated[i] / kUnitySensationAmplitude[i];
        rep.total += rep.contributions[i];
    }
    return rep;
}

sample_series reconstruct_envelope(double vn, const std::array<double, kGridSize>& amplitudes,
                                   const std::array<double, kGridSize>& phases_rad,
                                   const flicker_grid& grid, const sampling_spec& sampling) {
    if (vn <= 0.0) throw config_error("reconstruction needs Vn > 0");
    const double ts = 1.0 / sampling.rate_hz;
    const auto n = static_cast<std::size_t>(std::llround(sampling.duration_s * sampling.rate_hz));
    const double two_pi = 2.0 * 3.14159265358979323846;
    sample_series out;
    out.rate_hz = sampling.rate_hz;
    out.samples.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * ts;
        double mod = 1.0;
        for (std::size_t i = 0; i < grid.size(); ++i)
            mod += 0.5 * amplitudes[i] * std::cos(two_pi * grid[i] * t + phases_rad[i]);
        out.samples[k] = vn * mod;
    }
    return out;
}

error_stats compute_error_stats(const std::vector<double>& estimated, const std::vector<double>& truth) {
    if (estimated.size() != truth.size())
        throw data_error("error_stats length mismatch: " + std::to_string(estimated.size()) + " vs " +
                         std::to_string(truth.size()));
    if (estimated.empty()) throw data_error("error_stats needs at least one sample");
    error_stats st;
    const auto n = static_cast<double>(estimated.size());
    for (std::size_t i = 0; i < estimated.size(); ++i) {
        const double e = estimated[i] - truth[i];
        st.mean += e;
        st.mse += e * e;
        st.max_abs = std::max(st.max_abs, std::abs(e));
    }
    st.mean /= n;
    st.mse /= n;
    st.variance = st.mse - st.mean * st.mean;
    if (st.variance < 0.0) st.variance = 0.0;
    return st;
}

}  // namespace hefs
