#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace hefs {

// Robust recursive envelope estimator over the quadrature state
// x = [cos(phi_1)Env_1, sin(phi_1)Env_1, ..., cos(phi_N)Env_N, sin(phi_N)Env_N].
struct hinf_config {
    double alpha = 8.0;                     // worst-case weighting factor
    double measurement_noise = 0.007;       // scalar R > 0
    double initial_covariance_scale = 1e3;  // P0 = scale * I
    double process_noise = 1e-3;            // Q = q * I added each time update
    std::vector<int> harmonic_orders = {1};
    std::vector<double> initial_state;      // 2N entries; default: all ones
    // PD of the covariance is enforced from this step on; the huge-P0 startup
    // is indefinite until the rotating measurement row has swept the state
    // space. Negative = use the default 4N+4.
    std::int64_t pd_check_warmup = -1;

    std::size_t dim() const { return 2 * harmonic_orders.size(); }
    std::int64_t effective_warmup() const {
        return pd_check_warmup >= 0 ? pd_check_warmup
                                    : static_cast<std::int64_t>(4 * harmonic_orders.size() + 4);
    }
};

struct hinf_state {
    Eigen::VectorXd x_hat;
    Eigen::MatrixXd covariance;
    std::int64_t step = 0;
};

struct envelope_frame {
    std::int64_t step = 0;
    std::vector<double> envelopes;   // per-unit, >= 0
    std::vector<double> phases_rad;  // in (-pi, pi]
};

// Measurement row H^k: [cos(2 pi n f k ts), -sin(2 pi n f k ts)] per order n.
Eigen::RowVectorXd structure_row(std::int64_t k, double f_hz, double tau_s,
                                 const std::vector<int>& orders);

class hinf_filter {
public:
    explicit hinf_filter(const hinf_config& config);

    // One measurement update (gain from the covariance held at entry, then
    // state update, then covariance propagation + re-symmetrization).
    // Throws feasibility_violation on a near-singular inner matrix or, after
    // the warmup window, on loss of positive definiteness.
    void step(double z, const Eigen::RowVectorXd& h_row);

    envelope_frame extract_envelopes() const;

    const hinf_state& state() const noexcept { return state_; }
    hinf_state& state() noexcept { return state_; }
    const hinf_config& config() const noexcept { return config_; }

    // max/min |diag| ratio of the last inner factorization, a cheap
    // conditioning proxy surfaced for diagnostics.
    double last_condition_estimate() const noexcept { return last_cond_; }

private:
    hinf_config config_;
    hinf_state state_;
    double last_cond_ = 0.0;
};

// Convenience: run the filter over a series at fixed frequency, return the
// per-step envelope frames (used by oracles and diagnostics).
std::vector<envelope_frame> run_hinf(const hinf_config& config, const std::vector<double>& samples,
                                     double f_hz, double rate_hz);

}  // namespace hefs
