#include "hefs/hinf.hpp"

#include <cmath>
#include <string>

#include "hefs/errors.hpp"

namespace hefs {

namespace {
constexpr double kTwoPi = 2.0 * 3.14159265358979323846;
}

Eigen::RowVectorXd structure_row(std::int64_t k, double f_hz, double tau_s,
                                 const std::vector<int>& orders) {
    Eigen::RowVectorXd h(2 * orders.size());
    const double t = static_cast<double>(k) * tau_s;
    for (std::size_t j = 0; j < orders.size(); ++j) {
        const double ang = kTwoPi * orders[j] * f_hz * t;
        h(2 * j) = std::cos(ang);
        h(2 * j + 1) = -std::sin(ang);
    }
    return h;
}

hinf_filter::hinf_filter(const hinf_config& config) : config_(config) {
    if (config_.alpha <= 0.0) throw config_error("hinf alpha must be > 0");
    if (config_.measurement_noise <= 0.0) throw config_error("hinf measurement noise must be > 0");
    if (config_.initial_covariance_scale <= 0.0)
        throw config_error("hinf initial covariance scale must be > 0");
    if (config_.process_noise < 0.0) throw config_error("hinf process noise must be >= 0");
    if (config_.harmonic_orders.empty()) throw config_error("hinf needs at least one harmonic order");
    const auto n = static_cast<Eigen::Index>(config_.dim());
    state_.covariance = config_.initial_covariance_scale * Eigen::MatrixXd::Identity(n, n);
    if (config_.initial_state.empty()) {
        state_.x_hat = Eigen::VectorXd::Ones(n);
    } else {
        if (config_.initial_state.size() != config_.dim())
            throw config_error("hinf initial state must have 2N entries");
        state_.x_hat = Eigen::Map<const Eigen::VectorXd>(config_.initial_state.data(), n);
    }
    state_.step = 0;
}

void hinf_filter::step(double z, const Eigen::RowVectorXd& h_row) {
    const auto n = static_cast<Eigen::Index>(config_.dim());
    if (h_row.size() != n) throw config_error("structure row dimension mismatch");
    if (!std::isfinite(z)) throw numeric_error("non-finite measurement at step " + std::to_string(state_.step));

    const Eigen::MatrixXd& p = state_.covariance;
    const double r_inv = 1.0 / config_.measurement_noise;

    // Inner matrix M = I - alpha P + H^T R^-1 H P, shared by gain and
    // covariance propagation.
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n) - config_.alpha * p;
    m.noalias() += h_row.transpose() * (r_inv * (h_row * p));

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
    const Eigen::VectorXd u_diag = lu.matrixLU().diagonal().cwiseAbs();
    const double dmax = u_diag.maxCoeff();
    const double dmin = u_diag.minCoeff();
    last_cond_ = (dmin > 0.0) ? dmax / dmin : std::numeric_limits<double>::infinity();
    if (!(dmin > 0.0) || last_cond_ > 1e12)
        throw feasibility_violation(state_.step, "hinf inner matrix numerically singular");

    const Eigen::MatrixXd m_inv = lu.inverse();

    // Gain from the entry covariance, state update with Phi = I.
    const Eigen::VectorXd gain = p * (m_inv * (h_row.transpose() * r_inv));
    const double innovation = z - h_row.dot(state_.x_hat);
    state_.x_hat += gain * innovation;

    // Covariance propagation plus process noise, re-symmetrized.
    Eigen::MatrixXd p_next = p * m_inv;
    p_next.diagonal().array() += config_.process_noise;
    state_.covariance = 0.5 * (p_next + p_next.transpose());
    ++state_.step;

    if (state_.step > config_.effective_warmup()) {
        Eigen::LLT<Eigen::MatrixXd> llt(state_.covariance);
        if (llt.info() != Eigen::Success)
            throw feasibility_violation(state_.step, "hinf covariance lost positive definiteness");
    }
}

envelope_frame hinf_filter::extract_envelopes() const {
    const std::size_t n_env = config_.harmonic_orders.size();
    envelope_frame frame;
    frame.step = state_.step;
    frame.envelopes.resize(n_env);
    frame.phases_rad.resize(n_env);
    for (std::size_t i = 0; i < n_env; ++i) {
        const double xc = state_.x_hat(2 * i);
        const double xs = state_.x_hat(2 * i + 1);
        frame.envelopes[i] = std::hypot(xc, xs);
        double ph = std::atan2(xs, xc);
        if (ph <= -3.14159265358979323846) ph = 3.14159265358979323846;
        frame.phases_rad[i] = ph;
    }
    return frame;
}

std::vector<envelope_frame> run_hinf(const hinf_config& config, const std::vector<double>& samples,
                                     double f_hz, double rate_hz) {
    hinf_filter filter(config);
    const double tau_s = 1.0 / rate_hz;
    std::vector<envelope_frame> frames;
    frames.reserve(samples.size());
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const auto h = structure_row(static_cast<std::int64_t>(k), f_hz, tau_s, config.harmonic_orders);
        filter.step(samples[k], h);
        frames.push_back(filter.extract_envelopes());
    }
    return frames;
}

}  // namespace hefs
