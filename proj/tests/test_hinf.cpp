#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "hefs/errors.hpp"
#include "hefs/flicker_grid.hpp"
#include "hefs/hinf.hpp"
#include "hefs/signal_model.hpp"

using namespace hefs;

namespace {

waveform_spec eq19_spec(double sigma, std::uint64_t seed, double duration) {
    waveform_spec spec;
    spec.harmonics = {{1, 1.5, deg_to_rad(80)},
                      {3, 0.5, deg_to_rad(60)},
                      {5, 0.2, deg_to_rad(45)},
                      {7, 0.15, deg_to_rad(36)},
                      {11, 0.1, deg_to_rad(30)}};
    spec.sampling = {1200.0, duration, 50.0};
    spec.noise = {sigma, seed};
    return spec;
}

hinf_config table_config(std::vector<int> orders) {
    hinf_config cfg;
    cfg.alpha = 8.0;
    cfg.measurement_noise = 0.007;
    cfg.initial_covariance_scale = 1e3;
    cfg.harmonic_orders = std::move(orders);
    return cfg;
}

}  // namespace

TEST_CASE("structure row values") {
    SUBCASE("k=0 single order") {
        const auto h = structure_row(0, 50.0, 1.0 / 1200.0, {1});
        REQUIRE(h.size() == 2);
        CHECK(h(0) == doctest::Approx(1.0));
        CHECK(h(1) == doctest::Approx(0.0));
    }
    SUBCASE("quarter-cycle sample") {
        // oracle: 2*pi*50*6/1200 = pi/2
        const auto h = structure_row(6, 50.0, 1.0 / 1200.0, {1});
        CHECK(h(0) == doctest::Approx(0.0).epsilon(0).scale(1));
        CHECK(std::abs(h(0)) < 1e-12);
        CHECK(h(1) == doctest::Approx(-1.0).epsilon(1e-12));
    }
    SUBCASE("two orders at k=0") {
        const auto h = structure_row(0, 50.0, 1.0 / 1200.0, {1, 3});
        REQUIRE(h.size() == 4);
        CHECK(h(0) == doctest::Approx(1.0));
        CHECK(h(1) == doctest::Approx(0.0));
        CHECK(h(2) == doctest::Approx(1.0));
        CHECK(h(3) == doctest::Approx(0.0));
    }
}

TEST_CASE("zero structure row leaves the state untouched") {
    hinf_filter filter(table_config({1}));
    const Eigen::VectorXd before = filter.state().x_hat;
    Eigen::RowVectorXd h = Eigen::RowVectorXd::Zero(2);
    filter.step(0.77, h);
    CHECK((filter.state().x_hat - before).norm() == doctest::Approx(0.0).epsilon(0).scale(1));
    CHECK(filter.state().step == 1);
}

TEST_CASE("envelope and phase extraction from state pairs") {
    hinf_filter filter(table_config({1}));
    filter.state().x_hat << 3.0, 4.0;
    auto frame = filter.extract_envelopes();
    CHECK(frame.envelopes[0] == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(frame.phases_rad[0] == doctest::Approx(std::atan2(4.0, 3.0)).epsilon(1e-15));

    filter.state().x_hat << 1.5, 0.0;
    frame = filter.extract_envelopes();
    CHECK(frame.envelopes[0] == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(frame.phases_rad[0] == doctest::Approx(0.0).epsilon(0).scale(1));
}

TEST_CASE("extraction invariant under pair sign flip with pi phase shift") {
    hinf_filter filter(table_config({1}));
    filter.state().x_hat << 0.8, -1.1;
    const auto a = filter.extract_envelopes();
    filter.state().x_hat << -0.8, 1.1;
    const auto b = filter.extract_envelopes();
    CHECK(a.envelopes[0] == doctest::Approx(b.envelopes[0]).epsilon(1e-15));
    const double shifted = std::remainder(b.phases_rad[0] - a.phases_rad[0], 2.0 * M_PI);
    CHECK(std::abs(std::abs(shifted) - M_PI) < 1e-12);
}

TEST_CASE("constant-amplitude cosine: envelope within 1e-3 after 48 steps") {
    waveform_spec spec;
    spec.harmonics = {{1, 1.5, deg_to_rad(80)}};
    spec.sampling = {1200.0, 0.05, 50.0};
    const auto z = synthesize(spec);
    const auto frames = run_hinf(table_config({1}), z.samples, 50.0, 1200.0);
    CHECK(std::abs(frames[47].envelopes[0] - 1.5) < 1e-3);
}

TEST_CASE("distorted-waveform startup: envelope 1 within 2% inside one power cycle") {
    const auto spec = eq19_spec(0.02, 1, 0.1);
    auto full = spec;
    full.flickers = {};  // envelope transient is what matters here
    const auto z = synthesize(full);
    const auto frames = run_hinf(table_config({1, 3, 5, 7, 11}), z.samples, 50.0, 1200.0);
    CHECK(std::abs(frames[23].envelopes[0] - 1.5) / 1.5 < 0.02);
}

TEST_CASE("noiseless phases converge to the synthesis phases") {
    auto spec = eq19_spec(0.0, 0, 0.1);
    const auto z = synthesize(spec);
    const auto frames = run_hinf(table_config({1, 3, 5, 7, 11}), z.samples, 50.0, 1200.0);
    const double expected[] = {80.0, 60.0, 45.0, 36.0, 30.0};
    for (int i = 0; i < 5; ++i)
        CHECK(std::abs(rad_to_deg(frames[59].phases_rad[i]) - expected[i]) < 0.5);
}

TEST_CASE("covariance stays symmetric and positive definite for 10000 steps") {
    const auto cfg = table_config({1, 3, 5, 7, 11});
    auto spec = eq19_spec(0.02, 5, 8.4);  // > 10000 samples
    for (std::size_t i = 0; i < kGridSize; ++i)
        spec.flickers.push_back({kIecFrequenciesHz[i], kUnitySensationAmplitude[i], 0.0});
    const auto z = synthesize(spec);

    hinf_filter filter(cfg);
    const double tau = 1.0 / 1200.0;
    std::int64_t pd_steps = 0;
    for (std::size_t k = 0; k < z.samples.size(); ++k) {
        filter.step(z.samples[k], structure_row(static_cast<std::int64_t>(k), 50.0, tau,
                                                cfg.harmonic_orders));
        const Eigen::MatrixXd& p = filter.state().covariance;
        const double asym = (p - p.transpose()).cwiseAbs().maxCoeff();
        CHECK(asym <= 1e-9 * p.cwiseAbs().maxCoeff());
        if (filter.state().step > cfg.effective_warmup()) {
            Eigen::LLT<Eigen::MatrixXd> llt(p);
            REQUIRE(llt.info() == Eigen::Success);
            ++pd_steps;
        }
    }
    CHECK(pd_steps >= 10000);
}

TEST_CASE("noiseless flicker-free state matches batch least squares within 1e-6") {
    auto spec = eq19_spec(0.0, 0, 2.0);
    const auto z = synthesize(spec);
    const auto cfg = table_config({1, 3, 5, 7, 11});

    hinf_filter filter(cfg);
    const double tau = 1.0 / 1200.0;
    const auto n = static_cast<Eigen::Index>(z.samples.size());
    Eigen::MatrixXd big_h(n, 10);
    Eigen::VectorXd zs(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const auto h = structure_row(k, 50.0, tau, cfg.harmonic_orders);
        big_h.row(k) = h;
        zs(k) = z.samples[static_cast<std::size_t>(k)];
        filter.step(zs(k), h);
    }
    const Eigen::VectorXd ls = big_h.householderQr().solve(zs);
    const Eigen::VectorXd diff = (filter.state().x_hat - ls).cwiseAbs();
    CHECK(diff.maxCoeff() < 1e-6);
}

TEST_CASE("infeasible configuration raises feasibility_violation with a step index") {
    auto cfg = table_config({1});
    cfg.alpha = 1e6;  // far past the covariance ceiling
    waveform_spec spec;
    spec.harmonics = {{1, 1.5, 0.0}};
    spec.sampling = {1200.0, 0.2, 50.0};
    const auto z = synthesize(spec);
    bool threw = false;
    try {
        run_hinf(cfg, z.samples, 50.0, 1200.0);
    } catch (const feasibility_violation& ex) {
        threw = true;
        CHECK(ex.step() >= 0);
    }
    CHECK(threw);
}

TEST_CASE("excess process noise for the alpha ceiling is caught") {
    auto cfg = table_config({1, 3, 5, 7, 11});
    cfg.process_noise = 0.2;  // alpha * P approaches 1 -> inner matrix blows up
    const auto spec = eq19_spec(0.02, 2, 2.0);
    const auto z = synthesize(spec);
    CHECK_THROWS_AS(run_hinf(cfg, z.samples, 50.0, 1200.0), feasibility_violation);
}
