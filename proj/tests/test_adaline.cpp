#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "hefs/adaline.hpp"
#include "hefs/errors.hpp"

using namespace hefs;

namespace {
constexpr double kTau = 1.0 / 1200.0;
const flicker_grid kGrid;

double grid_envelope(std::int64_t k, double vn, double f, double rel, double phase_rad) {
    return vn * (1.0 + 0.5 * rel * std::cos(2.0 * M_PI * f * k * kTau + phase_rad));
}
}  // namespace

TEST_CASE("basis vector structure") {
    SUBCASE("k=0 is all [1,0] pairs") {
        const auto u = basis_vector(0, kTau, kGrid);
        REQUIRE(u.size() == 74);
        CHECK(u[0] == 1.0);
        CHECK(u[1] == 0.0);
        for (std::size_t i = 0; i < kGridSize; ++i) {
            CHECK(u[2 + 2 * i] == doctest::Approx(1.0));
            CHECK(u[3 + 2 * i] == doctest::Approx(0.0));
        }
    }
    SUBCASE("integer-cycle instant for 1 Hz") {
        const auto u = basis_vector(1200, kTau, kGrid);
        const std::size_t i = kGrid.index_of(1.0);
        CHECK(u[2 + 2 * i] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(u[3 + 2 * i]) < 1e-12);
    }
    SUBCASE("basis energy is 37 at every step") {
        for (std::int64_t k : {0, 17, 1200, 35999}) {
            const auto u = basis_vector(k, kTau, kGrid);
            double e = 0.0;
            for (const double v : u) e += v * v;
            CHECK(e == doctest::Approx(37.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("learning rate schedule") {
    adaline_config cfg;
    cfg.initial_rate = 5.0;
    cfg.decay = 1000.0;
    CHECK(learning_rate(0, cfg) == doctest::Approx(5.0));
    CHECK(learning_rate(1000, cfg) == doctest::Approx(2.5));
    CHECK(learning_rate(9000, cfg) == doctest::Approx(0.5));
    double prev = learning_rate(0, cfg);
    for (std::int64_t k = 1; k < 5000; k += 7) {
        const double r = learning_rate(k, cfg);
        CHECK(r < prev);
        CHECK(r > 0.0);
        prev = r;
    }
}

TEST_CASE("update is a fixed point at zero error") {
    adaline_unit unit{adaline_config{}};
    unit.state().weights[0] = 1.5;
    const auto before = unit.state().weights;
    const auto u = basis_vector(0, kTau, kGrid);
    double pred = 0.0;
    for (std::size_t i = 0; i < kAdalineInputs; ++i) pred += before[i] * u[i];
    unit.update(pred, u);
    CHECK(unit.state().weights == before);
    CHECK(unit.state().last_error == doctest::Approx(0.0));
}

TEST_CASE("single-step update moves the active weight by theta*c/(lambda+1)") {
    adaline_config cfg;
    cfg.initial_rate = 5.0;
    cfg.regularizer = 1e-4;
    adaline_unit unit{cfg};
    std::array<double, kAdalineInputs> e1{};
    e1[0] = 1.0;
    const double c = 0.37;
    unit.update(c, e1);
    CHECK(unit.state().weights[0] == doctest::Approx(5.0 * c / (1e-4 + 1.0)).epsilon(1e-14));
}

TEST_CASE("non-finite inputs are rejected") {
    adaline_unit unit{adaline_config{}};
    auto u = basis_vector(0, kTau, kGrid);
    CHECK_THROWS_AS(unit.update(std::nan(""), u), numeric_error);
    u[5] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(unit.update(1.0, u), numeric_error);
}

TEST_CASE("denominator never falls below the regularizer") {
    adaline_config cfg;
    adaline_unit unit{cfg};
    for (std::int64_t k = 0; k < 500; ++k) {
        const auto u = basis_vector(k, kTau, kGrid);
        double energy = 0.0;
        for (const double v : u) energy += v * v;
        CHECK(cfg.regularizer + energy >= cfg.regularizer);
        unit.update(grid_envelope(k, 1.5, 10.0, 0.02, 0.0), u);
        CHECK(std::isfinite(unit.state().last_error));
    }
}

TEST_CASE("amplitude extraction from known weights") {
    adaline_unit unit{adaline_config{}};
    unit.state().weights.fill(0.0);
    unit.state().weights[0] = 1.5;
    unit.state().weights[2] = 0.015;  // first grid pair, cos side
    const auto est = unit.extract(kGrid);
    CHECK(est.harmonic_amplitude == doctest::Approx(1.5));
    // oracle: 2*0.015/1.5
    CHECK(est.relative_amplitudes[0] == doctest::Approx(0.02).epsilon(1e-14));
    for (std::size_t i = 1; i < kGridSize; ++i)
        CHECK(est.relative_amplitudes[i] == doctest::Approx(0.0));
    CHECK(est.phases_rad[0] == doctest::Approx(0.0));
}

TEST_CASE("degenerate harmonic amplitude is reported") {
    adaline_unit unit{adaline_config{}};
    unit.state().weights.fill(0.0);
    CHECK_THROWS_AS(unit.extract(kGrid), degenerate_envelope);
}

TEST_CASE("noiseless stationary envelope: converged weights match batch least squares") {
    // 3 grid tones + DC, 16 s of data.
    const double vn = 1.5;
    const struct { double f, rel, ph; } tones[] = {{5.0, 0.01, 0.3}, {10.5, 0.005, 1.0}, {0.5, 0.002, 0.0}};
    auto target = [&](std::int64_t k) {
        double v = vn;
        for (const auto& t : tones)
            v += vn * 0.5 * t.rel * std::cos(2.0 * M_PI * t.f * k * kTau + t.ph);
        return v;
    };

    adaline_config cfg;
    cfg.initial_rate = 1.0;
    adaline_unit unit{cfg};
    unit.seed_dc_weight(target(0));
    const std::int64_t n = 16 * 1200;
    for (std::int64_t k = 0; k < n; ++k) unit.update(target(k), basis_vector(k, kTau, kGrid));

    // Batch LS over an integer number of grid periods (first 4 s).
    const Eigen::Index m = 4 * 1200;
    Eigen::MatrixXd a(m, 74);
    Eigen::VectorXd y(m);
    for (Eigen::Index k = 0; k < m; ++k) {
        const auto u = basis_vector(k, kTau, kGrid);
        for (Eigen::Index j = 0; j < 74; ++j) a(k, j) = u[static_cast<std::size_t>(j)];
        y(k) = target(k);
    }
    // The second column is identically zero; solve on the reduced system.
    const Eigen::VectorXd w_ls = a.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(y);
    for (std::size_t i = 0; i < kAdalineInputs; ++i)
        CHECK(std::abs(unit.state().weights[i] - w_ls(static_cast<Eigen::Index>(i))) < 1e-3);
}

TEST_CASE("extraction round trip reconstructs the envelope") {
    const double vn = 1.5;
    const double rel = 0.02, f = 5.0, ph = 0.4;
    adaline_config cfg;
    adaline_unit unit{cfg};
    unit.seed_dc_weight(grid_envelope(0, vn, f, rel, ph));
    const std::int64_t n = 10 * 1200;
    for (std::int64_t k = 0; k < n; ++k)
        unit.update(grid_envelope(k, vn, f, rel, ph), basis_vector(k, kTau, kGrid));
    const auto est = unit.extract(kGrid);

    double acc = 0.0;
    for (std::int64_t k = 0; k < 1200; ++k) {
        double v = est.harmonic_amplitude;
        for (std::size_t i = 0; i < kGridSize; ++i)
            v += est.harmonic_amplitude * 0.5 * est.relative_amplitudes[i] *
                 std::cos(2.0 * M_PI * kGrid[i] * k * kTau + est.phases_rad[i]);
        const double diff = v - grid_envelope(k, vn, f, rel, ph);
        acc += diff * diff;
    }
    CHECK(std::sqrt(acc / 1200.0) < 1e-3);
}

TEST_CASE("weight initialization modes") {
    adaline_config cfg;
    cfg.init = weight_init::table_ones;
    adaline_unit ones{cfg};
    CHECK(ones.state().weights[0] == 1.0);
    CHECK(ones.state().weights[1] == 0.0);  // pinned, zero-gradient input
    CHECK(ones.state().weights[2] == 1.0);

    cfg.init = weight_init::random;
    cfg.init_seed = 11;
    adaline_unit r1{cfg};
    adaline_unit r2{cfg};
    CHECK(r1.state().weights == r2.state().weights);
    cfg.init_seed = 12;
    adaline_unit r3{cfg};
    CHECK(r1.state().weights != r3.state().weights);
}
