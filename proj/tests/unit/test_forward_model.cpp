// SPDX-License-Identifier: MIT
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "sqbsde/errors.hpp"
#include "sqbsde/forward_model.hpp"

using namespace sqbsde;

namespace {

std::pair<double, double> mean_se_terminal(const PathBundle& b, double shift) {
    double m = 0.0, s2 = 0.0;
    const double n = static_cast<double>(b.n_paths);
    for (std::size_t p = 0; p < b.n_paths; ++p) m += b.x_at(p, b.n_steps) - shift;
    m /= n;
    for (std::size_t p = 0; p < b.n_paths; ++p) {
        const double d = b.x_at(p, b.n_steps) - shift - m;
        s2 += d * d;
    }
    return {m, std::sqrt(s2 / (n - 1.0) / n)};
}

}  // namespace

TEST_CASE("untilted Brownian terminal law") {
    const ForwardModel m(Drift::zero(), 1.0, 1.0);
    const auto b = simulate_paths(m, 0.5, 0.0, 100000, 4, 42);
    const auto [mean, se] = mean_se_terminal(b, 0.5);
    CHECK(std::abs(mean) <= 4.0 * se);
    for (std::size_t p = 0; p < 100; ++p) CHECK(b.x_at(p, 0) == 0.5);
}

TEST_CASE("constant tilt shifts the mean") {
    const ForwardModel m(Drift::zero(), 1.0, 1.0);
    const auto b = simulate_paths(m, 0.0, 0.25, 50000, 10, 7, [](double, double) { return 2.0; });
    const auto [mean, se] = mean_se_terminal(b, 0.0);
    CHECK(std::abs(mean - 2.0 * 0.75) <= 4.0 * se);
}

TEST_CASE("linear drift flow is exact") {
    const ForwardModel m(Drift::linear(0.3), 1.0, 1.0);
    const auto b = simulate_paths(m, 0.0, 0.0, 50, 37, 1);
    for (std::size_t p = 0; p < b.n_paths; ++p) {
        CHECK(b.flow_at(p, b.n_steps) == doctest::Approx(std::exp(0.3)).epsilon(1e-12));
        for (std::size_t k = 0; k <= b.n_steps; ++k) CHECK(b.flow_at(p, k) > 0.0);
    }
}

TEST_CASE("flow bounds under tanh drift") {
    const ForwardModel m(Drift::tanh(0.8), 1.0, 2.0);
    const auto b = simulate_paths(m, 0.0, 0.0, 200, 100, 9);
    const double bound = std::exp(0.8 * 2.0);
    for (std::size_t p = 0; p < b.n_paths; ++p)
        for (std::size_t k = 0; k <= b.n_steps; ++k) {
            CHECK(b.flow_at(p, k) <= bound * (1 + 1e-12));
            CHECK(b.flow_at(p, k) >= 1.0 / bound * (1 - 1e-12));
        }
}

TEST_CASE("weak Euler order for linear drift") {
    // The mean of the Euler scheme for a linear SDE follows the noiseless recursion, so sigma = 0
    // isolates the time-discretization error exactly.
    const ForwardModel m(Drift::linear(0.5), 0.0, 1.0);
    const double exact = std::exp(0.5);
    double errs[3];
    std::size_t steps = 8;
    for (double& e : errs) {
        const auto b = simulate_paths(m, 1.0, 0.0, 1, steps, 3);
        e = std::abs(b.x_at(0, steps) - exact);
        steps *= 2;
    }
    CHECK(std::log2(errs[0] / errs[1]) >= 0.9);
    CHECK(std::log2(errs[1] / errs[2]) >= 0.9);
}

TEST_CASE("compatibility of lambda with the drift") {
    CHECK(check_compat_417(ForwardModel(Drift::zero(), 1.0, 1.0), 5).pass);
    CHECK(ForwardModel(Drift::linear(-0.7), 1.0, 1.0).lambda() == doctest::Approx(0.7));
    const auto bad = check_compat_417(ForwardModel(Drift::sine(1.0), 1.0, 1.0, 0.5), 5);
    CHECK_FALSE(bad.pass);
    CHECK(bad.measured == doctest::Approx(1.0));
}

TEST_CASE("gaussian terminal law") {
    auto [m1, v1] = gaussian_terminal_law(ForwardModel(Drift::zero(), 1.0, 1.0), 0.0, 0.0);
    CHECK(m1 == 0.0);
    CHECK(v1 == doctest::Approx(1.0));
    auto [m2, v2] = gaussian_terminal_law(ForwardModel(Drift::zero(), 2.0, 1.0), 3.0, 0.75);
    CHECK(m2 == 3.0);
    CHECK(v2 == doctest::Approx(1.0));
    CHECK_THROWS_AS(gaussian_terminal_law(ForwardModel(Drift::linear(1.0), 1.0, 1.0), 0.0, 0.0),
                    NotGaussianError);
}

TEST_CASE("bit-identical bundles per seed") {
    const ForwardModel m(Drift::tanh(0.3), 1.0, 1.0);
    const auto a = simulate_paths(m, 0.0, 0.0, 64, 16, 99);
    const auto b = simulate_paths(m, 0.0, 0.0, 64, 16, 99);
    const auto c = simulate_paths(m, 0.0, 0.0, 64, 16, 100);
    CHECK(a.x == b.x);
    CHECK(a.noise == b.noise);
    CHECK(a.x != c.x);
    std::ostringstream sa, sb;
    write_paths_csv(a, sa);
    write_paths_csv(b, sb);
    CHECK(sa.str() == sb.str());
    CHECK(sa.str().rfind("path,step,t,x,flow,dB\n", 0) == 0);
}

TEST_CASE("divergence is reported with the step") {
    const ForwardModel m(Drift::zero(), 1.0, 1.0);
    CHECK_THROWS_AS(simulate_paths(m, 0.0, 0.0, 2, 10, 1, [](double, double x) { return 1e300 * (1.0 + x * x); }),
                    SimulationDivergedError);
}
