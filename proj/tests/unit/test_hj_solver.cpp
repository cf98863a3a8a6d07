// SPDX-License-Identifier: MIT
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "sqbsde/errors.hpp"
#include "sqbsde/hj_solver.hpp"

using namespace sqbsde;

namespace {

GridSpec small_grid(std::size_t n_x = 401, double half = 8.0) {
    GridSpec g;
    g.x_lo = -half;
    g.x_hi = half;
    g.n_x = n_x;
    g.n_t = 20;
    return g;
}

double lorentz(double x) { return 1.0 / (1.0 + x * x); }

}  // namespace

TEST_CASE("Cole-Hopf reference against independent oracles") {
    const ForwardModel m(Drift::zero(), 1.0, 1.0);
    const auto g = Generator::quadratic(0.5);
    const auto tc = TerminalCondition::lorentzian();
    // Frozen from Simpson quadrature of the heat kernel (oracle::cole_hopf).
    constexpr double frozen = 0.619922986139417;
    CHECK(oracle::cole_hopf(lorentz, 0.5, 1.0, 1.0, 0.0) == doctest::Approx(frozen).epsilon(1e-12));
    CHECK(cole_hopf_reference(m, g, tc, 0.0, 0.0) == doctest::Approx(frozen).epsilon(1e-6));

    // 1e6-sample Monte Carlo cross-check, SE by the delta method.
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> N(0.0, 1.0);
    const int n = 1000000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double v = std::exp(-lorentz(N(rng)));
        s += v;
        s2 += v * v;
    }
    const double mean = s / n, var = s2 / n - mean * mean;
    const double se = std::sqrt(var / n) / mean;
    CHECK(std::abs(-std::log(mean) - frozen) <= 3.0 * se);

    CHECK(cole_hopf_reference(m, g, TerminalCondition::constant(0.3), 0.2, 1.0) == doctest::Approx(0.3));
    CHECK(cole_hopf_reference(m, g, tc, 0.4, 1.5) ==
          doctest::Approx(oracle::cole_hopf(lorentz, 0.5, 1.0, 0.6, 1.5)).epsilon(1e-6));
    CHECK_THROWS_AS(cole_hopf_reference(ForwardModel(Drift::tanh(0.1), 1.0, 1.0), g, tc, 0.0, 0.0),
                    UnsupportedError);
    CHECK_THROWS_AS(cole_hopf_reference(m, Generator::power(3), tc, 0.0, 0.0), UnsupportedError);
}

TEST_CASE("constants are exact solutions") {
    const ForwardModel m(Drift::tanh(0.3), 1.0, 1.0);
    const auto sol = solve(m, Generator::power(3), TerminalCondition::constant(0.7), small_grid());
    for (double u : sol.u) CHECK(std::abs(u - 0.7) <= 1e-12);
    for (double z : sol.z) CHECK(std::abs(z) <= 1e-12);
}

TEST_CASE("quadratic solve matches Cole-Hopf") {
    const ForwardModel m(Drift::zero(), 1.0, 1.0);
    const auto g = Generator::quadratic(0.5);
    const auto tc = TerminalCondition::lorentzian();
    const auto sol = solve(m, g, tc, small_grid(801));
    double gap = 0.0;
    for (std::size_t i = 0; i < sol.n_x(); ++i)
        if (std::abs(sol.x[i]) <= 3.0)
            gap = std::max(gap, std::abs(sol.u_at(0, i) - oracle::cole_hopf(lorentz, 0.5, 1.0, 1.0, sol.x[i])));
    CHECK(gap <= 5e-3);
}

TEST_CASE("terminal level, range and symmetry") {
    const ForwardModel m(Drift::zero(), 1.0, 1.0);
    const auto tc = TerminalCondition::cosine(0.5);
    const auto sol = solve(m, Generator::power(3), tc, small_grid());
    const std::size_t L = sol.n_levels() - 1;
    for (std::size_t i = 0; i < sol.n_x(); ++i) CHECK(sol.u_at(L, i) == tc(sol.x[i]));
    for (std::size_t l = 0; l <= L; ++l)
        for (std::size_t i = 0; i < sol.n_x(); ++i) {
            if (std::abs(sol.x[i]) > 3.0) continue;
            CHECK(std::abs(sol.u_at(l, i)) <= 0.5 + 1e-12);
            CHECK(std::abs(sol.u_at(l, i) - sol.u_at(l, sol.n_x() - 1 - i)) <= 1e-10);
        }
}

TEST_CASE("translation invariance") {
    const ForwardModel m(Drift::tanh(0.3), 1.0, 1.0);
    const auto tc = TerminalCondition::lorentzian(0.8, 0.2, 0.5);
    const auto a = solve(m, Generator::power(3), tc, small_grid());
    const auto b = solve(m, Generator::power(3), tc.shifted(0.25), small_grid());
    double worst = 0.0;
    for (std::size_t k = 0; k < a.u.size(); ++k) worst = std::max(worst, std::abs(b.u[k] - a.u[k] - 0.25));
    CHECK(worst <= 1e-12);
}

TEST_CASE("comparison principle on random ordered pairs") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> U(-1.0, 1.0), P(0.0, 0.5);
    const ForwardModel m(Drift::zero(), 1.0, 1.0);
    for (int pair = 0; pair < 5; ++pair) {
        std::vector<std::pair<double, double>> lo, hi;
        for (int k = 0; k <= 12; ++k) {
            const double x = -3.0 + 0.5 * k, y = U(rng);
            lo.emplace_back(x, y);
            hi.emplace_back(x, y + P(rng));
        }
        const auto a = solve(m, Generator::power(3), TerminalCondition::tabulated(lo), small_grid());
        const auto b = solve(m, Generator::power(3), TerminalCondition::tabulated(hi), small_grid());
        double worst = 0.0;
        for (std::size_t k = 0; k < a.u.size(); ++k) worst = std::max(worst, a.u[k] - b.u[k]);
        CHECK(worst <= 1e-12);
    }
}

TEST_CASE("gradient cap is inactive where the Lipschitz bound dominates") {
    const ForwardModel m(Drift::zero(), 1.0, 1.0);
    const auto tc = TerminalCondition::gaussian(1.0, 0.0, 0.05);
    const double L = std::exp(-0.5) / 0.05;
    const double tau_star = std::pow(2.0 / L, 2);
    auto grid = small_grid(1601);
    grid.n_t = 100;
    const auto sol = solve(m, Generator::power(3), tc, grid);
    for (std::size_t l = 0; l < sol.n_levels(); ++l)
        if (sol.T() - sol.t[l] >= tau_star) CHECK_FALSE(sol.cap_active[l]);
}

TEST_CASE("z field and interpolation") {
    const ForwardModel m(Drift::zero(), 1.0, 1.0);
    const auto sol = solve(m, Generator::power(3), TerminalCondition::cosine(0.5), small_grid());
    CHECK(z_field(sol) == sol.z);
    CHECK(sol.value(sol.t[3], sol.x[100]) == sol.u_at(3, 100));
    CHECK(sol.z_value(0.0, 0.0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("input errors") {
    const ForwardModel m(Drift::zero(), 1.0, 1.0);
    const auto g = Generator::power(3);
    const auto tc = TerminalCondition::cosine();
    CHECK_THROWS_AS(solve(m, g, tc, small_grid(401, 1.0)), DomainError);
    CHECK_THROWS(solve(m, g, tc, small_grid(32)));
    CHECK_THROWS_AS(solve(ForwardModel(Drift::zero(), 0.0, 1.0), g, tc, small_grid()), UnsupportedError);
}

TEST_CASE("domain self-check flags a tight domain") {
    const ForwardModel m(Drift::zero(), 1.0, 1.0);
    auto grid = small_grid(401, 6.2);
    grid.domain_check = true;
    grid.domain_tol = 1e-12;
    const auto tight = solve(m, Generator::power(3), TerminalCondition::cosine(), grid);
    CHECK_FALSE(tight.warnings.empty());
    grid = small_grid(401, 8.0);
    grid.domain_check = true;
    const auto roomy = solve(m, Generator::power(3), TerminalCondition::lorentzian(), grid);
    CHECK(roomy.warnings.empty());
}

TEST_CASE("regularized ladder") {
    const ForwardModel m(Drift::zero(), 1.0, 1.0);
    const auto g = Generator::power(3);
    const auto same = solve_regularized_family(m, g, TerminalCondition::constant(0.4), {1, 2, 4}, Side::Lower,
                                               small_grid());
    for (const auto& s : same) CHECK(s.u == same.front().u);
    const auto fam = solve_regularized_family(m, g, TerminalCondition::step(0, 0, 1), {2, 4, 8}, Side::Lower,
                                              small_grid());
    CHECK(fam[0].value(0, 0) <= fam[1].value(0, 0) + 1e-12);
    CHECK(fam[1].value(0, 0) <= fam[2].value(0, 0) + 1e-12);
    CHECK_THROWS(solve_regularized_family(m, g, TerminalCondition::step(0, 0, 1), {2, 2}, Side::Lower,
                                          small_grid()));
}

TEST_CASE("solution csv") {
    const ForwardModel m(Drift::zero(), 1.0, 1.0);
    const auto sol = solve(m, Generator::power(3), TerminalCondition::cosine(0.5), small_grid());
    std::ostringstream a, b;
    write_solution_csv(sol, a, 5, 10);
    write_solution_csv(solve(m, Generator::power(3), TerminalCondition::cosine(0.5), small_grid()), b, 5, 10);
    CHECK(a.str() == b.str());
    CHECK(a.str().rfind("t,x,u,z,cap_active\n", 0) == 0);
}
