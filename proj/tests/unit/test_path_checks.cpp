// SPDX-License-Identifier: MIT
#include <doctest.h>

#include <cmath>

#include "sqbsde/errors.hpp"
#include "sqbsde/path_checks.hpp"

using namespace sqbsde;

namespace {

GridSpec grid(std::size_t n_x, std::size_t n_t) {
    GridSpec g;
    g.n_x = n_x;
    g.n_t = n_t;
    return g;
}

}  // namespace

TEST_CASE("constant terminal data") {
    const ForwardModel m(Drift::zero(), 1.0, 1.0);
    const auto g = Generator::power(3);
    const auto tc = TerminalCondition::constant(0.6);
    const auto sol = solve(m, g, tc, grid(401, 20));
    const auto b = simulate_paths(m, 0.0, 0.0, 200, 20, 1);
    const auto r = bsde_residual(sol, m, g, tc, b);
    CHECK(r.rms_terminal_residual <= 1e-10);
    CHECK(r.max_step_residual <= 1e-10);
    CHECK(r.energy == 0.0);
    CHECK(bmo_energy_check(r, 0.6).pass);
    CHECK(apriori_z_bound(sol, m, 0.6).worst_ratio == 0.0);
    CHECK(penalty_bound_check(sol, Conjugate(g), 0.6).worst_ratio == 0.0);
    CHECK_THROWS_AS(exponent_fit(sol, 3.0), NoFitError);
}

TEST_CASE("terminal residual shrinks under refinement") {
    const ForwardModel m(Drift::zero(), 1.0, 1.0);
    for (const auto& g : {Generator::quadratic(0.5), Generator::power(3)}) {
        const auto tc = TerminalCondition::cosine(0.5);
        const auto coarse = solve(m, g, tc, grid(201, 20));
        const auto fine = solve(m, g, tc, grid(401, 80));
        const auto rc = bsde_residual(coarse, m, g, tc, simulate_paths(m, 0.0, 0.0, 2000, 20, 8));
        const auto rf = bsde_residual(fine, m, g, tc, simulate_paths(m, 0.0, 0.0, 2000, 80, 8));
        CHECK(rc.rms_terminal_residual / rf.rms_terminal_residual >= 1.5);
    }
}

TEST_CASE("energy and envelope checks on a Lipschitz case") {
    const ForwardModel m(Drift::tanh(0.3), 1.0, 1.0);
    const auto g = Generator::power(3);
    const auto tc = TerminalCondition::cosine(0.5);
    const auto sol = solve(m, g, tc, grid(801, 100));
    const auto r = bsde_residual(sol, m, g, tc, simulate_paths(m, 0.0, 0.0, 2000, 100, 2));
    const auto bmo = bmo_energy_check(r, 0.5);
    CHECK(bmo.pass);
    CHECK(bmo.threshold >= 1.0);
    const auto zb = apriori_z_bound(sol, m, 0.5);
    CHECK(zb.pass);
    CHECK(zb.levels_checked == 91);
    const auto pb = penalty_bound_check(sol, Conjugate(g), 0.5);
    CHECK_FALSE(pb.skipped);
    CHECK(pb.pass);
}

TEST_CASE("penalty composite convexity") {
    CHECK(penalty_composite_convex(Generator::power(3), 10.0));
    CHECK(penalty_composite_convex(Generator::quadratic(2.0), 10.0));
    CHECK_FALSE(penalty_composite_convex(Generator::power(3).truncated(2.0), 5.0));
}

TEST_CASE("exponent fit recovers the envelope slope") {
    const ForwardModel m(Drift::zero(), 1.0, 1.0);
    const auto tc = TerminalCondition::step(0, 0, 1).regularized(50.0, Side::Lower);
    GridSpec gs = grid(1201, 1000);
    gs.x_lo = -6.0;
    gs.x_hi = 6.0;
    const auto sol = solve(m, Generator::power(3), tc, gs);
    const auto f = exponent_fit(sol, 3.0);
    CHECK(f.points == 91);
    CHECK(f.pass);
    CHECK(f.target == doctest::Approx(-1.0 / 3.0));
}

TEST_CASE("flow identity under linear drift") {
    const ForwardModel m(Drift::linear(0.4), 1.0, 1.0);
    GridSpec gs = grid(801, 50);
    gs.x_lo = -12.0;
    gs.x_hi = 12.0;
    const auto sol = solve(m, Generator::power(3), TerminalCondition::cosine(0.5), gs);
    const auto b = simulate_paths(m, 0.0, 0.0, 100, 50, 6);
    CHECK(flow_identity_residual(sol, b) <= 1e-12);
}

TEST_CASE("paths leaving the grid raise a domain error") {
    const ForwardModel m(Drift::zero(), 1.0, 1.0);
    const auto g = Generator::power(3);
    const auto tc = TerminalCondition::cosine(0.5);
    const auto sol = solve(m, g, tc, grid(401, 20));
    const auto b = simulate_paths(ForwardModel(Drift::zero(), 6.0, 1.0), 0.0, 0.0, 400, 20, 1);
    CHECK_THROWS_AS(bsde_residual(sol, m, g, tc, b), DomainError);
}
