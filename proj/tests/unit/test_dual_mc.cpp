// SPDX-License-Identifier: MIT
#include <doctest.h>

#include <cmath>
#include <memory>
#include <sstream>

#include "oracles.hpp"
#include "sqbsde/dual_mc.hpp"

using namespace sqbsde;

namespace {

GridSpec grid() {
    GridSpec g;
    g.n_x = 801;
    g.n_t = 50;
    return g;
}

}  // namespace

TEST_CASE("zero control is the plain expectation") {
    const ForwardModel m(Drift::zero(), 1.0, 1.0);
    const auto g = Generator::power(3);
    const Conjugate f(g);
    const auto tc = TerminalCondition::lorentzian();
    const auto e = evaluate_control(m, f, tc, ControlProcess::zero(), 0.0, 0.0, 40000, 10, 5);
    const double ref = oracle::normal_expectation([](double x) { return 1.0 / (1.0 + x * x); });
    CHECK(std::abs(e.value - ref) <= 3.0 * e.std_error);
    CHECK(e.penalty_mean == 0.0);
}

TEST_CASE("constant control: closed-form penalty and shifted law") {
    const ForwardModel m(Drift::zero(), 1.0, 1.0);
    const auto g = Generator::power(3);
    const Conjugate f(g);
    const auto tc = TerminalCondition::cosine();
    const double q = 0.6, t0 = 0.2;
    const auto e = evaluate_control(m, f, tc, ControlProcess::constant(q), 0.1, t0, 40000, 16, 9);
    CHECK(e.penalty_mean == doctest::Approx(f(q) * (1.0 - t0)).epsilon(1e-12));
    const double tau = 1.0 - t0;
    const double ref = oracle::normal_expectation([&](double x) { return std::cos(0.1 + q * tau + std::sqrt(tau) * x); }) +
                       f(q) * tau;
    CHECK(std::abs(e.value - ref) <= 3.0 * e.std_error);

    const auto c = evaluate_control(m, f, TerminalCondition::constant(2.0), ControlProcess::constant(q), 0.0, 0.0,
                                    100, 8, 1);
    CHECK(c.value == doctest::Approx(2.0 + c.penalty_mean).epsilon(1e-12));
    CHECK(c.std_error <= 1e-12);
}

TEST_CASE("translation shifts dual values") {
    const ForwardModel m(Drift::tanh(0.3), 1.0, 1.0);
    const Conjugate f(Generator::power(3));
    const auto tc = TerminalCondition::cosine(0.5);
    const auto ctrl = ControlProcess::piecewise({0.5}, {0.2, -0.3});
    const auto a = evaluate_control(m, f, tc, ctrl, 0.0, 0.0, 2000, 20, 3);
    const auto b = evaluate_control(m, f, tc.shifted(1.5), ctrl, 0.0, 0.0, 2000, 20, 3);
    CHECK(std::abs(b.value - a.value - 1.5) <= 1e-12);
    CHECK(b.std_error == doctest::Approx(a.std_error).epsilon(1e-9));
}

TEST_CASE("feedback control values") {
    const ForwardModel m(Drift::zero(), 1.0, 1.0);
    const auto g = Generator::power(3);
    auto flat = std::make_shared<PdeSolution>(solve(m, g, TerminalCondition::constant(0.5), grid()));
    const auto cf = feedback_control(flat, g);
    CHECK(cf(0.3, 1.0) == 0.0);
    auto even = std::make_shared<PdeSolution>(solve(m, g, TerminalCondition::cosine(), grid()));
    CHECK(feedback_control(even, g)(0.5, 0.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(ControlProcess::piecewise({0.5}, {1.0, 2.0})(0.7, 0.0) == 2.0);
    CHECK(ControlProcess::piecewise({0.5}, {1.0, 2.0})(0.2, 0.0) == 1.0);
}

TEST_CASE("duality gap ladder in the quadratic case") {
    const ForwardModel m(Drift::zero(), 1.0, 1.0);
    const auto g = Generator::quadratic(0.5);
    auto sol = std::make_shared<PdeSolution>(solve(m, g, TerminalCondition::lorentzian(), grid()));
    const auto r = duality_gap(m, Conjugate(g), TerminalCondition::lorentzian(), sol, 0.0, 0.0, 20000, 50, 11,
                               {-0.4, 0.3, 0.9});
    REQUIRE(r.rows.size() == 5);
    for (const auto& row : r.rows) {
        CHECK(row.lower_bound_ok);
        CHECK(row.attainment_ok);
    }
    CHECK(r.rows.back().is_feedback);
    CHECK(r.zero_strictly_above);
    std::ostringstream os;
    write_dual_csv(r, os);
    CHECK(os.str().rfind("control_kind,value,std_error,penalty_mean,pass\npde_value,", 0) == 0);
}

TEST_CASE("zero control is strictly suboptimal for the power generator") {
    const ForwardModel m(Drift::zero(), 1.0, 1.0);
    const auto g = Generator::power(3);
    const auto tc = TerminalCondition::cosine();
    auto sol = std::make_shared<PdeSolution>(solve(m, g, tc, grid()));
    const auto r = duality_gap(m, Conjugate(g), tc, sol, 0.0, 0.0, 20000, 50, 4);
    for (const auto& row : r.rows) CHECK(row.lower_bound_ok);
    CHECK(r.zero_strictly_above);
}
