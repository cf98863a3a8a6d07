// SPDX-License-Identifier: MIT
#include <doctest.h>

#include <cmath>
#include <sstream>

#include <boost/math/special_functions/zeta.hpp>

#include "sqbsde/counterexamples.hpp"
#include "sqbsde/errors.hpp"

using namespace sqbsde;

namespace {

const CheckOutcome& find(const CounterexampleReport& r, const std::string& name) {
    for (const auto& c : r.checks)
        if (c.name == name) return c;
    FAIL("missing row " << name);
    return r.checks.front();
}

bool all_hard(const CounterexampleReport& r) {
    for (const auto& c : r.checks)
        if (c.hard && !c.pass) return false;
    return true;
}

}  // namespace

TEST_CASE("Euler-Maclaurin tail against the zeta function") {
    for (double s : {2.0, 3.0, 5.0})
        for (double K : {10.0, 100.0, 10000.0}) {
            long double head = 0.0L;
            for (long k = static_cast<long>(K); k >= 1; --k) head += std::pow(static_cast<long double>(k), -s);
            const double ref = boost::math::zeta(s) - static_cast<double>(head);
            CHECK(zeta_tail(s, K) == doctest::Approx(ref).epsilon(1e-6));
        }
}

TEST_CASE("series construction") {
    const auto s = build_thm31(3.0, 10000);
    // delta sums to T: alpha = zeta(5) / 3 for q = 3 (s = (3q - 4)/(q - 2) = 5).
    CHECK(s.alpha == doctest::Approx(boost::math::zeta(5.0) / 3.0).epsilon(1e-12));
    CHECK(s.z[6] == doctest::Approx(7.0));
    CHECK(s.g[6] == doctest::Approx(343.0));
    const auto r = thm31_series_report(s);
    CHECK(all_hard(r));
    CHECK(find(r, "divergence_witness_K_for_10_over_alpha").statistic == 16.0);
    CHECK(find(r, "cost_partial_over_sum_k2_max").statistic == doctest::Approx(1.0 / 3.0));
    const auto s4 = build_thm31(4.0, 100);
    CHECK(s4.alpha == doctest::Approx(boost::math::zeta(4.0) / 4.0).epsilon(1e-9));
    CHECK_THROWS(build_thm31(2.0, 100));
    CHECK_THROWS(build_thm31(3.0, 5));
}

TEST_CASE("series construction reports the feasible range") {
    try {
        build_thm31(2.001, 10000);
        FAIL("expected a range error");
    } catch (const RangeError& e) {
        CHECK(e.max_feasible() >= 1);
        CHECK(e.max_feasible() < 10000);
    }
}

TEST_CASE("excursion construction") {
    const auto c = build_thm33(3.0, 2, 0.5, 0.5, 8);
    CHECK(c.delta_n == doctest::Approx(0.125));
    CHECK(c.x[0] == doctest::Approx(16.0));  // (4^n)^{1/(q-2)}
    for (std::size_t k = 0; k <= c.K; ++k) {
        const double x = c.x[k], tk = std::pow(0.5, static_cast<double>(k));
        CHECK(x * x * x >= 16.0 * x * x);
        CHECK(x * x * (tk - tk * 0.5) * tk * c.delta_n >= 1.0);
    }
    CHECK_THROWS_AS(simulate_thm33_excursion(c, 100, 20, 1), ResolutionError);
    const auto r = simulate_thm33_excursion(c, 4000, 450, 3);
    CHECK(all_hard(r));
    CHECK(find(r, "closed_form_bound_equals_reflection_value").statistic <= 1e-15);
}

TEST_CASE("comb construction closed forms") {
    const auto c = build_thm34(3.0, 4);
    for (std::size_t k = 1; k <= 4; ++k) {
        // q = 3: z_k = 16^k, alpha_k = 16^{3k}.
        CHECK(c.z[k - 1] == doctest::Approx(std::pow(16.0, k)));
        CHECK(c.alpha[k - 1] == doctest::Approx(std::pow(16.0, 3.0 * k)));
    }
    // Brute-force sup |F(t) - t| over comb endpoints for k = 1 (alpha = 4096).
    const double a = c.alpha[0], g = c.g[0], T = 1.0;
    const double cper = T / a, w = T / (a * a);
    double worst = 0.0, F = 0.0;
    for (int i = 0; i < static_cast<int>(a); ++i) {
        const double start = cper * i, open = start + cper - w;
        worst = std::max(worst, std::abs(F - open));
        F += g * w;
        worst = std::max(worst, std::abs(F - (start + cper)));
        CHECK(thm34_active_measure(c, 1, start + cper) == doctest::Approx(w * (i + 1)).epsilon(1e-12));
    }
    CHECK(thm34_sup_deviation(c, 1) == doctest::Approx(worst).epsilon(1e-9));
    CHECK(thm34_active_measure(c, 2, 0.0) == 0.0);
    CHECK(thm34_active_measure(c, 2, 1.0) == doctest::Approx(1.0 / c.alpha[1]));
}

TEST_CASE("comb checks and witness") {
    const auto c = build_thm34(3.0, 6);
    const auto r = thm34_checks(c, 2000, 500, 5);
    CHECK(all_hard(r));
    CHECK(find(r, "energy_k6").statistic <= std::pow(16.0, -6));
    const auto w = limit_not_solution_witness(c, 5, 1000, 500);
    CHECK(all_hard(w));
    CHECK_THROWS_AS(build_thm34(3.0, 50), RangeError);
}

TEST_CASE("reports are reproducible") {
    const auto c = build_thm34(3.0, 3);
    std::ostringstream a, b;
    write_counterexample_csv(thm34_checks(c, 300, 200, 9), a);
    write_counterexample_csv(thm34_checks(c, 300, 200, 9), b);
    CHECK(a.str() == b.str());
    CHECK(a.str().rfind("construction,check,value,threshold,pass\n", 0) == 0);
}
