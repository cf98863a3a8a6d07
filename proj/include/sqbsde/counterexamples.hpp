// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <vector>

#include "sqbsde/report.hpp"

namespace sqbsde {

// Non-existence ingredients: z_k = k^{1/(q-2)}, delta_k = 1 / (alpha z_k g'(z_k) k^2)
// with alpha fixed by sum delta_k = T, g(z) = |z|^q.
struct Thm31Sequences {
    double q = 3.0;
    double T = 1.0;
    std::size_t K = 0;
    std::vector<double> z, g, gprime, delta;
    double alpha = 0.0;
    double tail = 0.0;  // sum_{k > K} 1 / (z_k g'(z_k) k^2), Euler-Maclaurin
    std::vector<double> cost;    // running sum g(z_k) delta_k
    std::vector<double> energy;  // running sum z_k^2 delta_k
    std::vector<double> qvar;    // running sum g'(z_k)^2 delta_k
};

Thm31Sequences build_thm31(double q, std::size_t K, double T = 1.0);

/// sum_{k > K} k^{-s} by Euler-Maclaurin with three correction terms.
double zeta_tail(double s, double K);

CounterexampleReport thm31_series_report(const Thm31Sequences& s);

// Non-uniqueness excursion on [alpha_n, alpha_{n+1}).
struct Thm33Config {
    double q = 3.0;
    int n = 2;
    double theta = 0.5;
    double epsilon = 0.5;
    std::size_t K = 8;
    double T = 1.0;
    double delta_n = 0.0;  // 2^{-n-1} T
    std::vector<double> x;  // x_0 .. x_K
};

Thm33Config build_thm33(double q, int n, double theta, double epsilon, std::size_t K,
                        double T = 1.0);

CounterexampleReport simulate_thm33_excursion(const Thm33Config& cfg, std::size_t n_paths,
                                              std::size_t n_steps, std::uint64_t seed);

// Non-stability comb construction.
struct Thm34Config {
    double q = 3.0;
    std::size_t K = 6;
    double T = 1.0;
    std::vector<double> z, g, alpha;  // index k - 1
};

Thm34Config build_thm34(double q, std::size_t K, double T = 1.0);

/// Closed-form sup_t |int_0^t g(Z^k) du - t| for comb k (1-based).
double thm34_sup_deviation(const Thm34Config& cfg, std::size_t k);

/// Active length of comb k inside [0, t].
double thm34_active_measure(const Thm34Config& cfg, std::size_t k, double t);

CounterexampleReport thm34_checks(const Thm34Config& cfg, std::size_t n_paths,
                                  std::size_t n_steps, std::uint64_t seed,
                                  std::size_t sim_cap = 3);

CounterexampleReport limit_not_solution_witness(const Thm34Config& cfg, std::uint64_t seed,
                                                std::size_t n_paths = 2000,
                                                std::size_t n_steps = 1000,
                                                std::size_t sim_cap = 3);

}  // namespace sqbsde
