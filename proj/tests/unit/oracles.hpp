// SPDX-License-Identifier: MIT
// Reference computations that do not share code with the library.
#pragma once

#include <cmath>
#include <functional>
#include <random>

namespace oracle {

// sup_z (z x - g(z)) by a dense scan plus local golden refinement.
inline double conjugate(const std::function<double(double)>& g, double x, double zmax = 50.0) {
    constexpr int n = 200000;
    double best = -INFINITY, zb = 0.0;
    for (int i = -n; i <= n; ++i) {
        const double z = zmax * i / n;
        const double v = z * x - g(z);
        if (v > best) best = v, zb = z;
    }
    double a = zb - zmax / n, b = zb + zmax / n;
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int it = 0; it < 100; ++it) {
        const double c = b - r * (b - a), d = a + r * (b - a);
        if (c * x - g(c) > d * x - g(d)) b = d;
        else a = c;
    }
    const double z = 0.5 * (a + b);
    return std::max(best, z * x - g(z));
}

// E[f(N)] for a standard normal by composite Simpson on [-12, 12].
inline double normal_expectation(const std::function<double(double)>& f, int n = 24000) {
    const double lo = -12.0, hi = 12.0, h = (hi - lo) / n;
    const double c = 1.0 / std::sqrt(2.0 * M_PI);
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double x = lo + h * i;
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        s += w * f(x) * c * std::exp(-0.5 * x * x);
    }
    return s * h / 3.0;
}

// Heat-kernel value of the quadratic problem: -(1/2g) log E[exp(-2g Phi(x + s sqrt(tau) N))].
inline double cole_hopf(const std::function<double(double)>& phi, double gamma, double sigma, double tau,
                        double x) {
    const double e = normal_expectation(
        [&](double n) { return std::exp(-2.0 * gamma * phi(x + sigma * std::sqrt(tau) * n)); });
    return -std::log(e) / (2.0 * gamma);
}

// Plain Monte Carlo version of the same value with an unrelated generator.
inline double cole_hopf_mc(const std::function<double(double)>& phi, double gamma, double sigma,
                           double tau, double x, int n, unsigned long long seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> N(0.0, 1.0);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += std::exp(-2.0 * gamma * phi(x + sigma * std::sqrt(tau) * N(rng)));
    return -std::log(s / n) / (2.0 * gamma);
}

}  // namespace oracle
