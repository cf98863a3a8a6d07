// SPDX-License-Identifier: MIT
#include "sqbsde/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace sqbsde {

namespace {

// Newton iteration on the orthonormal Hermite recurrence, seeded with the
// classical asymptotic root guesses.
NormalRule build_rule(std::size_t n) {
    const double pim4 = std::pow(M_PI, -0.25);
    std::vector<double> x(n), w(n);
    const std::size_t m = (n + 1) / 2;
    double z = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double nd = static_cast<double>(n);
        if (i == 0)
            z = std::sqrt(2.0 * nd + 1.0) - 1.85575 * std::pow(2.0 * nd + 1.0, -1.0 / 6.0);
        else if (i == 1)
            z -= 1.14 * std::pow(nd, 0.426) / z;
        else if (i == 2)
            z = 1.86 * z - 0.86 * x[0];
        else if (i == 3)
            z = 1.91 * z - 0.91 * x[1];
        else
            z = 2.0 * z - x[i - 2];
        double pp = 0.0;
        int it = 0;
        for (; it < 100; ++it) {
            double p1 = pim4, p2 = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                double p3 = p2;
                p2 = p1;
                const double jd = static_cast<double>(j);
                p1 = z * std::sqrt(2.0 / (jd + 1.0)) * p2 - std::sqrt(jd / (jd + 1.0)) * p3;
            }
            pp = std::sqrt(2.0 * nd) * p2;
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z))) break;
        }
        if (it == 100) throw std::runtime_error("Gauss-Hermite Newton iteration did not converge");
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    NormalRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    const double s2 = std::sqrt(2.0), spi = std::sqrt(M_PI);
    for (std::size_t i = 0; i < n; ++i) {
        r.nodes[i] = s2 * x[n - 1 - i];
        r.weights[i] = w[n - 1 - i] / spi;
    }
    return r;
}

}  // namespace

const NormalRule& normal_rule(std::size_t n) {
    if (n < 1) throw std::invalid_argument("rule needs at least one node");
    static std::mutex mu;
    static std::map<std::size_t, NormalRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
    return it->second;
}

}  // namespace sqbsde
