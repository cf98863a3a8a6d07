// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <vector>

namespace sqbsde {

/// Gauss-Hermite rule for the standard normal: E[f(N)] ~ sum w_i f(x_i).
/// Nodes are already scaled by sqrt(2) and weights by 1/sqrt(pi).
struct NormalRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point rule; cached per n.
const NormalRule& normal_rule(std::size_t n = 64);

}  // namespace sqbsde
