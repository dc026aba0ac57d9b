#pragma once

#include <vector>

namespace qbayes {

/// Gauss-Legendre rule on [-1, 1]: exact for polynomials up to degree
/// 2*order - 1. Weights sum to 2.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    int order = 0;
};

/// Returns the cached rule of the given order (thread-safe).
const QuadratureRule& gauss_legendre(int order);

/// Nodes and weights mapped affinely to [lo, hi].
struct MappedRule {
    std::vector<double> nodes;
    std::vector<double> weights; // sum to hi - lo
};

MappedRule map_rule(const QuadratureRule& rule, double lo, double hi);

} // namespace qbayes
