#include "qbayes/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "qbayes/errors.hpp"

namespace qbayes {

namespace {

// Nodes are roots of P_n, found by Newton iteration from the Chebyshev-like
// initial guess; weights w = 2 / [(1 - x^2) P_n'(x)^2].
QuadratureRule compute_gauss_legendre(int n) {
    QuadratureRule rule;
    rule.order = n;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[static_cast<std::size_t>(i)] = -x;
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    return rule;
}

} // namespace

const QuadratureRule& gauss_legendre(int order) {
    if (order < 1) throw ValidationError("gauss_legendre: order must be >= 1");
    static std::map<int, QuadratureRule> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(order);
    if (it == cache.end()) {
        it = cache.emplace(order, compute_gauss_legendre(order)).first;
    }
    return it->second;
}

MappedRule map_rule(const QuadratureRule& rule, double lo, double hi) {
    MappedRule mapped;
    const double mid = (lo + hi) / 2.0;
    const double halfwidth = (hi - lo) / 2.0;
    mapped.nodes.reserve(rule.nodes.size());
    mapped.weights.reserve(rule.weights.size());
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        mapped.nodes.push_back(mid + halfwidth * rule.nodes[i]);
        mapped.weights.push_back(halfwidth * rule.weights[i]);
    }
    return mapped;
}

} // namespace qbayes
