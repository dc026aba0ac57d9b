#include "qbayes/prior.hpp"

#include <cmath>
#include <sstream>

namespace qbayes {

PriorDensity haldane_prior(double a) {
    if (!(a > 0.0 && a < 0.5)) {
        throw ValidationError("haldane_prior: a must lie in (0, 1/2)");
    }
    const double kappa = 4.0 * std::atanh(1.0 - 2.0 * a);
    PriorDensity p;
    p.support = {a, 1.0 - a};
    p.density = [kappa](double theta) { return 1.0 / (kappa * theta * (1.0 - theta)); };
    p.normalization = 1.0;
    p.uniform_in = weight_fmap();
    return p;
}

PriorDensity uniform_prior(Interval support) {
    if (!(support.lo < support.hi)) {
        throw ValidationError("uniform_prior: empty support");
    }
    const double width = support.hi - support.lo;
    PriorDensity p;
    p.support = support;
    p.density = [width](double) { return 1.0 / width; };
    p.normalization = 1.0;
    return p;
}

PriorDensity table_prior(const std::vector<double>& thetas,
                         const std::vector<double>& densities) {
    if (thetas.size() != densities.size() || thetas.size() < 2) {
        throw ValidationError("table_prior: need >= 2 matching samples");
    }
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        if (i > 0 && !(thetas[i] > thetas[i - 1])) {
            throw ValidationError("table_prior: thetas must be strictly increasing");
        }
        if (densities[i] < 0.0) {
            throw ValidationError("table_prior: densities must be nonnegative");
        }
    }
    // Trapezoid normalization, then linear interpolation of the samples.
    double mass = 0.0;
    for (std::size_t i = 1; i < thetas.size(); ++i) {
        mass += 0.5 * (densities[i] + densities[i - 1]) * (thetas[i] - thetas[i - 1]);
    }
    if (!(mass > 0.0)) throw ValidationError("table_prior: zero total mass");
    auto t = thetas;
    auto d = densities;
    for (auto& v : d) v /= mass;
    PriorDensity p;
    p.support = {thetas.front(), thetas.back()};
    p.density = [t = std::move(t), d = std::move(d)](double theta) {
        if (theta <= t.front()) return d.front();
        if (theta >= t.back()) return d.back();
        std::size_t hi = 1;
        while (t[hi] < theta) ++hi;
        const double w = (theta - t[hi - 1]) / (t[hi] - t[hi - 1]);
        return (1.0 - w) * d[hi - 1] + w * d[hi];
    };
    p.normalization = 1.0;
    return p;
}

double check_prior_invariance(const PriorDensity& p, double gamma, int samples) {
    if (!(gamma > 0.0)) throw ValidationError("check_prior_invariance: gamma must be positive");
    if (samples < 1) throw ValidationError("check_prior_invariance: samples must be >= 1");
    const double lo = std::max(p.support.lo, 1e-9);
    const double hi = std::min(p.support.hi, 1.0 - 1e-9);
    double max_residual = 0.0;
    for (int i = 1; i <= samples; ++i) {
        const double theta = lo + (hi - lo) * i / (samples + 1);
        const double image = mobius(theta, gamma);
        if (!(image > 0.0 && image < 1.0)) continue;
        const double jac = 1.0 - theta + gamma * theta;
        const double residual = jac * jac * p.density(theta) - gamma * p.density(image);
        max_residual = std::max(max_residual, std::abs(residual));
    }
    return max_residual;
}

std::vector<PriorNode> prior_nodes(const PriorDensity& p, const QuadratureRule& rule) {
    std::vector<PriorNode> nodes;
    nodes.reserve(rule.nodes.size());
    if (p.uniform_in) {
        // Substitute u = f(theta): the density is uniform there and the
        // endpoint singularities vanish.
        const FMap& f = *p.uniform_in;
        const double u_lo = f.forward(p.support.lo);
        const double u_hi = f.forward(p.support.hi);
        const MappedRule mapped = map_rule(rule, u_lo, u_hi);
        for (std::size_t i = 0; i < mapped.nodes.size(); ++i) {
            nodes.push_back(PriorNode{f.inverse(mapped.nodes[i]),
                                      mapped.weights[i] / (u_hi - u_lo)});
        }
    } else {
        const MappedRule mapped = map_rule(rule, p.support.lo, p.support.hi);
        for (std::size_t i = 0; i < mapped.nodes.size(); ++i) {
            nodes.push_back(PriorNode{mapped.nodes[i],
                                      mapped.weights[i] * p.density(mapped.nodes[i])});
        }
    }
    return nodes;
}

double integrate(const std::function<double(double)>& g, const PriorDensity& p,
                 const QuadratureRule& rule) {
    double sum = 0.0;
    for (const PriorNode& node : prior_nodes(p, rule)) {
        const double v = g(node.theta);
        if (!std::isfinite(v)) {
            std::ostringstream msg;
            msg << "integrate: non-finite integrand at theta = " << node.theta;
            throw NumericError(msg.str());
        }
        sum += node.weight * v;
    }
    return sum;
}

HermitianOperator integrate(const std::function<Matrix(double)>& g, const PriorDensity& p,
                            const QuadratureRule& rule) {
    const std::vector<PriorNode> nodes = prior_nodes(p, rule);
    Matrix sum;
    bool first = true;
    for (const PriorNode& node : nodes) {
        const Matrix v = g(node.theta);
        if (!v.allFinite()) {
            std::ostringstream msg;
            msg << "integrate: non-finite operator integrand at theta = " << node.theta;
            throw NumericError(msg.str());
        }
        if (first) {
            sum = node.weight * v;
            first = false;
        } else {
            sum += node.weight * v;
        }
    }
    if (first) throw NumericError("integrate: empty quadrature rule");
    return HermitianOperator::symmetrized(sum);
}

double evaluate_distance(const DistanceFunction& d, double t1, double t2) {
    if (!(d.exponent > 0.0)) {
        throw ValidationError("evaluate_distance: exponent must be positive");
    }
    return std::pow(std::abs(d.fmap.forward(t1) - d.fmap.forward(t2)), d.exponent);
}

} // namespace qbayes
