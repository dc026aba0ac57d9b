#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "qbayes/fmap.hpp"
#include "qbayes/operators.hpp"
#include "qbayes/quadrature.hpp"

namespace qbayes {

/// Normalized density on a finite interval. When `uniform_in` is set, the
/// density is exactly uniform in u = f(theta) coordinates (the Haldane case)
/// and all integrals are evaluated after that substitution, which removes
/// the endpoint singularities.
struct PriorDensity {
    Interval support{};
    std::function<double(double)> density;
    double normalization = 1.0;
    std::optional<FMap> uniform_in;
};

/// p(theta) = 1 / [kappa theta (1 - theta)] on (a, 1-a),
/// kappa = 4 artanh(1 - 2a). Requires 0 < a < 1/2. The density callable is
/// the closed form, evaluable anywhere on (0, 1).
PriorDensity haldane_prior(double a);

/// Flat density on [lo, hi].
PriorDensity uniform_prior(Interval support);

/// Piecewise-linear density through the given samples, normalized
/// internally. Thetas must be strictly increasing, densities nonnegative.
PriorDensity table_prior(const std::vector<double>& thetas,
                         const std::vector<double>& densities);

/// Max residual of (1 - theta + gamma*theta)^2 p(theta)
///   - gamma * p(mobius(theta, gamma))
/// over `samples` points; zero (to rounding) exactly for Haldane densities.
/// Sampling is restricted to theta whose image stays inside (0, 1).
double check_prior_invariance(const PriorDensity& p, double gamma, int samples);

/// Quadrature node prepared for prior-weighted integration: Sum of
/// weight * g(theta) approximates the integral of p(theta) g(theta).
struct PriorNode {
    double theta = 0.0;
    double weight = 0.0;
};

std::vector<PriorNode> prior_nodes(const PriorDensity& p, const QuadratureRule& rule);

/// Integral of p(theta) g(theta) d(theta). Throws NumericError naming the
/// node if g is non-finite anywhere sampled.
double integrate(const std::function<double(double)>& g, const PriorDensity& p,
                 const QuadratureRule& rule);

/// Entrywise operator-valued version.
HermitianOperator integrate(const std::function<Matrix(double)>& g,
                            const PriorDensity& p, const QuadratureRule& rule);

/// |f(t1) - f(t2)|^k; a bona fide error for the fmap's parameter type.
struct DistanceFunction {
    FMap fmap;
    double exponent = 2.0;
};

double evaluate_distance(const DistanceFunction& d, double t1, double t2);

} // namespace qbayes
