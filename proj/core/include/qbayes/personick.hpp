#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qbayes/fmap.hpp"
#include "qbayes/operators.hpp"
#include "qbayes/prior.hpp"

namespace qbayes {

/// Named control parameters (measurement settings, Bloch angles, ...).
using Controls = std::map<std::string, double>;

/// Parametrized family of states rho_y(theta). `derivative_of` is optional;
/// when absent, consumers fall back to central finite differences.
struct StateFamily {
    int dim = 0;
    std::function<DensityOperator(double theta, const Controls& y)> state_of;
    std::function<HermitianOperator(double theta, const Controls& y)> derivative_of; // may be null
    Controls defaults;
    Interval theta_domain{};
};

/// Prior moments of the family under an fmap:
///   zeta  = E[f^2],  rho0 = E[rho],  rho1 = E[rho f], prior_mean_f = E[f].
struct MomentOperators {
    double zeta = 0.0;
    HermitianOperator rho0;
    HermitianOperator rho1;
    double prior_mean_f = 0.0;
};

MomentOperators build_moments(const StateFamily& family, const PriorDensity& prior,
                              const FMap& fmap, const Controls& y,
                              const QuadratureRule& rule);

/// General (not necessarily projective) measurement.
struct Pom {
    std::vector<HermitianOperator> elements;
    std::vector<std::string> labels;
};

/// Validates positivity and completeness; throws ValidationError.
void validate_pom(const Pom& pom, const Tolerances& tols = default_tolerances());

Pom pom_from_projectors(const ProjectorSet& ps);

/// Complete optimal strategy: the operator solving S rho0 + rho0 S = 2 rho1,
/// its eigenprojectors as the optimal POM, the estimates f^{-1}(s), and the
/// exact error budget min_error = prior_error - gain.
struct PersonickSolution {
    HermitianOperator S;
    ProjectorSet pom;
    std::vector<double> estimates;
    double min_error = 0.0;
    double gain = 0.0;
    double prior_error = 0.0;
    bool kernel_projected = false;
};

PersonickSolution solve_optimal(const MomentOperators& moments, const FMap& fmap,
                                double merge_tol);

/// Mean quadratic error of a fixed POM. With no estimator, uses the
/// Bayes-optimal estimate per outcome, f[theta(x)] = g_x =
/// tr(M_x rho1)/tr(M_x rho0), giving zeta - Sum w_x g_x^2. With estimator
/// values supplied (one f-value per element), evaluates
/// zeta + Sum_x (w_x f_x^2 - 2 w_x g_x f_x).
double evaluate_pom_error(const MomentOperators& moments, const Pom& pom,
                          const std::optional<std::vector<double>>& estimator = std::nullopt,
                          const Tolerances& tols = default_tolerances());

/// Symmetric logarithmic derivative at theta0: Hermitian L solving
/// L rho + rho L = 2 d(rho)/d(theta). Uses the family's analytic derivative
/// when present, otherwise a central difference with step h
/// (default cbrt(machine eps) * max(|theta0|, 1)).
HermitianOperator sld(const StateFamily& family, double theta0, const Controls& y,
                      std::optional<double> step = std::nullopt);

} // namespace qbayes
