#include "qbayes/personick.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace qbayes {

namespace {

Controls merged_controls(const Controls& defaults, const Controls& overrides) {
    Controls y = defaults;
    for (const auto& [k, v] : overrides) y[k] = v;
    return y;
}

} // namespace

MomentOperators build_moments(const StateFamily& family, const PriorDensity& prior,
                              const FMap& fmap, const Controls& y,
                              const QuadratureRule& rule) {
    const Controls controls = merged_controls(family.defaults, y);
    const double zeta = integrate(
        [&](double theta) {
            const double f = fmap.forward(theta);
            return f * f;
        },
        prior, rule);
    const double mean_f = integrate([&](double theta) { return fmap.forward(theta); },
                                    prior, rule);
    HermitianOperator rho0 = integrate(
        [&](double theta) -> Matrix { return family.state_of(theta, controls).matrix(); },
        prior, rule);
    HermitianOperator rho1 = integrate(
        [&](double theta) -> Matrix {
            return fmap.forward(theta) * family.state_of(theta, controls).matrix();
        },
        prior, rule);

    if (rho0.dim() != family.dim || rho1.dim() != family.dim) {
        throw ValidationError("build_moments: dimension mismatch");
    }
    DensityOperator check_rho0{rho0}; // trace-1 and PSD up to tolerance
    const double quad_tol = 1e-6 * std::max(1.0, std::abs(mean_f));
    if (std::abs(rho1.trace() - mean_f) > quad_tol) {
        std::ostringstream msg;
        msg << "build_moments: trace(rho1) = " << rho1.trace()
            << " disagrees with prior mean of f = " << mean_f;
        throw ValidationError(msg.str());
    }
    if (zeta < mean_f * mean_f - 1e-10) {
        throw ValidationError("build_moments: E[f^2] < E[f]^2 (quadrature inconsistency)");
    }
    return MomentOperators{zeta, std::move(rho0), std::move(rho1), mean_f};
}

void validate_pom(const Pom& pom, const Tolerances& tols) {
    if (pom.elements.empty()) throw ValidationError("Pom: no elements");
    const int n = pom.elements.front().dim();
    Matrix sum = Matrix::Zero(n, n);
    for (std::size_t x = 0; x < pom.elements.size(); ++x) {
        const HermitianOperator& m = pom.elements[x];
        if (m.dim() != n) throw ValidationError("Pom: mixed dimensions");
        Eigen::SelfAdjointEigenSolver<Matrix> solver(m.matrix(), Eigen::EigenvaluesOnly);
        if (solver.eigenvalues().minCoeff() < -tols.psd) {
            std::ostringstream msg;
            msg << "Pom: element " << x << " has negative eigenvalue "
                << solver.eigenvalues().minCoeff();
            throw ValidationError(msg.str());
        }
        sum += m.matrix();
    }
    if ((sum - Matrix::Identity(n, n)).norm() > tols.projector) {
        throw ValidationError("Pom: elements do not sum to identity");
    }
}

Pom pom_from_projectors(const ProjectorSet& ps) {
    Pom pom;
    pom.elements = ps.projectors;
    for (double label : ps.labels) {
        std::ostringstream name;
        name.precision(17);
        name << "s=" << label;
        pom.labels.push_back(name.str());
    }
    return pom;
}

PersonickSolution solve_optimal(const MomentOperators& moments, const FMap& fmap,
                                double merge_tol) {
    SylvesterResult sylvester = solve_sylvester(moments.rho0, moments.rho1);
    PersonickSolution sol;
    sol.S = sylvester.solution;
    sol.kernel_projected = sylvester.kernel_projected;
    sol.pom = project_eigenspaces(eigendecompose(sol.S), merge_tol);

    for (double s : sol.pom.labels) {
        double estimate = std::numeric_limits<double>::quiet_NaN();
        try {
            estimate = fmap.inverse(s);
        } catch (const std::exception& e) {
            std::ostringstream msg;
            msg << "solve_optimal: optimal label " << s
                << " is outside the estimator's range: " << e.what();
            throw ValidationError(msg.str());
        }
        if (!std::isfinite(estimate)) {
            std::ostringstream msg;
            msg << "solve_optimal: estimator value for label " << s << " is not finite";
            throw ValidationError(msg.str());
        }
        sol.estimates.push_back(estimate);
    }

    const double tr_s = trace_product(moments.rho0, sol.S);
    const double tr_s2 =
        (moments.rho0.matrix() * sol.S.matrix() * sol.S.matrix()).trace().real();
    sol.gain = tr_s2 - tr_s * tr_s;
    sol.prior_error = moments.zeta - moments.prior_mean_f * moments.prior_mean_f;
    sol.min_error = sol.prior_error - sol.gain;
    if (sol.gain < -1e-10) {
        throw NumericError("solve_optimal: negative precision gain");
    }
    return sol;
}

double evaluate_pom_error(const MomentOperators& moments, const Pom& pom,
                          const std::optional<std::vector<double>>& estimator,
                          const Tolerances& tols) {
    validate_pom(pom, tols);
    if (estimator && estimator->size() != pom.elements.size()) {
        throw ValidationError("evaluate_pom_error: one estimator value per POM element");
    }
    double error = moments.zeta;
    for (std::size_t x = 0; x < pom.elements.size(); ++x) {
        const double w = trace_product(pom.elements[x], moments.rho0);
        const double t1 = trace_product(pom.elements[x], moments.rho1);
        if (w <= tols.zero_probability) {
            if (std::abs(t1) > tols.zero_probability_rhs) {
                std::ostringstream msg;
                msg << "evaluate_pom_error: outcome " << x
                    << " has zero probability but nonzero moment";
                throw NumericError(msg.str());
            }
            continue;
        }
        if (estimator) {
            const double fx = (*estimator)[x];
            error += w * fx * fx - 2.0 * t1 * fx;
        } else {
            error -= t1 * t1 / w;
        }
    }
    return error;
}

HermitianOperator sld(const StateFamily& family, double theta0, const Controls& y,
                      std::optional<double> step) {
    const Controls controls = merged_controls(family.defaults, y);
    if (!(theta0 > family.theta_domain.lo && theta0 < family.theta_domain.hi)) {
        throw ValidationError("sld: theta0 must be interior to the family's domain");
    }
    HermitianOperator derivative = [&]() {
        if (family.derivative_of) return family.derivative_of(theta0, controls);
        const double h = step.value_or(
            std::cbrt(std::numeric_limits<double>::epsilon()) * std::max(std::abs(theta0), 1.0));
        const Matrix diff = (family.state_of(theta0 + h, controls).matrix() -
                             family.state_of(theta0 - h, controls).matrix()) /
                            (2.0 * h);
        return HermitianOperator::symmetrized(diff);
    }();
    return solve_sylvester(family.state_of(theta0, controls).op(), derivative).solution;
}

} // namespace qbayes
