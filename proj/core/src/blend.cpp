#include "qbayes/blend.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qbayes/parallel.hpp"
#include "qbayes/special.hpp"

namespace qbayes {

namespace {

constexpr double pi = std::numbers::pi;

Matrix pauli_x() { return (Matrix(2, 2) << 0, 1, 1, 0).finished(); }
Matrix pauli_y() {
    return (Matrix(2, 2) << 0, Complex(0, -1), Complex(0, 1), 0).finished();
}
Matrix pauli_z() { return (Matrix(2, 2) << 1, 0, 0, -1).finished(); }
Matrix ket0_bra0() { return (Matrix(2, 2) << 1, 0, 0, 0).finished(); }

Matrix tau_matrix(double alpha, double beta) {
    const double yx = std::sin(beta) * std::cos(alpha);
    const double yy = std::sin(beta) * std::sin(alpha);
    const double yz = std::cos(beta);
    return (Matrix::Identity(2, 2) + yx * pauli_x() + yy * pauli_y() + yz * pauli_z()) / 2.0;
}

double control_or(const Controls& y, const char* key, double fallback) {
    const auto it = y.find(key);
    return it == y.end() ? fallback : it->second;
}

} // namespace

void validate_direction(const BlochDirection& dir) {
    if (!(dir.alpha >= 0.0 && dir.alpha < 2.0 * pi)) {
        throw ValidationError("BlochDirection: alpha must lie in [0, 2pi)");
    }
    if (!(dir.beta > 0.0 && dir.beta <= pi)) {
        throw ValidationError(
            "BlochDirection: beta must lie in (0, pi]; beta = 0 removes the "
            "family's parameter dependence");
    }
}

HermitianOperator tau_projector(const BlochDirection& dir) {
    validate_direction(dir);
    return HermitianOperator::symmetrized(tau_matrix(dir.alpha, dir.beta));
}

StateFamily blend_family(const BlochDirection& dir) {
    validate_direction(dir);
    StateFamily family;
    family.dim = 2;
    family.defaults = {{"alpha", dir.alpha}, {"beta", dir.beta}};
    family.theta_domain = {0.0, 1.0};
    family.state_of = [dir](double eta, const Controls& y) {
        if (!(eta > 0.0 && eta < 1.0)) {
            std::ostringstream msg;
            msg << "blend_family: eta = " << eta << " outside (0, 1)";
            throw ValidationError(msg.str());
        }
        const double alpha = control_or(y, "alpha", dir.alpha);
        const double beta = control_or(y, "beta", dir.beta);
        validate_direction({alpha, beta});
        const Matrix rho = eta * ket0_bra0() + (1.0 - eta) * tau_matrix(alpha, beta);
        return DensityOperator{HermitianOperator::symmetrized(rho)};
    };
    family.derivative_of = [dir](double, const Controls& y) {
        const double alpha = control_or(y, "alpha", dir.alpha);
        const double beta = control_or(y, "beta", dir.beta);
        return HermitianOperator::symmetrized(ket0_bra0() - tau_matrix(alpha, beta));
    };
    return family;
}

BlendClosedForms closed_forms(double a, const BlochDirection& dir) {
    validate_direction(dir);
    if (!(a > 0.0 && a < 0.5)) {
        throw ValidationError("closed_forms: a must lie in (0, 1/2)");
    }
    BlendClosedForms cf;
    cf.a = a;
    cf.kappa = 4.0 * std::atanh(1.0 - 2.0 * a);
    cf.chi = -std::log(a * (1.0 - a)) / 4.0 + (dilog(a) - dilog(1.0 - a)) / cf.kappa;
    const double sin_half = std::sin(dir.beta / 2.0);
    cf.s_plus = 2.0 * cf.chi * sin_half;
    cf.s_minus = -cf.s_plus;
    cf.prior_error = cf.kappa * cf.kappa / 12.0;
    cf.min_error = cf.prior_error - 4.0 * cf.chi * cf.chi * sin_half * sin_half;
    cf.gain_ratio = 48.0 * cf.chi * cf.chi * sin_half * sin_half / (cf.kappa * cf.kappa);
    return cf;
}

std::pair<Vector, Vector> optimal_eigenstates(const BlochDirection& dir) {
    validate_direction(dir);
    const Complex phase = std::exp(Complex(0.0, dir.alpha));
    Vector plus(2), minus(2);
    if (pi - dir.beta < 1e-9) {
        // Removable singularity: the plus branch normalization degenerates.
        plus << 1.0, 0.0;
        minus << 0.0, phase;
        return {plus, minus};
    }
    const double c = std::cos(dir.beta / 2.0);
    const double s = std::sin(dir.beta / 2.0);
    plus << c, (s - 1.0) * phase;
    minus << c, (s + 1.0) * phase;
    plus /= std::sqrt(2.0 * (1.0 - s));
    minus /= std::sqrt(2.0 * (1.0 + s));
    return {plus, minus};
}

Figure1Table figure1_sweep(double a, double beta, const std::vector<double>& alphas,
                           const std::vector<double>& eta0_grid, int quad_order,
                           int threads) {
    const PriorDensity prior = haldane_prior(a);
    for (double eta0 : eta0_grid) {
        if (!(eta0 >= prior.support.lo && eta0 <= prior.support.hi)) {
            std::ostringstream msg;
            msg << "figure1_sweep: eta0 = " << eta0 << " outside [a, 1-a]";
            throw ValidationError(msg.str());
        }
    }
    const FMap fmap = weight_fmap();
    const QuadratureRule& rule = gauss_legendre(quad_order);

    // Reference problem: the family at azimuth 0. The comparison rotates
    // only the measured SLD direction.
    const StateFamily reference = blend_family({0.0, beta});
    const MomentOperators moments = build_moments(reference, prior, fmap, {}, rule);
    const PersonickSolution optimal = solve_optimal(moments, fmap, 1e-8);
    const double s_opt = *std::max_element(optimal.pom.labels.begin(), optimal.pom.labels.end());

    Figure1Table table;
    table.prior_error = optimal.prior_error;
    table.min_error = optimal.min_error;
    table.cells.resize(alphas.size() * eta0_grid.size());

    parallel_for(table.cells.size(), threads, [&](std::size_t cell) {
        const double alpha = alphas[cell / eta0_grid.size()];
        const double eta0 = eta0_grid[cell % eta0_grid.size()];
        Figure1Cell& out = table.cells[cell];
        out.alpha = alpha;
        out.eta0 = eta0;
        try {
            const StateFamily rotated = blend_family({alpha, beta});
            const HermitianOperator local = sld(rotated, eta0, {});
            const ProjectorSet projectors = project_eigenspaces(eigendecompose(local), 1e-8);
            std::vector<double> estimator;
            estimator.reserve(projectors.labels.size());
            for (double lambda : projectors.labels) {
                estimator.push_back(lambda >= 0.0 ? s_opt : -s_opt);
            }
            out.mhe = evaluate_pom_error(moments, pom_from_projectors(projectors), estimator);
        } catch (const std::exception& e) {
            out.mhe = std::nullopt;
            out.note = e.what();
        }
    });
    return table;
}

} // namespace qbayes
