#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qbayes/personick.hpp"

namespace qbayes {

/// Unit Bloch vector (sin b cos a, sin b sin a, cos b); b = 0 is excluded
/// because the blend family loses its parameter dependence there.
struct BlochDirection {
    double alpha = 0.0; // [0, 2pi)
    double beta = 0.0;  // (0, pi]
};

void validate_direction(const BlochDirection& dir);

/// (sigma_0 + y.sigma)/2, the rank-1 projector along the direction.
HermitianOperator tau_projector(const BlochDirection& dir);

/// rho(eta) = eta |0><0| + (1 - eta) tau, eta in (0, 1), with analytic
/// derivative |0><0| - tau. Controls "alpha" and "beta" override the
/// construction direction, so the family doubles as a control sweep target.
StateFamily blend_family(const BlochDirection& dir);

/// Exact solution of the blend problem under the normalized Haldane prior:
///   kappa = 4 artanh(1 - 2a)
///   chi   = -log[a(1-a)]/4 + (Li2(a) - Li2(1-a)) / kappa
///   s_pm  = +-2 chi sin(beta/2)
///   prior_error = kappa^2 / 12
///   min_error   = prior_error - 4 chi^2 sin^2(beta/2)
///   gain_ratio  = 48 chi^2 sin^2(beta/2) / kappa^2
struct BlendClosedForms {
    double a = 0.0;
    double kappa = 0.0;
    double chi = 0.0;
    double s_plus = 0.0;
    double s_minus = 0.0;
    double min_error = 0.0;
    double prior_error = 0.0;
    double gain_ratio = 0.0;
};

BlendClosedForms closed_forms(double a, const BlochDirection& dir);

/// Normalized eigenvectors (|s+>, |s->) of the optimal operator; beta = pi
/// is handled by the analytic limit (computational basis up to phase).
std::pair<Vector, Vector> optimal_eigenstates(const BlochDirection& dir);

/// One cell of the local-measurement comparison sweep. `mhe` is absent when
/// the SLD solve failed for the cell; `note` then carries the reason.
struct Figure1Cell {
    double alpha = 0.0;
    double eta0 = 0.0;
    std::optional<double> mhe;
    std::string note;
};

struct Figure1Table {
    double prior_error = 0.0;
    double min_error = 0.0;
    std::vector<Figure1Cell> cells; // alpha-major, eta0-minor order
};

/// Mean hyperbolic error of SLD-eigenbasis measurements against the blend
/// family fixed at azimuth 0 and polar angle beta. For each (alpha, eta0)
/// the POM projects onto the eigenstates of the SLD of the alpha-rotated
/// family at eta0, and outcomes are processed with the fixed optimal
/// estimator values +-s of the global strategy (matched by eigenvalue
/// sign). Cells are evaluated on `threads` workers; output order is
/// deterministic.
Figure1Table figure1_sweep(double a, double beta, const std::vector<double>& alphas,
                           const std::vector<double>& eta0_grid, int quad_order = 200,
                           int threads = 1);

} // namespace qbayes
