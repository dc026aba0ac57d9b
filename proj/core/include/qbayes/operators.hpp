#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "qbayes/errors.hpp"
#include "qbayes/tolerances.hpp"

namespace qbayes {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Dense complex square matrix with a Hermiticity guarantee. Construction
/// validates the entries; any later arithmetic goes through symmetrized()
/// so the invariant cannot silently rot.
class HermitianOperator {
public:
    /// 1x1 zero; placeholder for aggregates filled in later.
    HermitianOperator() : m_(Matrix::Zero(1, 1)) {}

    /// Validates hermiticity entrywise within `tol` and dim >= 1.
    explicit HermitianOperator(Matrix m, double tol = default_tolerances().hermiticity);

    /// Builds from (M + M^dagger)/2 without rejecting small asymmetry.
    static HermitianOperator symmetrized(const Matrix& m);

    int dim() const { return static_cast<int>(m_.rows()); }
    const Matrix& matrix() const { return m_; }

    double trace() const { return m_.trace().real(); }
    /// Largest |eigenvalue|; exact for Hermitian matrices.
    double spectral_norm() const;

    HermitianOperator operator+(const HermitianOperator& o) const {
        return symmetrized(m_ + o.m_);
    }
    HermitianOperator operator-(const HermitianOperator& o) const {
        return symmetrized(m_ - o.m_);
    }
    HermitianOperator scaled(double c) const { return symmetrized(c * m_); }

private:
    struct Unchecked {};
    HermitianOperator(Matrix m, Unchecked) : m_(std::move(m)) {}
    Matrix m_;
};

/// Real part of trace(A * B); the imaginary part vanishes for Hermitian A, B.
double trace_product(const HermitianOperator& a, const HermitianOperator& b);

/// Unit-trace positive-semidefinite Hermitian operator (a quantum state).
class DensityOperator {
public:
    explicit DensityOperator(HermitianOperator op,
                             const Tolerances& tols = default_tolerances());
    const HermitianOperator& op() const { return op_; }
    int dim() const { return op_.dim(); }
    const Matrix& matrix() const { return op_.matrix(); }

private:
    HermitianOperator op_;
};

/// Spectral decomposition with deterministic ordering: eigenvalues ascending,
/// each eigenvector phase-fixed (first nonzero entry real positive), exact
/// ties broken lexicographically on the fixed entries.
struct EigenSystem {
    Eigen::VectorXd values; // ascending
    Matrix vectors;         // orthonormal columns, one per value
};

EigenSystem eigendecompose(const HermitianOperator& op);

/// Sum_k values[k] * v_k v_k^dagger.
Matrix reconstruct(const EigenSystem& es);

/// Hermitian X solving X A + A X = 2 B, computed in the eigenbasis of A.
/// Entries on the kernel of A are set to zero (minimal-norm pseudo-solution)
/// when the corresponding right-hand side is negligible; `kernel_projected`
/// reports that this happened. An inconsistent kernel entry throws.
struct SylvesterResult {
    HermitianOperator solution;
    bool kernel_projected = false;
};

SylvesterResult solve_sylvester(const HermitianOperator& a, const HermitianOperator& b,
                                const Tolerances& tols = default_tolerances());

/// Orthogonal projectors onto (possibly merged) eigenspaces, summing to
/// identity, each labelled by its cluster-mean eigenvalue.
struct ProjectorSet {
    std::vector<HermitianOperator> projectors;
    std::vector<double> labels; // ascending
};

/// Clusters eigenvalues transitively in an ascending scan: adjacent values
/// closer than merge_tol share one projector labelled by the cluster mean.
ProjectorSet project_eigenspaces(const EigenSystem& es, double merge_tol);

} // namespace qbayes
