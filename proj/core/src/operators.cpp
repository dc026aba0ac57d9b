#include "qbayes/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qbayes {

HermitianOperator::HermitianOperator(Matrix m, double tol) : m_(std::move(m)) {
    if (m_.rows() < 1 || m_.rows() != m_.cols()) {
        throw ValidationError("HermitianOperator: matrix must be square with dim >= 1");
    }
    for (Eigen::Index i = 0; i < m_.rows(); ++i) {
        for (Eigen::Index j = i; j < m_.cols(); ++j) {
            const Complex diff = m_(i, j) - std::conj(m_(j, i));
            if (std::abs(diff) > tol) {
                std::ostringstream msg;
                msg << "HermitianOperator: entries (" << i << "," << j << ") and (" << j
                    << "," << i << ") are not conjugate; asymmetry " << std::abs(diff);
                throw ValidationError(msg.str());
            }
        }
    }
    // Remove the sub-tolerance asymmetry so downstream algebra sees an
    // exactly Hermitian matrix.
    m_ = ((m_ + m_.adjoint()) / 2.0).eval();
}

HermitianOperator HermitianOperator::symmetrized(const Matrix& m) {
    if (m.rows() < 1 || m.rows() != m.cols()) {
        throw ValidationError("HermitianOperator: matrix must be square with dim >= 1");
    }
    return HermitianOperator(((m + m.adjoint()) / 2.0).eval(), Unchecked{});
}

double HermitianOperator::spectral_norm() const {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m_, Eigen::EigenvaluesOnly);
    const auto& v = solver.eigenvalues();
    return std::max(std::abs(v.minCoeff()), std::abs(v.maxCoeff()));
}

double trace_product(const HermitianOperator& a, const HermitianOperator& b) {
    return (a.matrix() * b.matrix()).trace().real();
}

DensityOperator::DensityOperator(HermitianOperator op, const Tolerances& tols)
    : op_(std::move(op)) {
    if (std::abs(op_.trace() - 1.0) > tols.unit_trace) {
        std::ostringstream msg;
        msg << "DensityOperator: trace " << op_.trace() << " != 1";
        throw ValidationError(msg.str());
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(op_.matrix(), Eigen::EigenvaluesOnly);
    const double min_eig = solver.eigenvalues().minCoeff();
    if (min_eig < -tols.psd) {
        std::ostringstream msg;
        msg << "DensityOperator: negative eigenvalue " << min_eig;
        throw ValidationError(msg.str());
    }
}

namespace {

// First nonzero entry made real positive; deterministic across runs.
void fix_phase(Eigen::Ref<Vector> column) {
    for (Eigen::Index i = 0; i < column.size(); ++i) {
        const double mag = std::abs(column(i));
        if (mag > 1e-12) {
            column *= std::conj(column(i)) / mag;
            column(i) = Complex(column(i).real(), 0.0); // scrub roundoff
            return;
        }
    }
}

bool lex_less(const Vector& a, const Vector& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a(i).real() != b(i).real()) return a(i).real() < b(i).real();
        if (a(i).imag() != b(i).imag()) return a(i).imag() < b(i).imag();
    }
    return false;
}

} // namespace

EigenSystem eigendecompose(const HermitianOperator& op) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(op.matrix());
    if (solver.info() != Eigen::Success) {
        throw NumericError("eigendecompose: solver failed to converge");
    }
    const int n = op.dim();
    Matrix vectors = solver.eigenvectors();
    Eigen::VectorXd values = solver.eigenvalues();
    for (int k = 0; k < n; ++k) fix_phase(vectors.col(k));

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (values(a) != values(b)) return values(a) < values(b);
        return lex_less(vectors.col(a), vectors.col(b));
    });

    EigenSystem es;
    es.values.resize(n);
    es.vectors.resize(n, n);
    for (int k = 0; k < n; ++k) {
        es.values(k) = values(order[static_cast<std::size_t>(k)]);
        es.vectors.col(k) = vectors.col(order[static_cast<std::size_t>(k)]);
    }
    return es;
}

Matrix reconstruct(const EigenSystem& es) {
    return es.vectors * es.values.asDiagonal() * es.vectors.adjoint();
}

SylvesterResult solve_sylvester(const HermitianOperator& a, const HermitianOperator& b,
                                const Tolerances& tols) {
    if (a.dim() != b.dim()) {
        throw ValidationError("solve_sylvester: dimension mismatch");
    }
    const EigenSystem ea = eigendecompose(a);
    if (ea.values.minCoeff() < -tols.psd * std::max(1.0, a.spectral_norm())) {
        throw ValidationError("solve_sylvester: A is not positive semidefinite");
    }
    const double norm_a = std::max(std::abs(ea.values.minCoeff()), std::abs(ea.values.maxCoeff()));
    const double norm_b = b.spectral_norm();

    const Matrix b_tilde = ea.vectors.adjoint() * b.matrix() * ea.vectors;
    const int n = a.dim();
    Matrix x_tilde(n, n);
    bool kernel_projected = false;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double denom = ea.values(i) + ea.values(j);
            if (denom <= tols.kernel_eigenvalue * norm_a) {
                if (std::abs(b_tilde(i, j)) > tols.kernel_rhs * norm_b) {
                    std::ostringstream msg;
                    msg << "solve_sylvester: inconsistent null-space (entry " << i << ","
                        << j << "): no solution on the kernel of A";
                    throw NumericError(msg.str());
                }
                x_tilde(i, j) = 0.0; // minimal-norm pseudo-solution
                kernel_projected = true;
            } else {
                x_tilde(i, j) = 2.0 * b_tilde(i, j) / denom;
            }
        }
    }
    const Matrix x = ea.vectors * x_tilde * ea.vectors.adjoint();
    return SylvesterResult{HermitianOperator::symmetrized(x), kernel_projected};
}

ProjectorSet project_eigenspaces(const EigenSystem& es, double merge_tol) {
    if (merge_tol < 0.0) {
        throw ValidationError("project_eigenspaces: merge_tol must be >= 0");
    }
    const int n = static_cast<int>(es.values.size());
    ProjectorSet out;
    int start = 0;
    while (start < n) {
        int end = start + 1;
        while (end < n && es.values(end) - es.values(end - 1) <= merge_tol) ++end;
        Matrix proj = Matrix::Zero(n, n);
        double label = 0.0;
        for (int k = start; k < end; ++k) {
            proj += es.vectors.col(k) * es.vectors.col(k).adjoint();
            label += es.values(k);
        }
        out.projectors.push_back(HermitianOperator::symmetrized(proj));
        out.labels.push_back(label / static_cast<double>(end - start));
        start = end;
    }
    return out;
}

} // namespace qbayes
