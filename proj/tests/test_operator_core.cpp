#include <cmath>
#include <numbers>

#include "doctest.h"
#include "test_helpers.hpp"

#include "qbayes/operators.hpp"

using namespace qbayes;
using namespace qbayes::testing;
using std::numbers::pi;

namespace {

Matrix pauli_dot(double alpha, double beta) {
    Matrix m(2, 2);
    const Complex phase = std::polar(1.0, alpha);
    m(0, 0) = std::cos(beta);
    m(1, 1) = -std::cos(beta);
    m(0, 1) = std::sin(beta) * std::conj(phase);
    m(1, 0) = std::sin(beta) * phase;
    return m;
}

// Closed-form eigenvalues of a 2x2 Hermitian [[a, c], [conj(c), b]].
std::pair<double, double> eig2x2(const Matrix& m) {
    const double a = m(0, 0).real();
    const double b = m(1, 1).real();
    const double r = std::hypot(0.5 * (a - b), std::abs(m(0, 1)));
    return {0.5 * (a + b) - r, 0.5 * (a + b) + r};
}

} // namespace

TEST_CASE("hermitian validation names the offending entry pair") {
    Matrix m(2, 2);
    m << 1.0, Complex(0.0, 1.0), Complex(0.0, 1.0), 2.0;
    CHECK_THROWS_AS(HermitianOperator{m}, ValidationError);
    try {
        HermitianOperator h{m};
        (void)h;
    } catch (const ValidationError& e) {
        const std::string what = e.what();
        CHECK(what.find("0") != std::string::npos);
        CHECK(what.find("1") != std::string::npos);
    }
    CHECK_NOTHROW(HermitianOperator{HermitianOperator::symmetrized(m).matrix()});
}

TEST_CASE("density operator rejects bad trace and negative spectra") {
    Matrix ok(2, 2);
    ok << 0.7, 0.0, 0.0, 0.3;
    CHECK_NOTHROW(DensityOperator{HermitianOperator{ok}});

    Matrix bad_trace = 2.0 * ok;
    CHECK_THROWS_AS(DensityOperator{HermitianOperator{bad_trace}}, ValidationError);

    Matrix negative(2, 2);
    negative << 1.2, 0.0, 0.0, -0.2;
    CHECK_THROWS_AS(DensityOperator{HermitianOperator{negative}}, ValidationError);
}

TEST_CASE("eigendecompose matches the 2x2 closed form") {
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 20; ++rep) {
        const HermitianOperator h = random_hermitian(2, rng);
        const EigenSystem es = eigendecompose(h);
        const auto [lo, hi] = eig2x2(h.matrix());
        CHECK(es.values(0) == doctest::Approx(lo).epsilon(1e-12));
        CHECK(es.values(1) == doctest::Approx(hi).epsilon(1e-12));
    }
}

TEST_CASE("eigendecompose is deterministic and phase-fixed") {
    const HermitianOperator h{pauli_dot(pi / 3, pi / 2)};
    const EigenSystem a = eigendecompose(h);
    const EigenSystem b = eigendecompose(h);
    CHECK((a.vectors - b.vectors).norm() == 0.0);
    for (int k = 0; k < 2; ++k) {
        // first nonzero entry is real positive
        int i = 0;
        while (std::abs(a.vectors(i, k)) < 1e-14) ++i;
        CHECK(a.vectors(i, k).imag() == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(a.vectors(i, k).real() > 0.0);
    }
    CHECK(std::is_sorted(a.values.data(), a.values.data() + a.values.size()));
}

TEST_CASE("reconstruction round trip") {
    std::mt19937_64 rng(7);
    for (int n = 2; n <= 6; ++n) {
        const HermitianOperator h = random_hermitian(n, rng);
        const EigenSystem es = eigendecompose(h);
        const double err =
            HermitianOperator::symmetrized(reconstruct(es) - h.matrix()).spectral_norm();
        CHECK(err <= 1e-9 * std::max(1.0, h.spectral_norm()));
    }
}

TEST_CASE("lyapunov solve: scaled identity base") {
    std::mt19937_64 rng(21);
    const HermitianOperator a{Matrix(0.5 * Matrix::Identity(3, 3))};
    const HermitianOperator b = random_hermitian(3, rng);
    const SylvesterResult r = solve_sylvester(a, b);
    CHECK_FALSE(r.kernel_projected);
    CHECK((r.solution.matrix() - 2.0 * b.matrix()).norm() ==
          doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("lyapunov solve: qubit blend closed form") {
    const double chi = 0.7;
    Matrix p0 = Matrix::Zero(2, 2);
    p0(0, 0) = 1.0;
    const Matrix tau = 0.5 * (Matrix::Identity(2, 2) + pauli_dot(0.0, pi / 2));
    const HermitianOperator a{Matrix(0.5 * (p0 + tau))};
    const HermitianOperator b{Matrix(chi * (p0 - tau))};
    const SylvesterResult r = solve_sylvester(a, b);
    const Matrix expected = 2.0 * chi * (p0 - tau);
    CHECK((r.solution.matrix() - expected).norm() <= 1e-10);
}

TEST_CASE("lyapunov solve: consistent kernel gives minimal-norm solution") {
    Matrix a(2, 2), b(2, 2);
    a << 1.0, 0.0, 0.0, 0.0;
    b << 1.0, 0.0, 0.0, 0.0;
    const SylvesterResult r = solve_sylvester(HermitianOperator{a}, HermitianOperator{b});
    CHECK(r.kernel_projected);
    Matrix expected(2, 2);
    expected << 1.0, 0.0, 0.0, 0.0;
    CHECK((r.solution.matrix() - expected).norm() <= 1e-12);
}

TEST_CASE("lyapunov solve: inconsistent kernel throws") {
    Matrix a(2, 2), b(2, 2);
    a << 1.0, 0.0, 0.0, 0.0;
    b << 0.0, 0.0, 0.0, 1.0;
    CHECK_THROWS_AS(solve_sylvester(HermitianOperator{a}, HermitianOperator{b}),
                    NumericError);
}

TEST_CASE("lyapunov residual property, dims 2 through 6") {
    std::mt19937_64 rng(33);
    for (int n = 2; n <= 6; ++n) {
        for (int rep = 0; rep < 20; ++rep) {
            const HermitianOperator a = random_psd(n, rng);
            const HermitianOperator b = random_hermitian(n, rng);
            const SylvesterResult r = solve_sylvester(a, b);
            const Matrix& x = r.solution.matrix();
            CHECK((x - x.adjoint()).norm() <= 1e-12 * std::max(1.0, x.norm()));
            const double residual =
                HermitianOperator::symmetrized(x * a.matrix() + a.matrix() * x -
                                               2.0 * b.matrix())
                    .spectral_norm();
            CHECK(residual <= 1e-9 * std::max(1.0, b.spectral_norm()));
        }
    }
}

TEST_CASE("eigenspace projectors: simple and degenerate spectra") {
    const HermitianOperator sz{pauli_dot(0.0, 0.0)};
    const ProjectorSet split = project_eigenspaces(eigendecompose(sz), 1e-10);
    REQUIRE(split.projectors.size() == 2);
    CHECK(split.labels[0] == doctest::Approx(-1.0));
    CHECK(split.labels[1] == doctest::Approx(1.0));
    CHECK(split.projectors[0].trace() == doctest::Approx(1.0));

    const HermitianOperator id{Matrix(Matrix::Identity(2, 2))};
    const ProjectorSet merged = project_eigenspaces(eigendecompose(id), 1e-10);
    REQUIRE(merged.projectors.size() == 1);
    CHECK(merged.projectors[0].trace() == doctest::Approx(2.0));
    CHECK(merged.labels[0] == doctest::Approx(1.0));
}

TEST_CASE("eigenspace projectors reproduce the reference spectrum") {
    Matrix p0 = Matrix::Zero(2, 2);
    p0(0, 0) = 1.0;
    const Matrix tau = 0.5 * (Matrix::Identity(2, 2) + pauli_dot(0.0, pi / 2));
    const HermitianOperator s{Matrix(2.0 * kChi001 * (p0 - tau))};
    const ProjectorSet ps = project_eigenspaces(eigendecompose(s), 1e-10);
    REQUIRE(ps.projectors.size() == 2);
    CHECK(ps.labels[0] == doctest::Approx(-kSPlus001HalfPi).epsilon(1e-12));
    CHECK(ps.labels[1] == doctest::Approx(kSPlus001HalfPi).epsilon(1e-12));
}

TEST_CASE("projector completeness, orthogonality, idempotence") {
    std::mt19937_64 rng(55);
    for (int rep = 0; rep < 10; ++rep) {
        const int n = 2 + static_cast<int>(rng() % 4);
        const ProjectorSet ps =
            project_eigenspaces(eigendecompose(random_hermitian(n, rng)), 1e-8);
        Matrix sum = Matrix::Zero(n, n);
        for (std::size_t i = 0; i < ps.projectors.size(); ++i) {
            const Matrix& p = ps.projectors[i].matrix();
            sum += p;
            CHECK((p * p - p).norm() <= 1e-10);
            for (std::size_t j = i + 1; j < ps.projectors.size(); ++j) {
                CHECK((p * ps.projectors[j].matrix()).norm() <= 1e-10);
            }
        }
        CHECK((sum - Matrix::Identity(n, n)).norm() <= 1e-10);
        CHECK(std::is_sorted(ps.labels.begin(), ps.labels.end()));
    }
}
