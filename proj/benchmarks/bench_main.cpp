#include <numbers>
#include <random>

#include <benchmark/benchmark.h>

#include "qbayes/bayes_sim.hpp"
#include "qbayes/blend.hpp"
#include "qbayes/special.hpp"

using namespace qbayes;
using std::numbers::pi;

namespace {

HermitianOperator random_hermitian(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) m(i, j) = Complex(gauss(rng), gauss(rng));
    }
    return HermitianOperator::symmetrized(m);
}

void bm_eigendecompose(benchmark::State& state) {
    std::mt19937_64 rng(1);
    const HermitianOperator h = random_hermitian(static_cast<int>(state.range(0)), rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(eigendecompose(h));
    }
}
BENCHMARK(bm_eigendecompose)->Arg(2)->Arg(4)->Arg(8);

void bm_lyapunov_solve(benchmark::State& state) {
    std::mt19937_64 rng(2);
    const int n = static_cast<int>(state.range(0));
    const Matrix g = [&] {
        std::normal_distribution<double> gauss(0.0, 1.0);
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) m(i, j) = Complex(gauss(rng), gauss(rng));
        }
        return m;
    }();
    const HermitianOperator a =
        HermitianOperator::symmetrized(g * g.adjoint() + 0.1 * Matrix::Identity(n, n));
    const HermitianOperator b = random_hermitian(n, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_sylvester(a, b));
    }
}
BENCHMARK(bm_lyapunov_solve)->Arg(2)->Arg(4)->Arg(8);

void bm_full_solve_pipeline(benchmark::State& state) {
    const StateFamily fam = blend_family(BlochDirection{0.0, pi / 2});
    const PriorDensity prior = haldane_prior(0.01);
    const FMap w = weight_fmap();
    const QuadratureRule& rule = gauss_legendre(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        const MomentOperators m = build_moments(fam, prior, w, Controls{}, rule);
        benchmark::DoNotOptimize(solve_optimal(m, w, 1e-8));
    }
}
BENCHMARK(bm_full_solve_pipeline)->Arg(50)->Arg(200)->Arg(400);

void bm_dilog(benchmark::State& state) {
    double z = 0.001;
    for (auto _ : state) {
        benchmark::DoNotOptimize(dilog(z));
        z += 0.001;
        if (z >= 1.0) z = 0.001;
    }
}
BENCHMARK(bm_dilog);

void bm_posterior_update(benchmark::State& state) {
    const StateFamily fam = blend_family(BlochDirection{0.0, pi / 2});
    const PriorDensity prior = haldane_prior(0.01);
    const FMap w = weight_fmap();
    const QuadratureRule& rule = gauss_legendre(static_cast<int>(state.range(0)));
    const MomentOperators m = build_moments(fam, prior, w, Controls{}, rule);
    const Pom pom = pom_from_projectors(solve_optimal(m, w, 1e-8).pom);
    const PosteriorGrid grid = make_posterior_grid(prior, w, rule);
    const ShotRecord record = make_shot_record(0, Controls{}, 0, fam, pom, grid);
    for (auto _ : state) {
        benchmark::DoNotOptimize(update_posterior(grid, record));
    }
}
BENCHMARK(bm_posterior_update)->Arg(100)->Arg(200);

void bm_protocol_100_shots(benchmark::State& state) {
    const StateFamily fam = blend_family(BlochDirection{0.0, pi / 2});
    const PriorDensity prior = haldane_prior(0.01);
    const FMap w = weight_fmap();
    const QuadratureRule& rule = gauss_legendre(100);
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_protocol(fam, prior, w, PomPolicy::fixed, 100,
                                              0.3, 42, rule, Controls{}));
    }
}
BENCHMARK(bm_protocol_100_shots);

} // namespace

BENCHMARK_MAIN();
