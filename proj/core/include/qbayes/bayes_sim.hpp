#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "qbayes/personick.hpp"

namespace qbayes {

/// Discretized posterior on the prior's quadrature nodes, kept in
/// u = f(theta) coordinates with log-space weights so long runs do not
/// underflow. base_weights carry the prior; log_weights accumulate
/// likelihoods.
struct PosteriorGrid {
    std::vector<double> theta_nodes;
    std::vector<double> u_nodes;
    std::vector<double> base_weights; // sum to 1
    std::vector<double> log_weights;  // start at 0
};

PosteriorGrid make_posterior_grid(const PriorDensity& prior, const FMap& fmap,
                                  const QuadratureRule& rule);

/// Normalized posterior masses per node.
std::vector<double> posterior_masses(const PosteriorGrid& grid);

/// Posterior mean and variance of f.
double posterior_mean_f(const PosteriorGrid& grid);
double posterior_variance_f(const PosteriorGrid& grid);

/// One recorded measurement: which POM element fired and the likelihood
/// tr(M_x rho_y(theta)) cached at every grid node.
struct ShotRecord {
    std::size_t shot_index = 0;
    Controls y;
    std::size_t outcome = 0;
    std::string label;
    std::vector<double> likelihoods;
};

ShotRecord make_shot_record(std::size_t shot_index, const Controls& y,
                            std::size_t outcome, const StateFamily& family,
                            const Pom& pom, const PosteriorGrid& grid);

/// Born-rule draw: outcome x with probability tr(M_x rho_y(theta_true)).
std::size_t sample_outcome(const StateFamily& family, double theta_true,
                           const Controls& y, const Pom& pom, std::mt19937_64& rng);

/// Bayes update: adds log-likelihoods and renormalizes. Throws NumericError
/// when the posterior mass collapses below the floor (impossible outcome).
PosteriorGrid update_posterior(const PosteriorGrid& grid, const ShotRecord& record);

/// f^{-1} of the posterior mean of f; reproduces the tanh/artanh
/// simultaneous-processing rule for the weight fmap.
double estimate(const PosteriorGrid& grid, const FMap& fmap);

struct AdaptiveChoice {
    std::size_t index = 0;
    Controls y;
    double gain = 0.0;
    std::vector<double> gains; // per candidate; NaN where the solve failed
};

/// Moments of the family against the current posterior (used as the prior
/// of the next shot).
MomentOperators moments_from_grid(const PosteriorGrid& grid, const StateFamily& family,
                                  const Controls& y);

/// Picks the candidate control with the largest precision gain against the
/// current posterior; ties go to the first occurrence.
AdaptiveChoice adaptive_next_control(const PosteriorGrid& grid, const StateFamily& family,
                                     const FMap& fmap,
                                     const std::vector<Controls>& candidates);

enum class PomPolicy { fixed, adaptive };

struct ProtocolResult {
    double estimate = 0.0;
    std::vector<double> variance_trace; // posterior variance of f after each shot
    std::vector<double> estimate_trace; // running estimate after each shot
    std::vector<std::size_t> outcomes;
    std::vector<Controls> controls_used;
    PosteriorGrid final_grid;
};

/// Full multi-shot run: sample -> update -> (adaptive: re-optimize POM
/// against the posterior). Deterministic under a fixed seed.
ProtocolResult run_protocol(const StateFamily& family, const PriorDensity& prior,
                            const FMap& fmap, PomPolicy policy, int mu,
                            double theta_true, std::uint64_t seed,
                            const QuadratureRule& rule, const Controls& y0,
                            const std::vector<Controls>& candidates = {});

} // namespace qbayes
