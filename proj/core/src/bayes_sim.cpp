#include "qbayes/bayes_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qbayes {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

} // namespace

PosteriorGrid make_posterior_grid(const PriorDensity& prior, const FMap& fmap,
                                  const QuadratureRule& rule) {
    PosteriorGrid grid;
    for (const PriorNode& node : prior_nodes(prior, rule)) {
        grid.theta_nodes.push_back(node.theta);
        grid.u_nodes.push_back(fmap.forward(node.theta));
        grid.base_weights.push_back(node.weight);
        grid.log_weights.push_back(0.0);
    }
    return grid;
}

std::vector<double> posterior_masses(const PosteriorGrid& grid) {
    const double peak = *std::max_element(grid.log_weights.begin(), grid.log_weights.end());
    std::vector<double> masses(grid.base_weights.size());
    double total = 0.0;
    for (std::size_t i = 0; i < masses.size(); ++i) {
        masses[i] = grid.base_weights[i] *
                    (grid.log_weights[i] == neg_inf ? 0.0
                                                    : std::exp(grid.log_weights[i] - peak));
        total += masses[i];
    }
    if (!(total > 0.0)) throw NumericError("posterior_masses: zero total mass");
    for (double& m : masses) m /= total;
    return masses;
}

double posterior_mean_f(const PosteriorGrid& grid) {
    const std::vector<double> masses = posterior_masses(grid);
    double mean = 0.0;
    for (std::size_t i = 0; i < masses.size(); ++i) mean += masses[i] * grid.u_nodes[i];
    return mean;
}

double posterior_variance_f(const PosteriorGrid& grid) {
    const std::vector<double> masses = posterior_masses(grid);
    double mean = 0.0, second = 0.0;
    for (std::size_t i = 0; i < masses.size(); ++i) {
        mean += masses[i] * grid.u_nodes[i];
        second += masses[i] * grid.u_nodes[i] * grid.u_nodes[i];
    }
    return second - mean * mean;
}

ShotRecord make_shot_record(std::size_t shot_index, const Controls& y,
                            std::size_t outcome, const StateFamily& family,
                            const Pom& pom, const PosteriorGrid& grid) {
    if (outcome >= pom.elements.size()) {
        throw ValidationError("make_shot_record: outcome index out of range");
    }
    ShotRecord record;
    record.shot_index = shot_index;
    record.y = y;
    record.outcome = outcome;
    record.label = outcome < pom.labels.size() ? pom.labels[outcome] : "";
    record.likelihoods.reserve(grid.theta_nodes.size());
    for (double theta : grid.theta_nodes) {
        const double p =
            trace_product(pom.elements[outcome],
                          family.state_of(theta, y).op());
        record.likelihoods.push_back(std::clamp(p, 0.0, 1.0));
    }
    return record;
}

std::size_t sample_outcome(const StateFamily& family, double theta_true,
                           const Controls& y, const Pom& pom, std::mt19937_64& rng) {
    validate_pom(pom);
    const DensityOperator state = family.state_of(theta_true, y);
    std::vector<double> probs;
    probs.reserve(pom.elements.size());
    double total = 0.0;
    for (const HermitianOperator& m : pom.elements) {
        const double p = trace_product(m, state.op());
        probs.push_back(std::max(p, 0.0));
        total += probs.back();
    }
    if (std::abs(total - 1.0) > default_tolerances().probability_sum) {
        std::ostringstream msg;
        msg << "sample_outcome: probabilities sum to " << total << " != 1";
        throw ValidationError(msg.str());
    }
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double draw = unit(rng) * total;
    double cumulative = 0.0;
    for (std::size_t x = 0; x < probs.size(); ++x) {
        cumulative += probs[x];
        if (draw <= cumulative) return x;
    }
    return probs.size() - 1;
}

PosteriorGrid update_posterior(const PosteriorGrid& grid, const ShotRecord& record) {
    if (record.likelihoods.size() != grid.theta_nodes.size()) {
        throw ValidationError("update_posterior: likelihood/node count mismatch");
    }
    PosteriorGrid next = grid;
    for (std::size_t i = 0; i < next.log_weights.size(); ++i) {
        const double like = record.likelihoods[i];
        next.log_weights[i] += like > 0.0 ? std::log(like) : neg_inf;
    }
    // Mass check against the floor before accepting the update.
    const double peak = *std::max_element(next.log_weights.begin(), next.log_weights.end());
    if (peak == neg_inf) {
        throw NumericError("update_posterior: impossible outcome (zero posterior mass)");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < next.log_weights.size(); ++i) {
        if (next.log_weights[i] != neg_inf) {
            total += next.base_weights[i] * std::exp(next.log_weights[i] - peak);
        }
    }
    if (total < default_tolerances().posterior_mass_floor) {
        throw NumericError("update_posterior: impossible outcome (zero posterior mass)");
    }
    // Keep log weights centered so repeated updates stay in range.
    for (double& lw : next.log_weights) {
        if (lw != neg_inf) lw -= peak;
    }
    return next;
}

double estimate(const PosteriorGrid& grid, const FMap& fmap) {
    const double mean = posterior_mean_f(grid);
    const double value = fmap.inverse(mean);
    if (!std::isfinite(value)) {
        throw NumericError("estimate: posterior mean of f maps outside the parameter range");
    }
    return value;
}

MomentOperators moments_from_grid(const PosteriorGrid& grid, const StateFamily& family,
                                  const Controls& y) {
    const std::vector<double> masses = posterior_masses(grid);
    double zeta = 0.0, mean = 0.0;
    Matrix rho0 = Matrix::Zero(family.dim, family.dim);
    Matrix rho1 = Matrix::Zero(family.dim, family.dim);
    for (std::size_t i = 0; i < masses.size(); ++i) {
        const double u = grid.u_nodes[i];
        const Matrix rho = family.state_of(grid.theta_nodes[i], y).matrix();
        zeta += masses[i] * u * u;
        mean += masses[i] * u;
        rho0 += masses[i] * rho;
        rho1 += masses[i] * u * rho;
    }
    return MomentOperators{zeta, HermitianOperator::symmetrized(rho0),
                           HermitianOperator::symmetrized(rho1), mean};
}

AdaptiveChoice adaptive_next_control(const PosteriorGrid& grid, const StateFamily& family,
                                     const FMap& fmap,
                                     const std::vector<Controls>& candidates) {
    if (candidates.empty()) {
        throw ValidationError("adaptive_next_control: empty candidate set");
    }
    AdaptiveChoice choice;
    choice.gain = -std::numeric_limits<double>::infinity();
    choice.gains.assign(candidates.size(), std::numeric_limits<double>::quiet_NaN());
    bool any = false;
    std::string last_error = "no candidates evaluated";
    for (std::size_t k = 0; k < candidates.size(); ++k) {
        try {
            Controls y = family.defaults;
            for (const auto& [key, v] : candidates[k]) y[key] = v;
            const MomentOperators moments = moments_from_grid(grid, family, y);
            const PersonickSolution sol = solve_optimal(moments, fmap, 1e-8);
            choice.gains[k] = sol.gain;
            if (sol.gain > choice.gain) {
                choice.gain = sol.gain;
                choice.index = k;
                choice.y = y;
            }
            any = true;
        } catch (const std::exception& e) {
            last_error = e.what();
        }
    }
    if (!any) {
        throw NumericError(std::string("adaptive_next_control: all candidates failed: ") +
                           last_error);
    }
    return choice;
}

ProtocolResult run_protocol(const StateFamily& family, const PriorDensity& prior,
                            const FMap& fmap, PomPolicy policy, int mu,
                            double theta_true, std::uint64_t seed,
                            const QuadratureRule& rule, const Controls& y0,
                            const std::vector<Controls>& candidates) {
    if (mu < 1) throw ValidationError("run_protocol: mu must be >= 1");
    if (policy == PomPolicy::adaptive && candidates.empty()) {
        throw ValidationError("run_protocol: adaptive policy needs candidates");
    }

    ProtocolResult result;
    result.final_grid = make_posterior_grid(prior, fmap, rule);
    std::mt19937_64 rng(seed);

    Controls y = family.defaults;
    for (const auto& [k, v] : y0) y[k] = v;

    Pom pom;
    if (policy == PomPolicy::fixed) {
        const MomentOperators moments = build_moments(family, prior, fmap, y, rule);
        pom = pom_from_projectors(solve_optimal(moments, fmap, 1e-8).pom);
    }

    for (int shot = 0; shot < mu; ++shot) {
        if (policy == PomPolicy::adaptive) {
            const AdaptiveChoice choice =
                adaptive_next_control(result.final_grid, family, fmap, candidates);
            y = choice.y;
            const MomentOperators moments = moments_from_grid(result.final_grid, family, y);
            pom = pom_from_projectors(solve_optimal(moments, fmap, 1e-8).pom);
        }
        const std::size_t outcome = sample_outcome(family, theta_true, y, pom, rng);
        const ShotRecord record = make_shot_record(static_cast<std::size_t>(shot), y,
                                                   outcome, family, pom, result.final_grid);
        result.final_grid = update_posterior(result.final_grid, record);
        result.outcomes.push_back(outcome);
        result.controls_used.push_back(y);
        result.variance_trace.push_back(posterior_variance_f(result.final_grid));
        result.estimate_trace.push_back(estimate(result.final_grid, fmap));
    }
    result.estimate = estimate(result.final_grid, fmap);
    return result;
}

} // namespace qbayes
