#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qbayes/bayes_sim.hpp"
#include "qbayes/blend.hpp"
#include "qbayes/personick.hpp"

namespace qbayes::cli {

using Json = nlohmann::json;

/// Parsed and validated run configuration. Unknown keys anywhere in the
/// config file are rejected with the offending path.
struct RunConfig {
    std::string model = "blend"; // "blend" | "custom"

    // fmap
    FMap fmap;

    // prior
    PriorDensity prior;
    std::optional<double> haldane_a; // set when prior.kind == haldane

    Controls controls; // alpha/beta for blend; free-form for custom

    int quadrature_order = 200;
    double merge_tol = 1e-8;
    int threads = 1;

    StateFamily family;

    // sweep grids (empty -> single cell from base controls)
    std::vector<double> sweep_a;
    std::vector<double> sweep_alpha;
    std::vector<double> sweep_beta;

    // figure1
    double fig1_a = 0.01;
    double fig1_beta = 0.0;                 // defaults to pi/2 when unset
    std::vector<double> fig1_alphas;        // defaults to {0, pi/4, pi/2}
    std::vector<double> fig1_eta0;          // defaults to 99 points on [0.01, 0.99]

    // simulate
    int sim_mu = 1;
    double sim_theta_true = 0.5;
    std::uint64_t sim_seed = 0;
    bool sim_seed_set = false;
    PomPolicy sim_policy = PomPolicy::fixed;
    std::vector<Controls> sim_candidates;
};

/// Loads the config file, applies command-line overrides, and builds the
/// model family. Throws qbayes::ValidationError with a field path on any
/// problem.
RunConfig load_config(const std::string& path, std::optional<std::uint64_t> seed_override,
                      std::optional<int> quad_order_override,
                      std::optional<int> threads_override);

/// Serializes a double with 17 significant digits (lossless round trip).
std::string format_real(double v);

} // namespace qbayes::cli
