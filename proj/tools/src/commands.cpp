#include "commands.hpp"

#include <algorithm>
#include <cmath>

#include "qbayes/parallel.hpp"
#include "qbayes/quadrature.hpp"

namespace qbayes::cli {

namespace {

Json matrix_to_json(const Matrix& m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
        }
        rows.push_back(row);
    }
    return rows;
}

PersonickSolution solve_for(RunConfig& cfg) {
    const QuadratureRule& rule = gauss_legendre(cfg.quadrature_order);
    const MomentOperators moments =
        build_moments(cfg.family, cfg.prior, cfg.fmap, cfg.controls, rule);
    return solve_optimal(moments, cfg.fmap, cfg.merge_tol);
}

} // namespace

void cmd_solve(RunConfig& cfg, std::ostream& out) {
    const PersonickSolution sol = solve_for(cfg);
    Json doc;
    doc["s_matrix"] = matrix_to_json(sol.S.matrix());
    doc["eigenvalues"] = sol.pom.labels;
    Json pom = Json::array();
    for (const HermitianOperator& projector : sol.pom.projectors) {
        pom.push_back(matrix_to_json(projector.matrix()));
    }
    doc["pom"] = pom;
    doc["estimates"] = sol.estimates;
    doc["prior_error"] = sol.prior_error;
    doc["gain"] = sol.gain;
    doc["min_error"] = sol.min_error;
    doc["gain_ratio"] = sol.prior_error > 0.0 ? sol.gain / sol.prior_error : 0.0;
    out << doc.dump(2) << "\n";
}

void cmd_sweep(RunConfig& cfg, std::ostream& out) {
    std::vector<double> a_grid = cfg.sweep_a;
    if (a_grid.empty()) {
        if (!cfg.haldane_a) {
            throw ValidationError("sweep: an a-grid (or a haldane prior) is required");
        }
        a_grid = {*cfg.haldane_a};
    }
    std::vector<double> alpha_grid = cfg.sweep_alpha;
    if (alpha_grid.empty()) alpha_grid = {cfg.controls.count("alpha") ? cfg.controls["alpha"] : 0.0};
    std::vector<double> beta_grid = cfg.sweep_beta;
    if (beta_grid.empty()) beta_grid = {cfg.controls.count("beta") ? cfg.controls["beta"] : 0.0};

    struct Cell {
        double a, alpha, beta;
        double prior_error = 0.0, gain = 0.0, min_error = 0.0, gain_ratio = 0.0;
        std::string error;
    };
    std::vector<Cell> cells;
    for (double a : a_grid) {
        for (double alpha : alpha_grid) {
            for (double beta : beta_grid) {
                cells.push_back(Cell{a, alpha, beta});
            }
        }
    }

    const QuadratureRule& rule = gauss_legendre(cfg.quadrature_order);
    parallel_for(cells.size(), cfg.threads, [&](std::size_t i) {
        Cell& cell = cells[i];
        try {
            const PriorDensity prior = haldane_prior(cell.a);
            Controls y = cfg.controls;
            y["alpha"] = cell.alpha;
            y["beta"] = cell.beta;
            const MomentOperators moments =
                build_moments(cfg.family, prior, cfg.fmap, y, rule);
            const PersonickSolution sol = solve_optimal(moments, cfg.fmap, cfg.merge_tol);
            cell.prior_error = sol.prior_error;
            cell.gain = sol.gain;
            cell.min_error = sol.min_error;
            cell.gain_ratio = sol.prior_error > 0.0 ? sol.gain / sol.prior_error : 0.0;
        } catch (const std::exception& e) {
            cell.error = e.what();
        }
    });

    out << "a,alpha,beta,prior_error,gain,min_error,gain_ratio,error\n";
    for (const Cell& cell : cells) {
        out << format_real(cell.a) << ',' << format_real(cell.alpha) << ','
            << format_real(cell.beta) << ',';
        if (cell.error.empty()) {
            out << format_real(cell.prior_error) << ',' << format_real(cell.gain) << ','
                << format_real(cell.min_error) << ',' << format_real(cell.gain_ratio) << ",\n";
        } else {
            std::string msg = cell.error;
            std::replace(msg.begin(), msg.end(), ',', ';');
            std::replace(msg.begin(), msg.end(), '\n', ' ');
            out << ",,,," << msg << "\n";
        }
    }
}

void cmd_figure1(RunConfig& cfg, std::ostream& out) {
    const Figure1Table table = figure1_sweep(cfg.fig1_a, cfg.fig1_beta, cfg.fig1_alphas,
                                             cfg.fig1_eta0, cfg.quadrature_order, cfg.threads);
    out << "alpha,eta0,mhe,prior_error,min_error\n";
    for (const Figure1Cell& cell : table.cells) {
        out << format_real(cell.alpha) << ',' << format_real(cell.eta0) << ',';
        if (cell.mhe) out << format_real(*cell.mhe);
        out << ',' << format_real(table.prior_error) << ',' << format_real(table.min_error)
            << "\n";
    }
}

void cmd_simulate(RunConfig& cfg, std::ostream& csv_out, std::ostream& json_out) {
    if (!cfg.sim_seed_set) {
        throw ValidationError("simulate: a seed is required (config simulate.seed or --seed)");
    }
    if (cfg.sim_policy == PomPolicy::adaptive && cfg.sim_candidates.empty()) {
        throw ValidationError("simulate: adaptive policy needs simulate.candidates");
    }
    const QuadratureRule& rule = gauss_legendre(cfg.quadrature_order);
    const ProtocolResult result =
        run_protocol(cfg.family, cfg.prior, cfg.fmap, cfg.sim_policy, cfg.sim_mu,
                     cfg.sim_theta_true, cfg.sim_seed, rule, cfg.controls,
                     cfg.sim_candidates);

    csv_out << "shot,outcome,posterior_var_f,estimate\n";
    for (std::size_t i = 0; i < result.outcomes.size(); ++i) {
        csv_out << (i + 1) << ',' << result.outcomes[i] << ','
                << format_real(result.variance_trace[i]) << ','
                << format_real(result.estimate_trace[i]) << "\n";
    }

    // Central 95% credible interval from the cumulative posterior over
    // theta (grid nodes are theta-ascending).
    const std::vector<double> masses = posterior_masses(result.final_grid);
    auto quantile = [&](double q) {
        double cumulative = 0.0;
        for (std::size_t i = 0; i < masses.size(); ++i) {
            cumulative += masses[i];
            if (cumulative >= q) return result.final_grid.theta_nodes[i];
        }
        return result.final_grid.theta_nodes.back();
    };
    Json summary;
    summary["estimate"] = result.estimate;
    summary["credible_interval_95"] = Json::array({quantile(0.025), quantile(0.975)});
    summary["shots"] = cfg.sim_mu;
    summary["seed"] = cfg.sim_seed;
    summary["final_posterior_var_f"] = result.variance_trace.back();
    json_out << summary.dump(2) << "\n";
}

} // namespace qbayes::cli
