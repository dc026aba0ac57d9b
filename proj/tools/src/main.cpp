#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"

namespace {

struct CommonOptions {
    std::string config_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> quad_order;
    std::optional<int> threads;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--config", opts.config_path, "Path to the JSON run configuration")
        ->required();
    cmd->add_option("--out", opts.out_path, "Output file (stdout when omitted)");
    cmd->add_option("--seed", opts.seed, "Override the simulation seed");
    cmd->add_option("--quad-order", opts.quad_order, "Override the quadrature order");
    cmd->add_option("--threads", opts.threads, "Worker threads for sweep cells");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal Bayesian measurement strategies for location-isomorphic parameters"};
    app.require_subcommand(1);

    CommonOptions opts;
    CLI::App* solve = app.add_subcommand("solve", "Optimal estimator, POM, and exact minimum error");
    CLI::App* sweep = app.add_subcommand("sweep", "Error budget over a grid of (a, alpha, beta)");
    CLI::App* figure1 = app.add_subcommand("figure1", "Mean hyperbolic errors of SLD-based local POMs");
    CLI::App* simulate = app.add_subcommand("simulate", "Multi-shot Bayesian measurement simulation");
    for (CLI::App* cmd : {solve, sweep, figure1, simulate}) add_common(cmd, opts);

    CLI11_PARSE(app, argc, argv);

    try {
        qbayes::cli::RunConfig cfg =
            qbayes::cli::load_config(opts.config_path, opts.seed, opts.quad_order, opts.threads);

        std::ofstream file;
        const bool to_file = !opts.out_path.empty();
        if (to_file) {
            file.open(opts.out_path);
            if (!file) {
                std::cerr << "error: cannot open output file " << opts.out_path << "\n";
                return 1;
            }
        }
        std::ostream& out = to_file ? file : std::cout;

        if (solve->parsed()) {
            qbayes::cli::cmd_solve(cfg, out);
        } else if (sweep->parsed()) {
            qbayes::cli::cmd_sweep(cfg, out);
        } else if (figure1->parsed()) {
            qbayes::cli::cmd_figure1(cfg, out);
        } else if (simulate->parsed()) {
            if (to_file) {
                std::ofstream json_file(opts.out_path + ".json");
                if (!json_file) {
                    std::cerr << "error: cannot open " << opts.out_path << ".json\n";
                    return 1;
                }
                qbayes::cli::cmd_simulate(cfg, out, json_file);
            } else {
                qbayes::cli::cmd_simulate(cfg, std::cout, std::cout);
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
