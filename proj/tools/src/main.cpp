#include <iostream>

#include <CLI11.hpp>

#include "run.hpp"

namespace {

bolza::GridAxis parseGrid(const std::vector<double>& g) {
    if (g.size() != 3 || !(g[0] < g[1]) || g[2] < 2 || g[2] != static_cast<int>(g[2]))
        throw CLI::ValidationError("--grid", "expected lo,hi,n with lo < hi and integer n >= 2");
    return {g[0], g[1], static_cast<int>(g[2])};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete-time convex Bolza problems: solves, duality certificates, characteristics, qualification "
                 "and grid oracles."};
    app.require_subcommand(1);
    app.fallthrough();

    bolza::cli::RunConfig cfg;
    std::vector<double> grid;
    std::string out;
    app.add_option("-p,--problem", cfg.problem, "Problem file (JSON)")->check(CLI::ExistingFile);
    app.add_option("--tau", cfg.tau, "Start stage")->capture_default_str();
    app.add_option("--xi", cfg.xi, "Initial state, comma separated")->delimiter(',')->allow_extra_args(false);
    app.add_option("--eta", cfg.eta, "Dual point, comma separated")->delimiter(',')->allow_extra_args(false);
    app.add_option("--grid", grid, "Grid lo,hi,n")->delimiter(',')->allow_extra_args(false);
    app.add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
    app.add_option("-o,--out", out, "Output directory (default $BOLZA_OUTPUT_DIR or .)");
    app.add_option("-j,--jobs", cfg.jobs, "Worker threads for sweep")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--method", cfg.method, "Oracle method")->check(CLI::IsMember({"auto", "dp", "riccati"}))
        ->capture_default_str();
    app.add_option("--tol-psd", cfg.tol.psd)->capture_default_str();
    app.add_option("--tol-kkt", cfg.tol.kkt)->capture_default_str();
    app.add_option("--tol-ri", cfg.tol.ri)->capture_default_str();
    app.add_option("--tol-cert", cfg.tol.cert)->capture_default_str();
    app.add_option("--tol-feas", cfg.tol.feas)->capture_default_str();
    app.add_option("--tol-num", cfg.tol.num)->capture_default_str();
    app.add_option("--tol-sub", cfg.tol.sub)->capture_default_str();
    app.add_option("--tol-grid", cfg.tol.grid)->capture_default_str();
    app.add_option("--tol-active", cfg.tol.active)->capture_default_str();

    app.add_subcommand("solve", "Optimal trajectory and value theta_tau(xi)");
    app.add_subcommand("dualize", "Probe tables of the dual stage and terminal costs");
    app.add_subcommand("check-duality", "Duality certificate for (xi, eta)");
    app.add_subcommand("characteristics", "Primal/dual pair and Hamiltonian residuals");
    app.add_subcommand("qualify", "Constraint qualifications CQ, H, H'");
    app.add_subcommand("sweep", "theta_tau over a grid, CSV and SVG");
    app.add_subcommand("oracle", "Grid value tables (DP or Riccati)");

    try {
        app.parse(argc, argv);
        if (!grid.empty()) cfg.grid = parseGrid(grid);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : bolza::cli::kUsage;
    }
    cfg.command = app.get_subcommands().front()->get_name();
    cfg.outDir = out;
    return bolza::cli::run(cfg, std::cout, std::cerr);
}
