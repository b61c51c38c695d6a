#include "scenario.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

int main(int argc, char** argv) {
    CLI::App app{"Global action-angle variables for the Duffing oscillator"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "integrate a scenario file and write its figures");
    std::string config;
    std::string out_dir = ".";
    run->add_option("config", config, "scenario JSON file")->required();
    run->add_option("--output-dir", out_dir, "base directory for relative output paths");

    auto* verify = app.add_subcommand("verify", "run the numerical oracle checks");
    std::string only;
    double tolerance = 0.0;
    std::uint64_t seed = duffing::cli::default_seed();
    verify->add_option("--only", only, "run only the named check");
    auto* tol_opt = verify->add_option("--tolerance", tolerance, "override every check's tolerance");
    verify->add_option("--seed", seed, "sampling seed (default: $DUFFING_SEED or 42)");

    auto* field = app.add_subcommand("field", "evaluate the vector fields at a point");
    std::string at;
    double mu = 0.0;
    bool covered = false;
    field->add_option("--at", at, "point as x,y")->required();
    field->add_option("--mu", mu, "damping coefficient");
    field->add_flag("--covered", covered, "also evaluate the covered field and angle");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    if (*run) return duffing::cli::run_command(config, out_dir, std::cerr);
    if (*verify) {
        std::optional<double> tol;
        if (*tol_opt) tol = tolerance;
        return duffing::cli::verify_command(only, seed, tol, std::cout, std::cerr);
    }
    if (*field) {
        std::istringstream is(at);
        double x = 0.0;
        double y = 0.0;
        char comma = 0;
        if (!(is >> x >> comma >> y) || comma != ',' || !is.eof()) {
            std::cerr << "field: --at expects x,y\n";
            return 2;
        }
        return duffing::cli::field_command(x, y, mu, covered, std::cout, std::cerr);
    }
    return 0;
}
