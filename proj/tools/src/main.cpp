#include "gibbs/cli/commands.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv) {
    using namespace gibbs::cli;

    CLI::App app{"Finite-chain thermal-state experiments"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    auto* run = app.add_subcommand("run", "Run the sweep described by a config file");
    run->add_option("config", config_path, "Config file ([model], [sweep], [output])")->required();
    run->add_option("--out", out_dir, "Output directory")->required();

    std::string level = "fast";
    auto* verify = app.add_subcommand("verify", "Run the invariant suite");
    verify->add_option("--level", level, "fast or full")->check(CLI::IsMember({"fast", "full"}));

    std::string csv_path, svg_path;
    auto* plot = app.add_subcommand("plot", "Plot results.csv as a semilog SVG");
    plot->add_option("csv", csv_path, "results.csv")->required();
    plot->add_option("--out", svg_path, "Output SVG")->required();

    auto* models = app.add_subcommand("models", "List model presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    if (run->parsed()) return cmd_run(config_path, out_dir, std::cout, std::cerr);
    if (verify->parsed()) return cmd_verify(parse_verify_level(level), std::cout, std::cerr);
    if (plot->parsed()) return cmd_plot(csv_path, svg_path, std::cerr);
    if (models->parsed()) return cmd_models(std::cout);
    return kExitConfig;
}
