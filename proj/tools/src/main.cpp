#include "trapmodes_app/runner.hpp"

#include <trapmodes/error.hpp>

#include <CLI11.hpp>

#include <iostream>

using namespace trapmodes;
using namespace trapmodes::app;

namespace {

struct Cli {
    std::string config_path;
    std::string out_dir;
    bool verbose = false;
    bool plots = false;
    bool explain = false;
};

int run(const std::string& subcommand, const Cli& cli) {
    ExperimentConfig config;
    try {
        if (cli.config_path.empty()) {
            if (subcommand != "validate") throw ConfigError("--config is required for '" + subcommand + "'");
            config = parse_config("schema = 1\n\n[experiment]\nkind = validate\n");
        } else {
            config = load_config(cli.config_path);
        }
        if (to_string(config.kind) != subcommand)
            throw ConfigError("config describes a '" + std::string(to_string(config.kind)) + "' experiment, not '" +
                              subcommand + "'");
    } catch (const std::exception& e) {
        std::cerr << "trapmodes: " << e.what() << "\n";
        return exit_code_for(e);
    }

    RunOptions options;
    options.out_dir = cli.out_dir;
    options.verbose = cli.verbose;
    options.plots = cli.plots;
    options.explain = cli.explain;
    options.log = &std::cerr;
    const RunOutcome outcome = run_config(config, options);
    if (!outcome.error.empty()) std::cerr << "trapmodes: " << outcome.error << "\n";
    if (cli.verbose)
        std::cerr << "trapmodes: " << outcome.manifest.files.size() << " files written, exit " << outcome.exit_code
                  << "\n";
    return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Trapped modes in thin and semi-infinite waveguides", "trapmodes"};
    app.set_version_flag("--version", TRAPMODES_VERSION);
    app.require_subcommand(1);

    Cli cli;
    std::string chosen;
    for (const auto& name : kind_names()) {
        auto* sub = app.add_subcommand(name, "Run a '" + name + "' experiment");
        auto* cfg = sub->add_option("--config", cli.config_path, "Experiment configuration file");
        if (name != "validate") cfg->required();
        cfg->check(CLI::ExistingFile);
        sub->add_option("--out", cli.out_dir, "Output directory (overrides output.dir)");
        sub->add_flag("--verbose", cli.verbose, "Log steps and timings to stderr");
        sub->add_flag("--plots", cli.plots, "Also write SVG plots");
        sub->add_flag("--explain", cli.explain, "Write condition integrand samples");
        sub->callback([&chosen, name] { chosen = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }
    return run(chosen, cli);
}
