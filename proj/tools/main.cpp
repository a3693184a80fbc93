#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "../src/cli/commands.hpp"
#include "../src/cli/config.hpp"
#include "ringpair/errors.hpp"

namespace {

struct SharedArgs {
    std::string config_path;
    std::string preset;
    ringpair::cli::CommandOptions options;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

void add_common(CLI::App* cmd, SharedArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON run configuration");
    cmd->add_option("--preset", args.preset, "built-in configuration name");
    cmd->add_option("--out", args.options.out_dir, "output directory")->capture_default_str();
    cmd->add_option("--seed", args.seed, "override the RNG seed")
        ->each([&args](const std::string&) { args.seed_set = true; });
    cmd->add_flag("--quiet", args.options.quiet, "suppress stdout summaries");
}

ringpair::cli::RunConfig resolve_config(const SharedArgs& args) {
    if (!args.config_path.empty() && !args.preset.empty())
        throw ringpair::config_error("give either --config or --preset, not both");
    if (!args.config_path.empty())
        return ringpair::cli::load_config_file(args.config_path);
    if (!args.preset.empty())
        return ringpair::cli::preset_config(args.preset);
    throw ringpair::config_error("one of --config or --preset is required");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"microring photon-pair source toolkit"};
    app.require_subcommand(1);

    SharedArgs spectrum_args, figures_args, coinc_args, tune_args;
    add_common(app.add_subcommand("spectrum", "through/drop transmission spectra"), spectrum_args);
    add_common(app.add_subcommand("figures", "pair-source figures of merit and theory curve"),
               figures_args);
    add_common(app.add_subcommand("coinc", "simulated coincidence-counting experiment"),
               coinc_args);
    add_common(app.add_subcommand("tune", "heater grid sweep and refinement"), tune_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    const auto run = [&](const char* name, SharedArgs& args,
                         int (*fn)(const ringpair::cli::RunConfig&,
                                   const ringpair::cli::CommandOptions&)) -> int {
        if (!app.got_subcommand(name))
            return -1;
        if (args.seed_set)
            args.options.seed_override = args.seed;
        const auto config = resolve_config(args);
        return fn(config, args.options);
    };

    try {
        int rc;
        if ((rc = run("spectrum", spectrum_args, ringpair::cli::cmd_spectrum)) >= 0)
            return rc;
        if ((rc = run("figures", figures_args, ringpair::cli::cmd_figures)) >= 0)
            return rc;
        if ((rc = run("coinc", coinc_args, ringpair::cli::cmd_coinc)) >= 0)
            return rc;
        if ((rc = run("tune", tune_args, ringpair::cli::cmd_tune)) >= 0)
            return rc;
        return 2;
    } catch (const ringpair::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
