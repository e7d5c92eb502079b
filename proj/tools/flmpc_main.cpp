#include <cstdint>
#include <string>

#include "CLI11.hpp"

#include "flmpc/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"deterministic multi-party protocol harness for federated learning"};
    app.require_subcommand(1);

    flmpc::CliOptions options;

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        auto* config = cmd->add_option("--config", options.config_path, "experiment config file");
        if (needs_config) config->required();
        cmd->add_option("--data", options.data_path, "dataset file (overrides config)");
        cmd->add_option("--out", options.out_dir, "output directory");
        cmd->add_option("--workers", options.workers, "enumeration worker count")
            ->check(CLI::PositiveNumber);
        cmd->add_option_function<std::uint64_t>(
            "--seed", [&](std::uint64_t s) { options.seed = s; },
            "selection/mask seed (overrides config)");
        cmd->add_option_function<std::string>(
               "--mode", [&](const std::string& s) { options.mode = s; },
               "privacy check mode: det or general")
            ->check(CLI::IsMember({"det", "general"}));
    };

    add_common(app.add_subcommand("run", "execute the protocol and persist transcript + model"),
               true);
    add_common(app.add_subcommand("ideal", "evaluate the composed functionality only"), true);
    add_common(app.add_subcommand("check-privacy",
                                  "exhaustive real-vs-simulated view distribution check"),
               true);
    add_common(app.add_subcommand("check-reduction",
                                  "oracle-aided vs substituted protocol comparison"),
               true);
    add_common(app.add_subcommand("report", "validate and summarize a stored transcript"),
               false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : flmpc::exit_code::usage;
    }

    options.command = app.get_subcommands().front()->get_name();
    return flmpc::run_cli(options);
}
