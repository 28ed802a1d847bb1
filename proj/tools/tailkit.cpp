// tailkit: asymptotics, rare-event estimates and condition checks for
// log-normal random sums and maxima, driven by JSON experiment configs.

#include "tailkit/errors.hpp"
#include "tailkit/harness.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

int write_output(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return tailkit::kExitOk;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "tailkit: cannot write " << path << '\n';
        return tailkit::kExitConfig;
    }
    out << text;
    return tailkit::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tail asymptotics and rare-event simulation for log-normal random sums"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::optional<unsigned> workers;
    std::optional<std::uint64_t> seed;

    const std::pair<const char*, const char*> commands[] = {
        {"asym", "Evaluate asymptotic tail formulas over the threshold grid"},
        {"simulate", "Run the configured estimators over the threshold grid"},
        {"compare", "Estimates against an asymptotic formula, with ratio trend summary"},
        {"validate", "Check the claim-count and correlation conditions"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "JSON experiment config")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_path, "Write output here instead of stdout (default: config \"output\")");
        sub->add_option("--workers", workers, "Worker threads (overrides TAILKIT_WORKERS and the config)")
            ->check(CLI::Range(1, 1024));
        sub->add_option("--seed", seed, "Base RNG seed (overrides the config)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : tailkit::kExitConfig;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        const tailkit::ExperimentConfig cfg = tailkit::load_config(config_path);
        const tailkit::RunOverrides overrides{workers, seed};
        tailkit::CommandResult res;
        if (command == "asym") res = tailkit::cmd_asym(cfg, overrides);
        else if (command == "simulate") res = tailkit::cmd_simulate(cfg, overrides);
        else if (command == "compare") res = tailkit::cmd_compare(cfg, overrides);
        else res = tailkit::cmd_validate(cfg, overrides);

        const std::string path = !out_path.empty() ? out_path : cfg.output.value_or("");
        if (const int rc = write_output(res.output, path); rc != tailkit::kExitOk) return rc;
        if (res.exit_code == tailkit::kExitAllFailed) std::cerr << "tailkit: every row failed; see the error column\n";
        return res.exit_code;
    } catch (const tailkit::ConfigError& e) {
        std::cerr << "tailkit " << command << ": " << e.what() << "\n\n" << app.get_subcommand(command)->help();
        return tailkit::kExitConfig;
    } catch (const tailkit::ConditionError& e) {
        std::cerr << "tailkit " << command << ": " << e.what() << '\n';
        return tailkit::kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "tailkit " << command << ": " << e.what() << '\n';
        return tailkit::kExitConfig;
    }
}
