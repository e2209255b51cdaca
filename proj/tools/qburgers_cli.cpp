// Command-line driver.  Subcommands: evolve | correlate | flatness |
// resources | ensemble.  Exit codes: 0 success, 2 configuration error,
// 3 statevector/resource ceiling, 4 numerical guard tripped.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qburgers/commands.hpp"
#include "qburgers/errors.hpp"

namespace {

struct CliArgs {
    std::string command;
    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out_dir;
    std::string format;
    bool exact = false;
    bool gaussian = false;
    bool shot = false;
    int max_qubits = 0;
    bool max_qubits_set = false;
};

void add_common_options(CLI::App* sub, CliArgs& args) {
    sub->add_option("--config", args.config_path, "configuration file (sections or JSON)")
        ->required();
    sub->add_option("--seed", args.seed,
                    "master seed; reseeds ic/readout/ensemble substreams")
        ->each([&args](const std::string&) { args.seed_set = true; });
    sub->add_option("--out", args.out_dir, "output directory (overrides config)");
    sub->add_option("--format", args.format, "output format (overrides config)")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_flag("--exact", args.exact, "exact readout (overrides config)");
    sub->add_flag("--gaussian", args.gaussian, "gaussian readout (overrides config)");
    sub->add_flag("--shot", args.shot, "shot-sampled readout (overrides config)");
    sub->add_option("--max-qubits", args.max_qubits, "statevector qubit ceiling")
        ->each([&args](const std::string&) { args.max_qubits_set = true; });
}

int run(const CliArgs& args) {
    using namespace qburgers;
    RunConfig cfg = load_config(args.config_path);

    if (args.seed_set) apply_seed_override(cfg, args.seed);
    if (!args.out_dir.empty()) cfg.output.directory = args.out_dir;
    if (!args.format.empty()) cfg.output.formats = {args.format};
    const int modes = int(args.exact) + int(args.gaussian) + int(args.shot);
    if (modes > 1)
        throw ConfigError("--exact, --gaussian, and --shot are mutually exclusive");
    if (args.exact) cfg.readout.mode = ReadoutMode::Exact;
    if (args.gaussian) cfg.readout.mode = ReadoutMode::Gaussian;
    if (args.shot) cfg.readout.mode = ReadoutMode::Shot;
    if (cfg.readout.mode == ReadoutMode::Shot && cfg.readout.repetitions < 1)
        throw ConfigError("shot readout needs readout.repetitions >= 1");
    if (args.max_qubits_set) {
        if (args.max_qubits < 1 || args.max_qubits > 30)
            throw ConfigError("--max-qubits must lie in [1, 30]");
        cfg.max_qubits = args.max_qubits;
    }

    if (args.command == "evolve")
        cmd_evolve(cfg);
    else if (args.command == "correlate")
        cmd_correlate(cfg);
    else if (args.command == "flatness")
        cmd_flatness(cfg);
    else if (args.command == "resources")
        cmd_resources(cfg);
    else
        cmd_ensemble(cfg);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cole-Hopf statevector pipeline for Burgers-turbulence statistics"};
    app.require_subcommand(1);

    CliArgs args;
    const std::vector<std::pair<std::string, std::string>> commands{
        {"evolve", "heat-evolved Cole-Hopf snapshots"},
        {"correlate", "statevector correlator pipeline"},
        {"flatness", "flatness-vs-time curves, seed-median"},
        {"resources", "query/gate cost tables and crossover scan"},
        {"ensemble", "superposed-ensemble correlator pipeline"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        add_common_options(sub, args);
        sub->callback([&args, name = name] { args.command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints help or the parse message
        return code == 0 ? 0 : 2;      // bad usage is a configuration error
    }

    try {
        return run(args);
    } catch (const qburgers::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const qburgers::ResourceCeilingError& e) {
        std::cerr << "resource error: " << e.what() << '\n';
        return 3;
    } catch (const qburgers::NumericGuardError& e) {
        std::cerr << "numerical guard: " << e.what() << '\n';
        return 4;
    } catch (const qburgers::DomainError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
