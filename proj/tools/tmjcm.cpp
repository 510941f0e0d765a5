// Command-line front end: run figure presets or config files, list presets,
// and run the self-check suites.

#include <charconv>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tmjcm/cli/config_file.hpp"
#include "tmjcm/cli/runner.hpp"
#include "tmjcm/cli/scenario.hpp"
#include "tmjcm/cli/verify.hpp"

namespace {

constexpr int exit_verify_failed = 1;
constexpr int exit_unknown_preset = 2;
constexpr int exit_output_dir = 3;
constexpr int exit_invalid_config = 4;

std::vector<double> parse_snapshot_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        double v = 0.0;
        const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
        if (res.ec != std::errc{} || res.ptr != item.data() + item.size())
            throw tmjcm::cli::ConfigError("snapshot", "cannot parse '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw tmjcm::cli::ConfigError("snapshot", "empty list");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace tmjcm::cli;
    CLI::App app{"Two-mode multiphoton Jaynes-Cummings simulator"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Compute a preset or config file and write CSV files");
    std::string preset;
    std::string config_path;
    std::string out_dir = "out";
    std::string snapshots;
    bool gnuplot = false;
    run->add_option("preset", preset, "Preset name (see `list`)");
    run->add_option("--config", config_path, "key = value run description");
    run->add_option("--out", out_dir, "Output directory")->capture_default_str();
    run->add_option("--snapshot", snapshots, "Comma-separated T values for phase distributions");
    run->add_flag("--gnuplot", gnuplot, "Also write plot.gp");

    auto* ver = app.add_subcommand("verify", "Run the oracle, Wigner-identity and invariant suites");
    std::vector<std::string> only;
    std::string profile = "default";
    ver->add_option("--only", only, "Restrict to suites: oracle, wigner, invariants");
    ver->add_option("--tol", profile, "Tolerance profile: default or strict")->capture_default_str();

    auto* list = app.add_subcommand("list", "List presets and the figure each reproduces");

    CLI11_PARSE(app, argc, argv);

    if (list->parsed()) {
        for (const auto& s : presets()) std::cout << s.name << "\t" << s.figure << "\n";
        return 0;
    }

    if (ver->parsed()) {
        VerifyOptions opt;
        try {
            opt.tol = tolerance_profile(profile);
            opt.only.insert(only.begin(), only.end());
            opt.log = &std::cout;
            const VerifyReport rep = verify(opt);
            if (const CheckResult* f = rep.first_failure()) {
                std::cerr << "verify failed: " << f->suite << ": " << f->name << " (" << f->detail << ")\n";
                return exit_verify_failed;
            }
            std::cout << rep.checks.size() << " checks passed\n";
            return 0;
        } catch (const std::invalid_argument& e) {
            std::cerr << e.what() << "\n";
            return exit_verify_failed;
        }
    }

    try {
        Scenario sc;
        if (!config_path.empty()) {
            if (!preset.empty()) throw ConfigError("preset", "give either a preset or --config, not both");
            sc = scenario_from_config(load_config(config_path));
        } else if (!preset.empty()) {
            sc = find_preset(preset);
        } else {
            std::cerr << "run: need a preset name or --config FILE\n";
            return exit_unknown_preset;
        }
        RunOptions opt;
        opt.out_dir = out_dir;
        opt.gnuplot = gnuplot;
        if (!snapshots.empty()) opt.snapshots = parse_snapshot_list(snapshots);
        const RunResult res = run_scenario(sc, opt);
        for (const auto& f : res.files) std::cout << f.line() << "\n";
        for (const auto& n : res.notes) std::cout << "note: " << n << "\n";
        return 0;
    } catch (const UnknownPreset& e) {
        std::cerr << e.what() << "\n";
        return exit_unknown_preset;
    } catch (const OutputDirError& e) {
        std::cerr << e.what() << "\n";
        return exit_output_dir;
    } catch (const ConfigError& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return exit_invalid_config;
    } catch (const std::domain_error& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return exit_invalid_config;
    } catch (const std::runtime_error& e) {
        std::cerr << e.what() << "\n";
        return exit_output_dir;
    }
}
