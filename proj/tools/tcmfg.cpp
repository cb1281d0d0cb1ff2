#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "tcmfg/config.hpp"
#include "tcmfg/error.hpp"
#include "tcmfg/parallel.hpp"
#include "tcmfg/runner.hpp"
#include "tcmfg/scenario.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Time-change mean field game solver and verification suites"};
    app.require_subcommand(1);

    CLI::App* run = app.add_subcommand("run", "Run a scenario file");
    std::string path;
    std::string out_dir;
    std::string mode;
    std::string format = "csv";
    bool force = false;
    std::optional<std::uint64_t> seed;
    run->add_option("file", path, "Scenario configuration")->required();
    run->add_option("--out", out_dir, "Output directory for CSV and binary artifacts");
    run->add_option("--mode", mode, "Override the run mode")->check(CLI::IsMember({"mfg", "hjb", "fp", "dual"}));
    run->add_flag("--force", force, "Run despite validation errors");
    run->add_option("--seed", seed, "Override the scenario seed");
    run->add_option("--format", format, "Report format on stdout")->check(CLI::IsMember({"csv", "human"}));

    CLI::App* checks = app.add_subcommand("checks", "List the verification suites");

    CLI11_PARSE(app, argc, argv);

    if (checks->parsed()) {
        for (const auto& name : tcmfg::known_checks()) std::cout << name << '\n';
        return 0;
    }

    tcmfg::Scenario scenario;
    try {
        scenario = tcmfg::scenario_from_config(tcmfg::Config::load(path));
    } catch (const tcmfg::ParseError& e) {
        std::cerr << path;
        if (e.line() > 0) std::cerr << ':' << e.line() << ':' << e.column();
        std::cerr << ": parse error: " << e.what() << '\n';
        return tcmfg::exit_validation;
    } catch (const tcmfg::Error& e) {
        std::cerr << path << ": " << e.what() << '\n';
        return tcmfg::exit_validation;
    }

    tcmfg::RunOptions options;
    options.out_dir = out_dir;
    options.force = force;
    options.seed = seed;
    if (!mode.empty()) options.mode = tcmfg::parse_mode(mode);

    try {
        const tcmfg::RunResult result = tcmfg::run_scenario(scenario, options, std::cerr);
        if (result.exit_code == tcmfg::exit_validation) {
            std::cerr << "validation failed; rerun with --force to proceed anyway\n";
            return result.exit_code;
        }
        tcmfg::emit_report(std::cout, result.report,
                           format == "human" ? tcmfg::ReportFormat::human : tcmfg::ReportFormat::csv);
        return result.exit_code;
    } catch (const tcmfg::Error& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return tcmfg::exit_divergence;
    }
}
