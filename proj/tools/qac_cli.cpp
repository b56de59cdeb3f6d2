// qac: mean-field analysis of quantum annealing correction from the command line.
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "qac/cli.hpp"
#include "qac/presets.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Mean-field free energies, phase transitions, gaps and Hopfield solutions "
                 "for quantum annealing correction"};
    app.set_version_flag("--version", std::string(QAC_VERSION));

    std::string command, preset, out, format = "csv";
    std::string commands_help;
    for (const auto& c : qac::command_names()) commands_help += (commands_help.empty() ? "" : ", ") + c;
    std::string presets_help;
    for (const auto& p : qac::preset_names()) presets_help += (presets_help.empty() ? "" : ", ") + p;

    app.add_option("command", command, "One of: " + commands_help)->required();
    app.add_option("preset", preset, "Preset for `reproduce`: " + presets_help);
    app.add_option("--out", out, "Output data file (default <command>.<format>)");
    app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    // model and numerical parameters are passed through as strings and validated by qac::run
    const std::map<std::string, std::string> flags{
        {"p", "Interaction order"},
        {"K", "Number of code copies (odd)"},
        {"gamma", "Penalty strength"},
        {"Gamma", "Transverse field"},
        {"Gamma-grid", "Transverse-field grid lo:hi:n or list"},
        {"Gamma-lo", "Lower end of the transition search range"},
        {"Gamma-hi", "Upper end of the transition search range"},
        {"beta", "Inverse temperature (real or inf)"},
        {"J", "Energy scale"},
        {"a", "Hopfield pattern load"},
        {"l", "Largest number of condensed patterns"},
        {"N-list", "System sizes: list or lo..hi[:step]"},
        {"T-grid", "Temperature grid lo:hi:n or list"},
        {"gamma-grid", "Penalty-strength grid lo:hi:n or list"},
        {"p-list", "Interaction orders for the critical-gamma fit"},
        {"degree", "Polynomial degree of the Gamma_c(gamma) fit"},
        {"m0", "Saddle-point seed"},
        {"m-lo", "Landscape lower m"},
        {"m-hi", "Landscape upper m"},
        {"n-grid", "Landscape grid points"},
        {"n-scan", "Gamma scan points for first-order transitions"},
        {"seed-m", "Hopfield seed m"},
        {"seed-q", "Hopfield seed q"},
        {"seed-C", "Hopfield seed C (p=2)"},
        {"direction", "Sweep direction: up or down"},
        {"jump-threshold", "Jump detection threshold in m"},
        {"refine-tol", "Gap refinement tolerance in Gamma"},
        {"threads", "Worker threads for independent sweep points"},
        {"quad-nodes", "Gauss-Hermite nodes"},
        {"damping", "Fixed-point damping"},
        {"tol", "Fixed-point tolerance"},
        {"max-iter", "Fixed-point iteration limit"},
    };
    std::map<std::string, std::string> values;
    for (const auto& [name, help] : flags)
        app.add_option_function<std::string>(
            "--" + name, [&values, name = name](const std::string& v) { values[name] = v; }, help);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : qac::exit_code::usage;
    }

    qac::RunConfig cfg;
    cfg.command = command;
    cfg.params = values;
    if (!preset.empty()) {
        if (command != "reproduce") {
            std::cerr << "unexpected argument '" << preset << "'\n";
            return qac::exit_code::usage;
        }
        cfg.params["preset"] = preset;
    }
    cfg.output_path = out;
    cfg.format = format == "json" ? qac::OutputFormat::json : qac::OutputFormat::csv;
    return qac::run(cfg, std::cerr);
}
