#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace qac {

enum class OutputFormat { csv, json };

struct RunConfig {
    std::string command;
    std::map<std::string, std::string> params; // flag name without dashes -> value
    std::string output_path;                    // empty: <command>.<format>
    OutputFormat format = OutputFormat::csv;
};

namespace exit_code {
constexpr int ok = 0;
constexpr int failed_assertions = 1;
constexpr int usage = 2;
constexpr int non_convergence = 3;
constexpr int io = 4;
} // namespace exit_code

const std::vector<std::string>& command_names();

// Runs one command, writes its data file(s) and a <output>.meta.json sidecar.
// Errors are reported as a one-line JSON record on `err`.
int run(const RunConfig& config, std::ostream& err);

} // namespace qac
