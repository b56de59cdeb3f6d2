#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qac/io.hpp"
#include "qac/numerics.hpp"

namespace qac {

struct Assertion {
    int criterion = 0; // acceptance item this check belongs to
    std::string quantity;
    double value = 0.0;
    std::optional<double> expected;
    std::optional<double> tol;
    bool passed = false;
    std::string origin; // "published" for literature values, "qualitative" for shape claims
    std::string detail;
};

struct PresetOptions {
    int threads = 1;
    int quad_nodes = default_quad_nodes;
    FixedPointConfig fixed_point{};
};

struct PresetOutcome {
    std::string name;
    std::vector<Assertion> assertions;
    std::vector<std::pair<std::string, Table>> tables;
    nlohmann::json extra = nlohmann::json::object();
    bool passed() const;
};

const std::vector<std::string>& preset_names();
PresetOutcome run_preset(const std::string& name, const PresetOptions& opts = {});

// 400-point sweep grids used by the Hopfield presets
std::vector<double> open_grid(double hi, int n); // hi/n, 2hi/n, ..., hi
std::vector<double> linspace(double lo, double hi, int n);

} // namespace qac
