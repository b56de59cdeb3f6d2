#pragma once

#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace qac {

using Cell = std::variant<double, long long, std::string>;

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;
};

namespace schema {
inline const std::vector<std::string> landscape{"m", "F"};
inline const std::vector<std::string> minima{"m", "F", "is_global"};
inline const std::vector<std::string> solution{"p", "K", "gamma", "Gamma", "beta",
                                               "m", "q", "C", "branch", "residual"};
inline const std::vector<std::string> phase_diagram{"T", "gamma", "p", "Gamma_c",
                                                    "order", "m_left", "m_right"};
inline const std::vector<std::string> gap{"N", "Gamma_min", "Delta_min"};
inline const std::vector<std::string> gap_fit{"p", "gamma", "C", "residual_rms"};
inline const std::vector<std::string> critical_gamma{"p", "gamma_c"};
inline const std::vector<std::string> finite_pattern{"Gamma", "l", "m", "F"};
} // namespace schema

// 12 significant digits, '.' decimal point regardless of locale.
std::string format_double(double v);
double parse_double(const std::string& s);

std::string to_csv(const Table& t);
void emit_csv(const Table& t, const std::string& path); // throws IoError
Table parse_csv(const std::string& text);                // all cells as strings

nlohmann::json to_json(const Table& t); // array of objects keyed by header
void write_json(const nlohmann::json& j, const std::string& path);

std::string version_string();

} // namespace qac
