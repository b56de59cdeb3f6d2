#include "qac/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "qac/errors.hpp"

#ifndef QAC_VERSION
#define QAC_VERSION "0.1.0"
#endif

namespace qac {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
    return std::string(buf, r.ptr);
}

double parse_double(const std::string& s) {
    if (s == "nan") return std::nan("");
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    const char* end = s.data() + s.size();
    const char* begin = s.data();
    if (begin != end && *begin == '+') ++begin;
    auto r = std::from_chars(begin, end, v);
    if (r.ec != std::errc() || r.ptr != end) throw InputError("not a number: '" + s + "'");
    return v;
}

namespace {

std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string cell_text(const Cell& c) {
    if (auto d = std::get_if<double>(&c)) return format_double(*d);
    if (auto i = std::get_if<long long>(&c)) return std::to_string(*i);
    return quote(std::get<std::string>(c));
}

} // namespace

std::string to_csv(const Table& t) {
    std::string out;
    for (std::size_t i = 0; i < t.header.size(); ++i) {
        if (i) out += ',';
        out += quote(t.header[i]);
    }
    out += "\r\n";
    for (const auto& row : t.rows) {
        if (row.size() != t.header.size()) throw InputError("row width does not match the schema");
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += cell_text(row[i]);
        }
        out += "\r\n";
    }
    return out;
}

void emit_csv(const Table& t, const std::string& path) {
    std::string text = to_csv(t);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << text;
    if (!f) throw IoError("write failed for '" + path + "'");
}

Table parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> rec;
    std::string field;
    bool in_quotes = false, field_started = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"') {
            in_quotes = true;
            field_started = true;
        } else if (c == ',') {
            rec.push_back(field);
            field.clear();
            field_started = true;
        } else if (c == '\r' || c == '\n') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            rec.push_back(field);
            records.push_back(rec);
            rec.clear();
            field.clear();
            field_started = false;
        } else {
            field += c;
            field_started = true;
        }
    }
    if (in_quotes) throw InputError("unterminated quoted CSV field");
    if (field_started || !rec.empty()) {
        rec.push_back(field);
        records.push_back(rec);
    }
    Table t;
    if (records.empty()) return t;
    t.header = records.front();
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != t.header.size()) throw InputError("ragged CSV row");
        std::vector<Cell> row(records[r].begin(), records[r].end());
        t.rows.push_back(std::move(row));
    }
    return t;
}

nlohmann::json to_json(const Table& t) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& row : t.rows) {
        nlohmann::json obj = nlohmann::json::object();
        for (std::size_t i = 0; i < t.header.size(); ++i) {
            const Cell& c = row[i];
            if (auto d = std::get_if<double>(&c)) {
                if (std::isfinite(*d))
                    obj[t.header[i]] = *d;
                else
                    obj[t.header[i]] = format_double(*d);
            } else if (auto n = std::get_if<long long>(&c)) {
                obj[t.header[i]] = *n;
            } else {
                obj[t.header[i]] = std::get<std::string>(c);
            }
        }
        arr.push_back(std::move(obj));
    }
    return arr;
}

void write_json(const nlohmann::json& j, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << j.dump(2) << "\n";
    if (!f) throw IoError("write failed for '" + path + "'");
}

std::string version_string() { return QAC_VERSION; }

} // namespace qac
