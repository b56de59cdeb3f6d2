#include "qac/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <functional>
#include <ostream>
#include <set>

#include "qac/dicke.hpp"
#include "qac/ferro.hpp"
#include "qac/hopfield.hpp"
#include "qac/io.hpp"
#include "qac/parallel.hpp"
#include "qac/phase.hpp"
#include "qac/presets.hpp"

namespace qac {

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{
        "ferro-landscape", "ferro-solve",  "ferro-phase-diagram", "ferro-gammac-fit",
        "gap-scan",        "gap-fit",      "hopfield-solve",      "hopfield-sweep",
        "hopfield-finite-pattern", "reproduce"};
    return names;
}

namespace {

using nlohmann::json;

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        std::size_t pos = s.find(sep, start);
        out.push_back(s.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

int parse_int(const std::string& s) {
    int v = 0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size())
        throw InputError("not an integer: '" + s + "'");
    return v;
}

// "x,y,z" or "lo:hi:n" (n points, both ends included)
std::vector<double> parse_reals(const std::string& s) {
    if (s.empty()) return {};
    auto parts = split(s, ':');
    if (parts.size() == 3) {
        int n = parse_int(parts[2]);
        if (n < 0) throw InputError("grid point count must be >= 0 in '" + s + "'");
        return linspace(parse_double(parts[0]), parse_double(parts[1]), n);
    }
    if (parts.size() != 1) throw InputError("bad grid '" + s + "'; use lo:hi:n or a list");
    std::vector<double> out;
    for (const auto& x : split(s, ',')) out.push_back(parse_double(x));
    return out;
}

// "a,b,c" or "lo..hi" (step 10) or "lo..hi:step"
std::vector<int> parse_ints(const std::string& s) {
    std::size_t dots = s.find("..");
    if (dots == std::string::npos) {
        std::vector<int> out;
        for (const auto& x : split(s, ',')) out.push_back(parse_int(x));
        return out;
    }
    std::string rest = s.substr(dots + 2);
    int step = 10;
    if (auto colon = rest.find(':'); colon != std::string::npos) {
        step = parse_int(rest.substr(colon + 1));
        rest = rest.substr(0, colon);
    }
    int lo = parse_int(s.substr(0, dots)), hi = parse_int(rest);
    if (step <= 0 || hi < lo) throw InputError("bad integer range '" + s + "'");
    std::vector<int> out;
    for (int v = lo; v <= hi; v += step) out.push_back(v);
    return out;
}

class Reader {
public:
    Reader(const std::map<std::string, std::string>& p, json& meta) : p_(p), meta_(meta) {}

    bool has(const std::string& key) const { return p_.count(key) > 0; }

    std::string text(const std::string& key, const std::string& def) {
        auto v = raw(key);
        std::string s = v ? *v : def;
        record(key, s, !v);
        return s;
    }
    int integer(const std::string& key, int def) {
        auto v = raw(key);
        int x = v ? parse_int(*v) : def;
        record(key, x, !v);
        return x;
    }
    double real(const std::string& key, double def) {
        auto v = raw(key);
        double x = v ? parse_double(*v) : def;
        record(key, x, !v);
        return x;
    }
    Beta beta(const std::string& key) {
        auto v = raw(key);
        Beta b = v ? Beta::parse(*v) : Beta::infinite();
        record(key, b.str(), !v);
        return b;
    }
    std::vector<double> reals(const std::string& key, const std::string& def) {
        auto v = raw(key);
        std::vector<double> x = parse_reals(v ? *v : def);
        record(key, v ? *v : def, !v);
        return x;
    }
    std::vector<int> ints(const std::string& key, const std::string& def) {
        auto v = raw(key);
        std::vector<int> x = parse_ints(v ? *v : def);
        record(key, v ? *v : def, !v);
        return x;
    }
    void finish() const {
        for (const auto& [k, _] : p_)
            if (!used_.count(k)) throw InputError("option --" + k + " does not apply to this command");
    }

private:
    std::optional<std::string> raw(const std::string& key) {
        used_.insert(key);
        auto it = p_.find(key);
        if (it == p_.end()) return std::nullopt;
        return it->second;
    }
    template <class T>
    void record(const std::string& key, const T& value, bool defaulted) {
        meta_["parameters"][key] = value;
        if (defaulted) meta_["defaults_applied"].push_back(key);
    }

    const std::map<std::string, std::string>& p_;
    json& meta_;
    std::set<std::string> used_;
};

struct Context {
    Reader& in;
    json& meta;
    std::vector<std::pair<std::string, Table>> tables; // first one is the primary output
    int exit = exit_code::ok;
};

FixedPointConfig read_fixed_point(Reader& in) {
    FixedPointConfig cfg;
    cfg.damping = in.real("damping", cfg.damping);
    cfg.tol = in.real("tol", cfg.tol);
    cfg.max_iter = in.integer("max-iter", cfg.max_iter);
    cfg.validate();
    return cfg;
}

FerroParams read_ferro(Reader& in, int default_p) {
    FerroParams f;
    f.p = in.integer("p", default_p);
    f.K = in.integer("K", 3);
    f.gamma = in.real("gamma", 0.0);
    f.beta = in.beta("beta");
    f.J = in.real("J", 1.0);
    return f;
}

HopfieldParams read_hopfield(Reader& in) {
    HopfieldParams h;
    h.p = in.integer("p", 4);
    h.K = in.integer("K", 3);
    h.gamma = in.real("gamma", 0.0);
    h.a = in.real("a", 0.01);
    h.J = in.real("J", 1.0);
    return h;
}

std::vector<double> read_Gamma_values(Reader& in, const std::string& def_grid) {
    if (in.has("Gamma") && in.has("Gamma-grid"))
        throw InputError("give either --Gamma or --Gamma-grid, not both");
    if (in.has("Gamma")) return {in.real("Gamma", 0.0)};
    return in.reals("Gamma-grid", def_grid);
}

void cmd_ferro_landscape(Context& c) {
    FerroParams f = read_ferro(c.in, 4);
    f.Gamma = c.in.real("Gamma", 1.0);
    double lo = c.in.real("m-lo", 0.0), hi = c.in.real("m-hi", 1.0);
    int n = c.in.integer("n-grid", default_landscape_points);
    LandscapeSample s = scan_landscape(f, lo, hi, n);
    Table t{schema::landscape, {}}, mt{schema::minima, {}};
    for (std::size_t i = 0; i < s.m.size(); ++i) t.rows.push_back({s.m[i], s.F[i]});
    json mins = json::array();
    for (const auto& mn : s.minima) {
        mt.rows.push_back({mn.m, mn.F, static_cast<long long>(mn.is_global)});
        mins.push_back({{"m", mn.m}, {"F", mn.F}, {"is_global", mn.is_global}});
    }
    c.meta["results"]["minima"] = mins;
    c.tables.emplace_back("", std::move(t));
    c.tables.emplace_back("minima", std::move(mt));
}

void cmd_ferro_solve(Context& c, const FixedPointConfig& cfg) {
    FerroParams f = read_ferro(c.in, 2);
    auto Gs = read_Gamma_values(c.in, "0:3:31");
    double m0 = c.in.real("m0", 0.9);
    Table t{schema::solution, {}};
    for (double G : Gs) {
        FerroParams g = f.with_Gamma(G);
        g.validate();
        SaddleSolution s = solve_saddle(g, m0, cfg);
        double q = s.m * s.m, C = std::numeric_limits<double>::quiet_NaN();
        if (g.beta.is_infinite()) {
            double u = std::hypot(g.gamma + g.p * std::pow(s.m, g.p - 1), G);
            C = u > 0.0 ? G * G / (u * u * u) : 0.0;
        }
        t.rows.push_back({static_cast<long long>(g.p), static_cast<long long>(g.K), g.gamma, G,
                          g.beta.str(), s.m, q, C, std::string(to_string(s.branch)), s.residual});
    }
    c.tables.emplace_back("", std::move(t));
}

void phase_rows(Table& t, const std::vector<TransitionRecord>& recs) {
    for (const auto& r : recs)
        t.rows.push_back({r.T, r.gamma, static_cast<long long>(r.p), r.Gamma_c,
                          std::string(to_string(r.order)), r.m_left, r.m_right});
}

void cmd_ferro_phase_diagram(Context& c, int threads) {
    int p = c.in.integer("p", 2);
    double gamma = c.in.real("gamma", 0.0);
    PhaseScanOptions so;
    so.K = c.in.integer("K", 3);
    so.Gamma_lo = c.in.real("Gamma-lo", p == 2 ? 1e-3 : 0.05);
    so.Gamma_hi = c.in.real("Gamma-hi", p == 2 ? 1e3 : 4.0);
    so.n_scan = c.in.integer("n-scan", so.n_scan);
    auto Ts = c.in.reals("T-grid", p == 2 ? "0:1:21" : "0:0.1:21");
    std::sort(Ts.begin(), Ts.end());
    std::vector<PhaseDiagram> parts(Ts.size());
    parallel_for(static_cast<int>(Ts.size()), threads,
                 [&](int i) { parts[i] = phase_diagram(p, gamma, {Ts[i]}, so); });
    Table t{schema::phase_diagram, {}};
    json nf = json::array();
    for (const auto& pd : parts) {
        phase_rows(t, pd.points);
        for (double T : pd.not_found) nf.push_back(T);
    }
    c.meta["results"]["not_found_T"] = nf;
    c.meta["results"]["Gamma_resolution"] = parts.empty() ? 0.0 : parts[0].resolution;
    c.tables.emplace_back("", std::move(t));
}

void cmd_ferro_gammac_fit(Context& c, int threads) {
    if (c.in.has("p-list")) {
        auto ps = c.in.ints("p-list", "3,4,5,6,7,8");
        std::vector<double> gc(ps.size());
        parallel_for(static_cast<int>(ps.size()), threads,
                     [&](int i) { gc[i] = critical_gamma(ps[i]); });
        Table t{schema::critical_gamma, {}};
        std::vector<double> xs;
        for (std::size_t i = 0; i < ps.size(); ++i) {
            t.rows.push_back({static_cast<long long>(ps[i]), gc[i]});
            xs.push_back(ps[i]);
        }
        if (ps.size() >= 2) {
            FitResult lin = polyfit(xs, gc, 1);
            c.meta["results"]["linear_fit"] = {{"coefficients", lin.coefficients},
                                               {"residual_rms", lin.residual_rms}};
        }
        c.tables.emplace_back("", std::move(t));
        return;
    }
    int p = c.in.integer("p", 4);
    auto gammas = c.in.reals("gamma-grid", "0:0.7:8");
    int degree = c.in.integer("degree", 2);
    std::vector<TransitionRecord> recs(gammas.size());
    parallel_for(static_cast<int>(gammas.size()), threads,
                 [&](int i) { recs[i] = zero_temperature_first_order(p, gammas[i]); });
    std::vector<double> Gc;
    for (const auto& r : recs) Gc.push_back(r.Gamma_c);
    FitResult fit = polyfit(gammas, Gc, degree);
    c.meta["results"]["fit"] = {{"degree", degree},
                                {"coefficients", fit.coefficients},
                                {"residual_rms", fit.residual_rms}};
    if (gammas.size() >= 2) {
        FitResult lin = polyfit(gammas, Gc, 1);
        c.meta["results"]["linear_fit"] = {{"coefficients", lin.coefficients},
                                           {"residual_rms", lin.residual_rms}};
    }
    Table t{schema::phase_diagram, {}};
    phase_rows(t, recs);
    c.tables.emplace_back("", std::move(t));
}

GapGrid read_gap_grid(Reader& in) {
    auto parts = split(in.text("Gamma-grid", "0.5:3:0"), ':');
    if (parts.size() != 3) throw InputError("--Gamma-grid for gap commands must be lo:hi:n (n=0 auto)");
    GapGrid g;
    g.lo = parse_double(parts[0]);
    g.hi = parse_double(parts[1]);
    g.n = parse_int(parts[2]);
    return g;
}

void cmd_gap_scan(Context& c, int threads) {
    int p = c.in.integer("p", 4);
    double gamma = c.in.real("gamma", 0.0);
    auto Ns = c.in.ints("N-list", "100..200");
    GapGrid grid = read_gap_grid(c.in);
    double tol = c.in.real("refine-tol", default_gap_refine_tol);
    std::vector<GapMinimum> mins(Ns.size());
    parallel_for(static_cast<int>(Ns.size()), threads,
                 [&](int i) { mins[i] = min_gap(Ns[i], p, gamma, grid, tol); });
    Table t{schema::gap, {}};
    json flags = json::array();
    for (const auto& g : mins) {
        t.rows.push_back({static_cast<long long>(g.N), g.Gamma_min, g.Delta_min});
        flags.push_back({{"N", g.N}, {"at_grid_boundary", g.at_grid_boundary},
                         {"matrix_norm", g.matrix_norm}});
    }
    c.meta["results"]["points"] = flags;
    c.tables.emplace_back("", std::move(t));
}

void cmd_gap_fit(Context& c, int threads) {
    int p = c.in.integer("p", 4);
    std::vector<double> gammas = c.in.has("gamma-grid") ? c.in.reals("gamma-grid", "")
                                                        : std::vector<double>{c.in.real("gamma", 0.0)};
    auto Ns = c.in.ints("N-list", "100..200");
    GapGrid grid = read_gap_grid(c.in);
    double tol = c.in.real("refine-tol", default_gap_refine_tol);
    std::vector<GapScalingFit> fits(gammas.size());
    parallel_for(static_cast<int>(gammas.size()), threads,
                 [&](int i) { fits[i] = fit_gap_coefficient(p, gammas[i], Ns, grid, tol); });
    Table t{schema::gap_fit, {}};
    json per = json::array();
    for (std::size_t i = 0; i < gammas.size(); ++i) {
        t.rows.push_back({static_cast<long long>(p), gammas[i], fits[i].C, fits[i].fit_residual});
        json pts = json::array();
        for (const auto& g : fits[i].per_N)
            pts.push_back({{"N", g.N}, {"Gamma_min", g.Gamma_min}, {"Delta_min", g.Delta_min}});
        per.push_back({{"gamma", gammas[i]}, {"C", fits[i].C}, {"per_N", pts},
                       {"excluded_N", fits[i].excluded_N}});
    }
    c.meta["results"]["fits"] = per;
    c.tables.emplace_back("", std::move(t));
}

void solution_table_rows(Table& t, const HopfieldParams& h, double G, const RSolution& s) {
    double res = std::max({s.residuals[0], s.residuals[1], s.residuals[2]});
    t.rows.push_back({static_cast<long long>(h.p), static_cast<long long>(h.K), h.gamma, G,
                      std::string("inf"), s.m, s.q, s.C, std::string(to_string(s.branch)), res});
}

void cmd_hopfield_solve(Context& c, const FixedPointConfig& cfg, const QuadratureRule& rule) {
    HopfieldParams h = read_hopfield(c.in);
    auto Gs = read_Gamma_values(c.in, "1");
    RsState seed{c.in.real("seed-m", 1.0), c.in.real("seed-q", 1.0), c.in.real("seed-C", 0.0)};
    Table t{schema::solution, {}};
    json F = json::array();
    for (double G : Gs) {
        HopfieldParams g = h.with_Gamma(G);
        RSolution s = solve_rs(g, seed, rule, cfg);
        solution_table_rows(t, g, G, s);
        F.push_back(rs_free_energy(g, s.state(), rule));
    }
    c.meta["results"]["free_energy_per_copy"] = F;
    c.tables.emplace_back("", std::move(t));
}

void cmd_hopfield_sweep(Context& c, const FixedPointConfig& cfg, const QuadratureRule& rule) {
    HopfieldParams h = read_hopfield(c.in);
    std::string dir = c.in.text("direction", "up");
    if (dir != "up" && dir != "down") throw InputError("--direction must be up or down");
    auto grid = c.in.reals("Gamma-grid", h.p == 2 ? "0.025:10:400" : "0.0075:3:400");
    if (dir == "up")
        std::sort(grid.begin(), grid.end());
    else
        std::sort(grid.rbegin(), grid.rend());
    double thr = c.in.real("jump-threshold", default_jump_threshold);
    SweepTrace tr = sweep_gamma_axis(h, grid, dir == "up" ? SweepDirection::up : SweepDirection::down,
                                     rule, thr, cfg);
    Table t{schema::solution, {}};
    for (const auto& pt : tr.points) solution_table_rows(t, h, pt.Gamma, pt.sol);
    json jumps = json::array();
    for (const auto& j : tr.jumps)
        jumps.push_back({{"Gamma_before", j.Gamma_before}, {"Gamma_after", j.Gamma_after},
                         {"m_before", j.m_before}, {"m_after", j.m_after}});
    c.meta["results"]["jumps"] = jumps;
    c.tables.emplace_back("", std::move(t));
}

void cmd_hopfield_finite_pattern(Context& c) {
    HopfieldParams h;
    h.p = c.in.integer("p", 2);
    h.K = c.in.integer("K", 3);
    h.gamma = c.in.real("gamma", 1.0);
    h.J = c.in.real("J", 1.0);
    int lmax = c.in.integer("l", 3);
    auto Gs = read_Gamma_values(c.in, "0:3:50");
    Table t{schema::finite_pattern, {}};
    for (double G : Gs)
        for (int l = 1; l <= lmax; ++l) {
            Minimum1D mn = finite_pattern_minimum(h.with_Gamma(G), l);
            t.rows.push_back({G, static_cast<long long>(l), mn.x, mn.f});
        }
    c.tables.emplace_back("", std::move(t));
}

void cmd_reproduce(Context& c, const PresetOptions& po) {
    std::string name = c.in.text("preset", "");
    if (name.empty()) throw InputError("reproduce needs a preset name");
    PresetOutcome out = run_preset(name, po);
    Table t{{"criterion", "quantity", "value", "expected", "tol", "passed", "origin", "detail"}, {}};
    json arr = json::array();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const auto& a : out.assertions) {
        t.rows.push_back({static_cast<long long>(a.criterion), a.quantity, a.value,
                          a.expected.value_or(nan), a.tol.value_or(nan),
                          static_cast<long long>(a.passed), a.origin, a.detail});
        json j = {{"criterion", a.criterion}, {"quantity", a.quantity},
                  {"value", format_double(a.value)}, {"passed", a.passed},
                  {"origin", a.origin}, {"detail", a.detail}};
        if (a.expected) j["expected"] = *a.expected;
        if (a.tol) j["tol"] = *a.tol;
        arr.push_back(j);
    }
    c.meta["results"]["assertions"] = arr;
    c.meta["results"]["passed"] = out.passed();
    c.meta["results"]["extra"] = out.extra;
    c.tables.emplace_back("", std::move(t));
    for (auto& [n, tab] : out.tables) c.tables.emplace_back(n, std::move(tab));
    if (!out.passed()) c.exit = exit_code::failed_assertions;
}

std::string stem_of(const std::string& path) {
    for (const char* ext : {".csv", ".json"}) {
        std::string e(ext);
        if (path.size() > e.size() && path.compare(path.size() - e.size(), e.size(), e) == 0)
            return path.substr(0, path.size() - e.size());
    }
    return path;
}

void write_table(const Table& t, const std::string& path, OutputFormat fmt) {
    if (fmt == OutputFormat::csv)
        emit_csv(t, path);
    else
        write_json({{"columns", t.header}, {"rows", to_json(t)}}, path);
}

json error_record(const std::exception& e) {
    json j;
    if (auto q = dynamic_cast<const Error*>(&e)) {
        j["error"] = q->kind();
        if (auto nc = dynamic_cast<const NonConvergenceError*>(&e)) {
            j["last_iterate"] = nc->last;
            j["residual"] = nc->residual;
            j["iterations"] = nc->iterations;
        } else if (auto sp = dynamic_cast<const SpinodalError*>(&e)) {
            j["last_valid_Gamma"] = sp->last_valid_Gamma;
        } else if (auto pe = dynamic_cast<const PrecisionError*>(&e)) {
            j["N"] = pe->N;
        } else if (auto rb = dynamic_cast<const ReplicaBreakdownError*>(&e)) {
            j["C"] = rb->C;
        }
    } else {
        j["error"] = "internal";
    }
    j["message"] = e.what();
    return j;
}

int exit_for(const std::exception& e) {
    if (dynamic_cast<const InputError*>(&e)) return exit_code::usage;
    if (dynamic_cast<const IoError*>(&e)) return exit_code::io;
    return exit_code::non_convergence;
}

} // namespace

int run(const RunConfig& config, std::ostream& err) {
    const auto t0 = std::chrono::steady_clock::now();
    json meta;
    meta["command"] = config.command;
    meta["version"] = version_string();
    meta["parameters"] = json::object();
    meta["defaults_applied"] = json::array();
    meta["results"] = json::object();
    try {
        const auto& names = command_names();
        if (std::find(names.begin(), names.end(), config.command) == names.end())
            throw InputError("unknown command '" + config.command + "'");
        Reader in(config.params, meta);
        const int threads = in.integer("threads", 1);
        if (threads < 1) throw InputError("--threads must be >= 1");
        const int nodes = in.integer("quad-nodes", default_quad_nodes);
        const FixedPointConfig cfg = read_fixed_point(in);
        meta["tolerances"] = {{"root_tol", default_root_tol},
                              {"landscape_refine_tol", landscape_refine_tol},
                              {"degeneracy_tol", degeneracy_tol},
                              {"trust_window", trust_window},
                              {"stability_step", stability_step},
                              {"landscape_points", default_landscape_points}};

        Context c{in, meta, {}, exit_code::ok};
        const std::string& cmd = config.command;
        if (cmd == "ferro-landscape") cmd_ferro_landscape(c);
        else if (cmd == "ferro-solve") cmd_ferro_solve(c, cfg);
        else if (cmd == "ferro-phase-diagram") cmd_ferro_phase_diagram(c, threads);
        else if (cmd == "ferro-gammac-fit") cmd_ferro_gammac_fit(c, threads);
        else if (cmd == "gap-scan") cmd_gap_scan(c, threads);
        else if (cmd == "gap-fit") cmd_gap_fit(c, threads);
        else if (cmd == "hopfield-solve") cmd_hopfield_solve(c, cfg, gauss_hermite_rule(nodes));
        else if (cmd == "hopfield-sweep") cmd_hopfield_sweep(c, cfg, gauss_hermite_rule(nodes));
        else if (cmd == "hopfield-finite-pattern") cmd_hopfield_finite_pattern(c);
        else cmd_reproduce(c, PresetOptions{threads, nodes, cfg});
        in.finish();

        const std::string ext = config.format == OutputFormat::csv ? ".csv" : ".json";
        const std::string out = config.output_path.empty() ? cmd + ext : config.output_path;
        const std::string stem = stem_of(out);
        json files = json::array();
        for (const auto& [name, table] : c.tables) {
            std::string path = name.empty() ? out : stem + "_" + name + ext;
            write_table(table, path, config.format);
            files.push_back(path);
        }
        meta["files"] = files;
        meta["format"] = config.format == OutputFormat::csv ? "csv" : "json";
        meta["wall_time_s"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        write_json(meta, stem + ".meta.json");
        return c.exit;
    } catch (const std::exception& e) {
        err << error_record(e).dump() << "\n";
        return exit_for(e);
    }
}

} // namespace qac
