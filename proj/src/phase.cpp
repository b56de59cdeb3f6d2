#include "qac/phase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qac {

const char* to_string(TransitionOrder o) { return o == TransitionOrder::first ? "first" : "second"; }

namespace {

constexpr double track_tol = 1e-10;
constexpr double min_separation = 1e-3;

FerroParams zero_temperature(int p, double gamma) {
    FerroParams params;
    params.p = p;
    params.K = 1;
    params.gamma = gamma;
    params.beta = Beta::infinite();
    return params;
}

} // namespace

std::optional<TrackedMinimum> track_minimum(const FerroParams& params, double seed,
                                            double window) {
    const bool lo_domain = seed - window <= 0.0;
    const bool hi_domain = seed + window >= 1.0;
    const double lo = lo_domain ? 0.0 : seed - window;
    const double hi = hi_domain ? 1.0 : seed + window;
    auto f = [&](double x) { return free_energy_uniform(params, x); };
    auto refine = [&](double a, double b) {
        Minimum1D r = golden_section_minimize(f, std::min(a, b), std::max(a, b), track_tol);
        return TrackedMinimum{r.x, r.f};
    };

    const double step = 1e-4;
    double x0 = std::clamp(seed, lo, hi);
    double f0 = f(x0);
    double xr = std::min(x0 + step, hi), xl = std::max(x0 - step, lo);
    double fr = xr > x0 ? f(xr) : std::numeric_limits<double>::infinity();
    double fl = xl < x0 ? f(xl) : std::numeric_limits<double>::infinity();
    if (fr >= f0 && fl >= f0) return refine(xl, xr);

    const int dir = fr < fl ? 1 : -1;
    const double edge = dir > 0 ? hi : lo;
    const bool edge_is_domain = dir > 0 ? hi_domain : lo_domain;
    double a = x0, b = dir > 0 ? xr : xl, fb = dir > 0 ? fr : fl;
    for (;;) {
        if (b == edge) {
            if (edge_is_domain) return refine(a, b);
            return std::nullopt;
        }
        double c = b + 1.618034 * (b - a);
        c = dir > 0 ? std::min(c, edge) : std::max(c, edge);
        double fc = f(c);
        if (fc >= fb) return refine(a, c);
        a = b;
        b = c;
        fb = fc;
    }
}

double stability_slope(const FerroParams& params) {
    const double h = stability_step;
    if (params.beta.is_infinite()) {
        double r0 = saddle_rhs(params, 0.0);
        if (std::fabs(r0) > 1e-12)
            throw NotFoundError("m = 0 is not a stationary point at beta = inf for gamma > 0");
        return (saddle_rhs(params, h) - r0) / h;
    }
    return (saddle_rhs(params, h) - saddle_rhs(params, -h)) / (2.0 * h);
}

TransitionRecord second_order_gamma_c(const FerroParams& base, double G_lo, double G_hi,
                                      double tol) {
    base.validate();
    if (base.p != 2) throw InputError("second-order locator applies to p = 2");
    if (!(G_lo > 0.0 && G_lo < G_hi)) throw InputError("invalid Gamma bracket");
    auto f = [&](double G) { return stability_slope(base.with_Gamma(G)) - 1.0; };
    double Gc;
    try {
        Gc = find_root_bracketed(f, G_lo, G_hi, tol);
    } catch (const BracketError&) {
        throw NotFoundError("no stability change of m = 0 in [" + std::to_string(G_lo) + ", " +
                            std::to_string(G_hi) + "]");
    }
    return {Gc, TransitionOrder::second, base.beta.temperature(), base.gamma, base.p, 0.0, 0.0};
}

TransitionRecord first_order_gamma_c(const FerroParams& base, MinimaPair seeds, double G_lo,
                                     double G_hi, int n_steps) {
    base.validate();
    if (!(G_lo >= 0.0 && G_lo < G_hi)) throw InputError("invalid Gamma bracket");
    if (n_steps < 1) throw InputError("n_steps must be positive");

    struct State {
        TrackedMinimum left, right;
    };
    auto track_both = [&](double G, double seed_l, double seed_r, double last_valid) {
        FerroParams params = base.with_Gamma(G);
        auto l = track_minimum(params, seed_l);
        auto r = track_minimum(params, seed_r);
        if (!l || !r)
            throw SpinodalError("tracked minimum vanished at Gamma = " + std::to_string(G),
                                last_valid);
        if (std::fabs(l->m - r->m) < min_separation)
            throw SpinodalError("tracked minima merged at Gamma = " + std::to_string(G),
                                last_valid);
        return State{*l, *r};
    };

    const double h = (G_hi - G_lo) / n_steps;
    double G_prev = G_hi;
    State prev = track_both(G_hi, seeds.m_left, seeds.m_right, G_hi);
    double d_prev = prev.left.F - prev.right.F;
    auto make_record = [&](double Gc, const State& s) {
        return TransitionRecord{Gc,
                                TransitionOrder::first,
                                base.beta.temperature(),
                                base.gamma,
                                base.p,
                                std::min(s.left.m, s.right.m),
                                std::max(s.left.m, s.right.m)};
    };
    if (d_prev == 0.0) return make_record(G_hi, prev);

    for (int i = 1; i <= n_steps; ++i) {
        double G = i == n_steps ? G_lo : G_hi - i * h;
        State cur = track_both(G, prev.left.m, prev.right.m, G_prev);
        double d = cur.left.F - cur.right.F;
        if (d == 0.0) return make_record(G, cur);
        if ((d > 0.0) != (d_prev > 0.0)) {
            const State anchor = prev;
            const double G_anchor = G_prev;
            auto delta = [&](double g) {
                State s = track_both(g, anchor.left.m, anchor.right.m, G_anchor);
                return s.left.F - s.right.F;
            };
            double Gc = find_root_bracketed(delta, G, G_prev, 1e-13);
            State at = track_both(Gc, anchor.left.m, anchor.right.m, G_anchor);
            double dF = std::fabs(at.left.F - at.right.F);
            if (dF > 1e-8 * base.J)
                throw NonConvergenceError("free-energy crossing not resolved", {Gc}, dF, 0);
            return make_record(Gc, at);
        }
        prev = cur;
        d_prev = d;
        G_prev = G;
    }
    throw NotFoundError("no free-energy crossing in [" + std::to_string(G_lo) + ", " +
                        std::to_string(G_hi) + "]");
}

std::vector<TransitionRecord> find_first_order_transitions(const FerroParams& base,
                                                           double G_lo, double G_hi,
                                                           int n_scan) {
    base.validate();
    if (!(G_lo >= 0.0 && G_lo < G_hi)) throw InputError("invalid Gamma bracket");
    if (n_scan < 2) throw InputError("n_scan must be at least 2");

    struct Branch {
        double m, F;
    };
    std::vector<TransitionRecord> out;
    std::vector<Branch> prev;
    double G_prev = G_hi;
    const double h = (G_hi - G_lo) / n_scan;
    for (int i = 0; i <= n_scan; ++i) {
        const double G = i == n_scan ? G_lo : G_hi - i * h;
        LandscapeSample land = scan_landscape(base.with_Gamma(G));
        std::vector<Branch> cur;
        for (const auto& mn : land.minima) cur.push_back({mn.m, mn.F});

        // link each current minimum to the nearest previous one inside the trust window
        std::vector<int> link(cur.size(), -1);
        std::vector<bool> used(prev.size(), false);
        for (std::size_t a = 0; a < cur.size(); ++a) {
            double best = trust_window;
            for (std::size_t b = 0; b < prev.size(); ++b) {
                double dist = std::fabs(cur[a].m - prev[b].m);
                if (!used[b] && dist <= best) {
                    best = dist;
                    link[a] = static_cast<int>(b);
                }
            }
            if (link[a] >= 0) used[link[a]] = true;
        }

        for (std::size_t a = 0; a < cur.size(); ++a) {
            for (std::size_t b = a + 1; b < cur.size(); ++b) {
                if (link[a] < 0 || link[b] < 0) continue;
                const Branch& pa = prev[link[a]];
                const Branch& pb = prev[link[b]];
                double d_prev = pa.F - pb.F, d_cur = cur[a].F - cur[b].F;
                if (d_prev == 0.0 || (d_prev > 0.0) == (d_cur > 0.0)) continue;
                TransitionRecord rec;
                try {
                    rec = first_order_gamma_c(base, {pa.m, pb.m}, G, G_prev, 16);
                } catch (const SpinodalError&) {
                    continue;
                } catch (const NotFoundError&) {
                    continue;
                }
                // keep only crossings of the global minimum
                LandscapeSample at = scan_landscape(base.with_Gamma(rec.Gamma_c));
                double fmin = std::numeric_limits<double>::infinity();
                for (const auto& mn : at.minima) fmin = std::min(fmin, mn.F);
                double f_pair = free_energy_uniform(base.with_Gamma(rec.Gamma_c), rec.m_left);
                if (f_pair <= fmin + degeneracy_tol * base.J &&
                    rec.m_right - rec.m_left > min_separation)
                    out.push_back(rec);
            }
        }
        prev = std::move(cur);
        G_prev = G;
    }
    std::sort(out.begin(), out.end(),
              [](const auto& x, const auto& y) { return x.Gamma_c < y.Gamma_c; });
    return out;
}

double stationary_field(int p, double gamma, double m) {
    return (gamma + p * std::pow(m, p - 1)) * std::sqrt(1.0 - m * m) / m;
}

std::optional<CoexistenceWindow> coexistence_window(int p, double gamma) {
    if (p < 3) return std::nullopt;
    const int n = 20000;
    std::vector<double> G(n + 1);
    for (int j = 1; j < n; ++j) G[j] = stationary_field(p, gamma, double(j) / n);
    auto refine = [&](int j, double sign) {
        auto f = [&](double m) { return sign * stationary_field(p, gamma, m); };
        return golden_section_minimize(f, double(j - 1) / n, double(j + 1) / n, 1e-13).x;
    };
    int j_min = -1, j_max = -1;
    for (int j = 2; j < n - 1; ++j) {
        if (gamma > 0.0 && j_min < 0 && G[j] < G[j - 1] && G[j] <= G[j + 1]) j_min = j;
        if ((gamma == 0.0 || j_min >= 0) && G[j] > G[j - 1] && G[j] >= G[j + 1]) {
            j_max = j;
            break;
        }
    }
    if (j_max < 0) return std::nullopt;
    CoexistenceWindow w{};
    w.m_b = refine(j_max, -1.0);
    w.Gamma_hi = stationary_field(p, gamma, w.m_b);
    if (gamma == 0.0) {
        w.m_a = 0.0;
        w.Gamma_lo = 0.0;
    } else {
        w.m_a = refine(j_min, 1.0);
        w.Gamma_lo = stationary_field(p, gamma, w.m_a);
    }
    if (!(w.Gamma_hi > w.Gamma_lo)) return std::nullopt;
    return w;
}

TransitionRecord zero_temperature_first_order(int p, double gamma) {
    auto w = coexistence_window(p, gamma);
    if (!w || w->m_b - w->m_a < min_separation)
        throw NotFoundError("no coexistence of two minima at gamma = " + std::to_string(gamma));
    const double width = w->Gamma_hi - w->Gamma_lo;
    const double G_top = w->Gamma_hi - 1e-4 * width;
    const double G_bot = w->Gamma_lo + 1e-4 * width;
    auto on_curve = [&](double a, double b) {
        return find_root_bracketed(
            [&](double m) { return stationary_field(p, gamma, m) - G_top; }, a, b, 1e-13);
    };
    double small = gamma == 0.0 ? 0.0 : on_curve(1e-12, w->m_a);
    double large = on_curve(w->m_b, 1.0 - 1e-15);
    return first_order_gamma_c(zero_temperature(p, gamma), {small, large}, G_bot, G_top, 400);
}

double critical_gamma(int p, double tol) {
    if (p < 3) throw InputError("critical gamma is defined for p >= 3");
    auto has_transition = [&](double gamma) {
        try {
            TransitionRecord r = zero_temperature_first_order(p, gamma);
            return r.m_right - r.m_left > min_separation;
        } catch (const NotFoundError&) {
            return false;
        } catch (const SpinodalError&) {
            return false;
        }
    };
    if (!has_transition(0.0)) throw NotFoundError("no first-order transition at gamma = 0");
    double lo = 0.0, hi = 0.5;
    while (has_transition(hi)) {
        lo = hi;
        hi += 0.5;
        if (hi > 100.0) throw NotFoundError("first-order transition persists beyond gamma = 100");
    }
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        (has_transition(mid) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

FitResult gamma_c_fit(int p, const std::vector<double>& gamma_grid, int degree) {
    if (static_cast<int>(gamma_grid.size()) < degree + 1)
        throw InputError("gamma grid too short for a degree-" + std::to_string(degree) + " fit");
    std::vector<double> Gc;
    for (double g : gamma_grid) Gc.push_back(zero_temperature_first_order(p, g).Gamma_c);
    return polyfit(gamma_grid, Gc, degree);
}

PhaseDiagram phase_diagram(int p, double gamma, const std::vector<double>& T_grid,
                           const PhaseScanOptions& opts) {
    std::vector<double> Ts = T_grid;
    for (double T : Ts)
        if (!(T >= 0.0) || !std::isfinite(T)) throw InputError("temperatures must be >= 0");
    std::sort(Ts.begin(), Ts.end());
    const double G_lo = opts.Gamma_lo >= 0.0 ? opts.Gamma_lo : (p == 2 ? 1e-3 : 0.05);
    const double G_hi = opts.Gamma_hi >= 0.0 ? opts.Gamma_hi : (p == 2 ? 1e3 : 4.0);

    PhaseDiagram out;
    out.axis = "T";
    out.resolution = p == 2 ? 1e-12 : (G_hi - G_lo) / opts.n_scan;
    for (double T : Ts) {
        FerroParams params;
        params.p = p;
        params.K = opts.K;
        params.gamma = gamma;
        params.beta = Beta::from_temperature(T);
        params.validate();
        if (p == 2) {
            try {
                out.points.push_back(second_order_gamma_c(params, G_lo, G_hi));
            } catch (const NotFoundError&) {
                out.not_found.push_back(T);
            }
        } else {
            auto recs = find_first_order_transitions(params, G_lo, G_hi, opts.n_scan);
            if (recs.empty()) out.not_found.push_back(T);
            out.points.insert(out.points.end(), recs.begin(), recs.end());
        }
    }
    return out;
}

} // namespace qac
