#include "qac/hopfield.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qac {

void HopfieldParams::validate() const {
    if (p < 2) throw InputError("p must be >= 2");
    if (K < 1 || K % 2 == 0) throw InputError("K must be a positive odd integer");
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw InputError("gamma must be >= 0");
    if (!(Gamma >= 0.0) || !std::isfinite(Gamma)) throw InputError("Gamma must be >= 0");
    if (!(a >= 0.0) || !std::isfinite(a)) throw InputError("load a must be >= 0");
    if (!(J > 0.0) || !std::isfinite(J)) throw InputError("J must be positive");
}

FerroParams HopfieldParams::ferro() const {
    FerroParams f;
    f.p = p;
    f.K = K;
    f.gamma = gamma;
    f.Gamma = Gamma;
    f.beta = Beta::infinite();
    f.J = J;
    return f;
}

double finite_pattern_free_energy(const HopfieldParams& params, int l, double m) {
    params.validate();
    if (l < 1 || l > 10) throw InputError("pattern count l must lie in [1, 10]");
    const int p = params.p;
    const double h = p * std::pow(m, p - 1);
    double avg = 0.0;
    const unsigned n = 1u << l;
    for (unsigned bits = 0; bits < n; ++bits) {
        int s = l - 2 * __builtin_popcount(bits); // sum of xi over the l patterns
        double x = h * s;
        avg += std::max(std::hypot(params.gamma + x, params.Gamma),
                        std::hypot(params.gamma - x, params.Gamma));
    }
    avg /= n;
    return params.J * params.K * ((p - 1) * l * std::pow(m, p) - avg);
}

Minimum1D finite_pattern_minimum(const HopfieldParams& params, int l) {
    const int n = 2001;
    int jbest = 0;
    double fbest = finite_pattern_free_energy(params, l, 0.0);
    for (int j = 1; j < n; ++j) {
        double f = finite_pattern_free_energy(params, l, double(j) / (n - 1));
        if (f < fbest) {
            fbest = f;
            jbest = j;
        }
    }
    double a = double(std::max(jbest - 1, 0)) / (n - 1);
    double b = double(std::min(jbest + 1, n - 1)) / (n - 1);
    return golden_section_minimize(
        [&](double m) { return finite_pattern_free_energy(params, l, m); }, a, b, 1e-10);
}

namespace {

// E[g/u], E[g^2/u^2], E[Gamma^2/u^3] for g = mean + sigma z, u = sqrt(g^2 + Gamma^2)
RsState gaussian_moments(double mean, double sigma, double Gamma, const QuadratureRule& rule) {
    const double G2 = Gamma * Gamma;
    auto r = gauss_integrate_n<3>(
        [&](double z) {
            double g = mean + sigma * z;
            double u = std::sqrt(g * g + G2);
            if (u == 0.0) return std::array<double, 3>{0.0, 0.0, 0.0};
            return std::array<double, 3>{g / u, g * g / (u * u), G2 / (u * u * u)};
        },
        rule);
    return {r[0], r[1], r[2]};
}

double mean_u(double mean, double sigma, double Gamma, const QuadratureRule& rule) {
    return gauss_integrate([&](double z) { return std::hypot(mean + sigma * z, Gamma); }, rule);
}

} // namespace

RsState rs_consistency_p_ge_3(const HopfieldParams& params, double m, double q,
                              const QuadratureRule& rule) {
    if (params.p < 3) throw InputError("this map is for p >= 3");
    const int p = params.p;
    q = std::max(q, 0.0);
    const double mean = p * std::pow(m, p - 1) + params.gamma;
    const double sigma = std::sqrt(params.a * p * std::pow(q, p - 1));
    return gaussian_moments(mean, sigma, params.Gamma, rule);
}

RsState rs_consistency_p2(const HopfieldParams& params, const RsState& s,
                          const QuadratureRule& rule) {
    if (params.p != 2) throw InputError("this map is for p = 2");
    const double one_minus = 1.0 - 2.0 * s.C;
    if (!(one_minus > 0.0))
        throw ReplicaBreakdownError("replica-symmetric solution requires 2C < 1", s.C);
    const double q = std::max(s.q, 0.0);
    const double qt = q / (one_minus * one_minus);
    const double mean = 2.0 * s.m + params.gamma;
    const double sigma = 2.0 * std::sqrt(params.a * qt);
    return gaussian_moments(mean, sigma, params.Gamma, rule);
}

RsState rs_map(const HopfieldParams& params, const RsState& s, const QuadratureRule& rule) {
    return params.p == 2 ? rs_consistency_p2(params, s, rule)
                         : rs_consistency_p_ge_3(params, s.m, s.q, rule);
}

double rs_free_energy(const HopfieldParams& params, const RsState& s,
                      const QuadratureRule& rule) {
    params.validate();
    const int p = params.p;
    const double q = std::max(s.q, 0.0);
    double f;
    if (p == 2) {
        const double one_minus = 1.0 - 2.0 * s.C;
        if (!(one_minus > 0.0))
            throw ReplicaBreakdownError("replica-symmetric solution requires 2C < 1", s.C);
        const double sigma = 2.0 * std::sqrt(params.a * q) / one_minus;
        f = s.m * s.m + params.a * (-1.0 + 2.0 * q * s.C / (one_minus * one_minus)) -
            mean_u(2.0 * s.m + params.gamma, sigma, params.Gamma, rule);
    } else {
        const double sigma = std::sqrt(params.a * p * std::pow(q, p - 1));
        f = (p - 1) * std::pow(s.m, p) + 0.5 * params.a * p * (p - 1) * s.C * std::pow(q, p - 1) -
            mean_u(p * std::pow(s.m, p - 1) + params.gamma, sigma, params.Gamma, rule);
    }
    return params.J * f;
}

namespace {

RSolution solve_rs_once(const HopfieldParams& params, const RsState& seed,
                        const QuadratureRule& rule, const FixedPointConfig& cfg) {
    RSolution out;
    if (params.p == 2) {
        auto map = [&](const std::vector<double>& x) {
            RsState r = rs_consistency_p2(params, {x[0], x[1], x[2]}, rule);
            return std::vector<double>{r.m, r.q, r.C};
        };
        FixedPointResult r = fixed_point(map, {seed.m, seed.q, seed.C}, cfg);
        out.m = r.x[0];
        out.q = r.x[1];
        out.C = r.x[2];
        out.iterations = r.iterations;
    } else {
        auto map = [&](const std::vector<double>& x) {
            RsState r = rs_consistency_p_ge_3(params, x[0], x[1], rule);
            return std::vector<double>{r.m, r.q};
        };
        FixedPointResult r = fixed_point(map, {seed.m, seed.q}, cfg);
        out.m = r.x[0];
        out.q = r.x[1];
        out.C = rs_consistency_p_ge_3(params, out.m, out.q, rule).C;
        out.iterations = r.iterations;
    }
    return out;
}

} // namespace

RSolution solve_rs(const HopfieldParams& params, const RsState& seed, const QuadratureRule& rule,
                   const FixedPointConfig& cfg) {
    params.validate();
    cfg.validate();
    if (!(seed.m >= 0.0 && seed.m <= 1.0 && seed.q >= 0.0 && seed.q <= 1.0))
        throw InputError("RS seeds must lie in [0, 1]");
    // The p = 2 map has eigenvalues well below -1 on the m = 0, q > 0 branch, so a failed
    // attempt is repeated with smaller damping before giving up.
    FixedPointConfig c = cfg;
    RSolution out;
    for (int attempt = 0;; ++attempt) {
        try {
            out = solve_rs_once(params, seed, rule, c);
            break;
        } catch (const Error& e) {
            bool retry = dynamic_cast<const NonConvergenceError*>(&e) ||
                         dynamic_cast<const DivergenceError*>(&e) ||
                         dynamic_cast<const ReplicaBreakdownError*>(&e);
            if (!retry || attempt == max_damping_retries) throw;
            c.damping *= 0.25;
            c.max_iter *= 2;
        }
    }
    RsState next = rs_map(params, out.state(), rule);
    out.residuals = {std::fabs(next.m - out.m), std::fabs(next.q - out.q),
                     std::fabs(next.C - out.C)};
    out.branch = std::fabs(out.m) < 1e-6 ? Branch::symmetric : Branch::broken;
    return out;
}

RsCrossing rs_branch_crossing(const HopfieldParams& params, const RsState& seed_first,
                              const RsState& seed_second, double G_lo, double G_hi,
                              const QuadratureRule& rule, const FixedPointConfig& cfg) {
    auto branches = [&](double G) {
        HopfieldParams h = params.with_Gamma(G);
        RSolution a = solve_rs(h, seed_first, rule, cfg);
        RSolution b = solve_rs(h, seed_second, rule, cfg);
        if (std::fabs(a.m - b.m) < 1e-3)
            throw SpinodalError("RS branches coincide at Gamma = " + std::to_string(G), G);
        return std::pair{a, b};
    };
    auto delta = [&](double G) {
        auto [a, b] = branches(G);
        HopfieldParams h = params.with_Gamma(G);
        return rs_free_energy(h, a.state(), rule) - rs_free_energy(h, b.state(), rule);
    };
    double Gc;
    try {
        Gc = find_root_bracketed(delta, G_lo, G_hi, 1e-10);
    } catch (const BracketError&) {
        throw NotFoundError("RS branches do not cross in the bracket");
    }
    auto [a, b] = branches(Gc);
    return {Gc, a, b};
}

SweepTrace sweep_gamma_axis(const HopfieldParams& params, const std::vector<double>& Gamma_grid,
                            SweepDirection direction, const QuadratureRule& rule,
                            double jump_threshold, const FixedPointConfig& cfg,
                            const RsState* seed) {
    for (std::size_t i = 1; i < Gamma_grid.size(); ++i) {
        bool ok = direction == SweepDirection::up ? Gamma_grid[i] > Gamma_grid[i - 1]
                                                  : Gamma_grid[i] < Gamma_grid[i - 1];
        if (!ok) throw InputError("Gamma grid is not monotone in the sweep direction");
    }
    SweepTrace trace;
    RsState s = seed ? *seed
                     : (direction == SweepDirection::up ? RsState{1.0, 1.0, 0.0}
                                                        : RsState{0.0, 0.0, 0.0});
    for (double G : Gamma_grid) {
        RSolution sol = solve_rs(params.with_Gamma(G), s, rule, cfg);
        if (!trace.points.empty()) {
            const SweepPoint& last = trace.points.back();
            if (std::fabs(sol.m - last.sol.m) > jump_threshold)
                trace.jumps.push_back({last.Gamma, G, last.sol.m, sol.m});
        }
        trace.points.push_back({G, sol});
        s = sol.state();
        s.m = std::clamp(s.m, 0.0, 1.0);
        s.q = std::clamp(s.q, 0.0, 1.0);
    }
    return trace;
}

} // namespace qac
