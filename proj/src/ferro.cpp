#include "qac/ferro.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qac {

Beta Beta::finite(double b) {
    if (!(b > 0.0) || !std::isfinite(b))
        throw InputError("beta must be a finite positive real or inf");
    return Beta(b);
}

Beta Beta::from_temperature(double T) {
    if (!(T >= 0.0) || !std::isfinite(T)) throw InputError("temperature must be >= 0");
    return T == 0.0 ? infinite() : finite(1.0 / T);
}

Beta Beta::parse(const std::string& s) {
    if (s == "inf" || s == "Inf" || s == "INF" || s == "infinity") return infinite();
    std::istringstream in(s);
    in.imbue(std::locale::classic());
    double v;
    if (!(in >> v) || !(in >> std::ws).eof())
        throw InputError("cannot parse beta value '" + s + "'");
    return finite(v);
}

std::string Beta::str() const {
    if (is_infinite()) return "inf";
    std::ostringstream out;
    out.imbue(std::locale::classic());
    out.precision(12);
    out << value_;
    return out.str();
}

void FerroParams::validate() const {
    if (p < 2) throw InputError("p must be >= 2");
    if (K < 1 || K % 2 == 0) throw InputError("K must be a positive odd integer");
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw InputError("gamma must be >= 0");
    if (!(Gamma >= 0.0) || !std::isfinite(Gamma)) throw InputError("Gamma must be >= 0");
    if (!(J > 0.0) || !std::isfinite(J)) throw InputError("J must be positive");
}

const char* to_string(Branch b) { return b == Branch::symmetric ? "symmetric" : "broken"; }

namespace {

double ratio(double g, double u) { return u > 0.0 ? g / u : 0.0; }

// log(e^{x} + e^{y}) without overflow
double log_sum_exp(double x, double y) {
    double hi = std::max(x, y), lo = std::min(x, y);
    return hi + std::log1p(std::exp(lo - hi));
}

} // namespace

double free_energy(const FerroParams& params, std::span<const double> m) {
    params.validate();
    if (static_cast<int>(m.size()) != params.K)
        throw InputError("copy magnetization vector must have length K");
    for (double mk : m)
        if (!(std::fabs(mk) <= 1.0)) throw InputError("copy magnetizations must lie in [-1, 1]");
    const int p = params.p;
    const double g = params.gamma, G = params.Gamma;
    double poly = 0.0, sum_a = 0.0, sum_b = 0.0;
    for (double mk : m) {
        double h = p * std::pow(mk, p - 1);
        poly += std::pow(mk, p);
        sum_a += std::hypot(g - h, G);
        sum_b += std::hypot(g + h, G);
    }
    double f = (p - 1) * poly;
    if (params.beta.is_infinite()) {
        // zero-temperature limit: the dominant penalty orientation wins; on any
        // configuration with all copies aligned this is -sum_k sqrt((g + p|m_k|^{p-1})^2 + G^2)
        f -= std::max(sum_a, sum_b);
    } else {
        const double b = params.beta.value();
        f -= log_sum_exp(b * sum_a, b * sum_b) / b;
    }
    return params.J * f;
}

double free_energy_uniform(const FerroParams& params, double m) {
    const int p = params.p, K = params.K;
    const double h = p * std::pow(m, p - 1);
    const double A = std::hypot(params.gamma - h, params.Gamma);
    const double B = std::hypot(params.gamma + h, params.Gamma);
    double f = K * (p - 1) * std::pow(m, p);
    if (params.beta.is_infinite()) {
        f -= K * std::max(A, B);
    } else {
        const double b = params.beta.value();
        f -= log_sum_exp(b * K * A, b * K * B) / b;
    }
    return params.J * f;
}

double saddle_rhs(const FerroParams& params, double m) {
    const int p = params.p;
    const double g = params.gamma, G = params.Gamma;
    const double h = p * std::pow(m, p - 1);
    const double gp = g + h, gm = g - h;
    const double A = std::hypot(gm, G), B = std::hypot(gp, G);
    if (params.beta.is_infinite()) {
        // for m >= 0 this is (g + p|m|^{p-1}) / sqrt((g + p|m|^{p-1})^2 + G^2)
        return B >= A ? ratio(gp, B) : -ratio(gm, A);
    }
    const double x = params.beta.value() * params.K * (B - A);
    // weights e^{bKB}/(e^{bKA}+e^{bKB}) and its complement
    const double wb = x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
    const double wa = 1.0 - wb;
    return wb * ratio(gp, B) - wa * ratio(gm, A);
}

double saddle_residual(const FerroParams& params, double m) {
    return m - saddle_rhs(params, m);
}

double free_energy_slope(const FerroParams& params, double m) {
    const int p = params.p;
    return params.J * params.K * p * (p - 1) * std::pow(m, p - 2) * saddle_residual(params, m);
}

SaddleSolution solve_saddle(const FerroParams& params, double m0, const FixedPointConfig& cfg) {
    params.validate();
    if (!(m0 >= 0.0 && m0 <= 1.0)) throw InputError("saddle seed m0 must lie in [0, 1]");
    auto map = [&](const std::vector<double>& x) {
        return std::vector<double>{saddle_rhs(params, x[0])};
    };
    FixedPointResult r = fixed_point(map, {m0}, cfg);
    double m = r.x[0];
    return {m, std::fabs(saddle_residual(params, m)), r.iterations,
            std::fabs(m) < 1e-6 ? Branch::symmetric : Branch::broken};
}

LandscapeSample scan_landscape(const FerroParams& params, double m_lo, double m_hi, int n_grid) {
    params.validate();
    if (!(m_lo < m_hi)) throw InputError("landscape requires m_lo < m_hi");
    if (n_grid < 3) throw InputError("landscape requires at least 3 grid points");
    LandscapeSample out;
    out.m.resize(n_grid);
    out.F.resize(n_grid);
    const double dm = (m_hi - m_lo) / (n_grid - 1);
    for (int i = 0; i < n_grid; ++i) {
        out.m[i] = i == n_grid - 1 ? m_hi : m_lo + i * dm;
        out.F[i] = free_energy_uniform(params, out.m[i]);
    }
    auto f = [&](double x) { return free_energy_uniform(params, x); };
    const auto& F = out.F;
    // a run of equal samples counts as one candidate; for large p the landscape near m = 0
    // is flat to double precision over several cells
    for (int i = 0, j = 0; i < n_grid; i = j + 1) {
        j = i;
        while (j + 1 < n_grid && F[j + 1] == F[i]) ++j;
        bool left_ok = i == 0 || F[i] < F[i - 1];
        bool right_ok = j == n_grid - 1 || F[j] < F[j + 1];
        if (!(left_ok && right_ok) || (i == 0 && j == n_grid - 1)) continue;
        double a = out.m[std::max(i - 1, 0)], b = out.m[std::min(j + 1, n_grid - 1)];
        Minimum1D r = golden_section_minimize(f, a, b, landscape_refine_tol);
        if (!out.minima.empty() && std::fabs(out.minima.back().m - r.x) < 1e-7) continue;
        out.minima.push_back({r.x, r.f, false});
    }
    double fmin = std::numeric_limits<double>::infinity();
    for (const auto& mn : out.minima) fmin = std::min(fmin, mn.F);
    for (auto& mn : out.minima) mn.is_global = mn.F <= fmin + degeneracy_tol * params.J;
    return out;
}

double mixed_copy_free_energy(const FerroParams& params, double m, int kappa) {
    if (kappa < 0 || kappa > params.K) throw InputError("kappa must lie in [0, K]");
    std::vector<double> mk(params.K, -m);
    std::fill(mk.begin(), mk.begin() + kappa, m);
    return free_energy(params, mk);
}

} // namespace qac
