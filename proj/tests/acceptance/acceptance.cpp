// One PASS/FAIL line per acceptance criterion. Exit status is nonzero if any line fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles/dicke.hpp"
#include "oracles/ferro.hpp"
#include "oracles/quadrature.hpp"
#include "qac/dicke.hpp"
#include "qac/errors.hpp"
#include "qac/ferro.hpp"
#include "qac/hopfield.hpp"
#include "qac/io.hpp"
#include "qac/presets.hpp"

using namespace qac;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int criterion, const std::string& title, double limit_s,
            const std::function<Verdict()>& body) {
    auto t0 = Clock::now();
    Verdict v;
    try {
        v = body();
    } catch (const std::exception& e) {
        v.pass = false;
        v.detail = std::string("exception: ") + e.what();
    }
    double t = seconds_since(t0);
    bool in_time = t < limit_s;
    bool ok = v.pass && in_time;
    if (!ok) ++failures;
    std::string extra = in_time ? "" : "; runtime over the " + format_double(limit_s) + " s limit";
    std::printf("%s criterion %d (%s): %s%s [%.2f s]\n", ok ? "PASS" : "FAIL", criterion,
                title.c_str(), v.detail.c_str(), extra.c_str(), t);
    std::fflush(stdout);
}

std::string describe(const Assertion& a) {
    std::ostringstream s;
    s << a.quantity << " = " << format_double(a.value);
    if (a.expected) s << " (want " << format_double(*a.expected);
    if (a.expected && a.tol) s << " +/- " << format_double(*a.tol);
    if (a.expected) s << ")";
    if (!a.detail.empty()) s << " [" << a.detail << "]";
    return s.str();
}

// Every assertion tagged with this criterion in the listed presets must hold.
Verdict from_presets(int criterion, const std::vector<std::string>& presets) {
    Verdict v;
    int n = 0;
    std::vector<std::string> failed;
    for (const auto& name : presets) {
        PresetOutcome out = run_preset(name);
        for (const auto& a : out.assertions) {
            if (a.criterion != criterion) continue;
            ++n;
            if (!a.passed) failed.push_back(name + ": " + describe(a));
        }
    }
    if (n == 0) return {false, "no checks recorded"};
    if (failed.empty()) {
        v.detail = std::to_string(n) + " checks hold";
        return v;
    }
    v.pass = false;
    v.detail = std::to_string(failed.size()) + " of " + std::to_string(n) + " checks fail: ";
    for (std::size_t i = 0; i < failed.size(); ++i) v.detail += (i ? "; " : "") + failed[i];
    return v;
}

Verdict dicke_oracle() {
    double worst = 0.0;
    int cases = 0;
    for (int N = 1; N <= 12; ++N)
        for (int p : {2, 3, 4})
            for (double g : {0.0, 0.5})
                for (double G : {0.1, 0.5, 1.0, 1.5, 2.0, 3.0}) {
                    auto tri = lowest_eigenvalues(build_dicke(N, p, g, G), 2);
                    Eigen::VectorXd ref =
                        oracle::dense_eigenvalues(oracle::projected_dicke(N, p, g, G));
                    worst = std::max({worst, std::fabs(tri[0] - ref[0]), std::fabs(tri[1] - ref[1])});
                    ++cases;
                }
    return {worst <= 1e-10, std::to_string(cases) + " cases, max deviation " + format_double(worst)};
}

FerroParams ferro(int p, double gamma, double Gamma, Beta beta, int K = 3) {
    FerroParams f;
    f.p = p;
    f.K = K;
    f.gamma = gamma;
    f.Gamma = Gamma;
    f.beta = beta;
    return f;
}

Verdict properties() {
    std::vector<std::string> bad;
    std::ostringstream summary;

    // stationarity of converged saddles
    {
        double worst = 0.0;
        int converged = 0, skipped = 0;
        for (int p : {2, 3, 4, 5})
            for (double g : {0.0, 0.3, 0.6, 1.0})
                for (Beta b : {Beta::infinite(), Beta::finite(10.0), Beta::finite(100.0)})
                    for (int i = 1; i <= 30; ++i)
                        for (double m0 : {0.05, 0.99}) {
                            FerroParams f = ferro(p, g, 0.1 * i, b);
                            try {
                                SaddleSolution s = solve_saddle(f, m0);
                                worst = std::max(worst, std::fabs(free_energy_slope(f, s.m)));
                                ++converged;
                            } catch (const NonConvergenceError&) {
                                ++skipped;
                            }
                        }
        summary << "stationarity max |dF/dm| " << format_double(worst) << " over " << converged
                << " saddles (" << skipped << " not converged)";
        if (worst > 1e-6) bad.push_back("stationarity");
    }

    const QuadratureRule rule = gauss_hermite_rule();

    // a -> 0 Hopfield against the ferromagnet with one copy
    {
        double worst = 0.0;
        for (int p : {2, 3, 4})
            for (double g : {0.0, 0.4, 1.0})
                for (double G : {0.3, 0.8, 1.2, 1.6, 2.5}) {
                    HopfieldParams h;
                    h.p = p;
                    h.K = 3;
                    h.gamma = g;
                    h.Gamma = G;
                    h.a = 0.0;
                    RSolution r = solve_rs(h, {0.9, 0.81, 0.0}, rule);
                    FerroParams f = ferro(p, g, G, Beta::infinite(), 1);
                    SaddleSolution s = solve_saddle(f, 0.9);
                    worst = std::max(worst, std::fabs(r.m - s.m));
                    worst = std::max(worst, std::fabs(rs_free_energy(h, r.state(), rule) -
                                                      free_energy_uniform(f, s.m)));
                }
        summary << "; a=0 max deviation " << format_double(worst);
        if (worst > 1e-8) bad.push_back("a=0 equivalence");
    }

    // finite beta converges to beta = inf
    {
        double worst = 0.0;
        for (int p : {2, 3, 4})
            for (double g : {0.0, 0.5})
                for (double G : {0.5, 1.5, 2.5})
                    for (int i = 0; i <= 20; ++i) {
                        double m = 0.05 * i;
                        double a = free_energy_uniform(ferro(p, g, G, Beta::finite(1e4)), m);
                        double b = free_energy_uniform(ferro(p, g, G, Beta::infinite()), m);
                        worst = std::max(worst, std::fabs(a - b));
                    }
        summary << "; beta=1e4 max |dF| " << format_double(worst);
        if (worst > 1e-3) bad.push_back("beta convergence");
    }

    // m = 0 is exactly stationary wherever F is smooth there: finite beta for every p,
    // and beta = inf for p >= 3 (at p = 2 the inf-beta branch has a kink at m = 0 for gamma > 0).
    // At beta = inf the slope carries a factor m^(p-2), so there m = 0 need not solve m = RHS(m).
    {
        int nonzero = 0, n = 0;
        for (int p : {2, 3, 4, 5})
            for (double g : {0.0, 0.1, 0.5, 1.0, 2.0, 5.0})
                for (double G : {0.2, 1.0, 3.0})
                    for (Beta b : {Beta::finite(1.0), Beta::finite(50.0), Beta::infinite()}) {
                        if (p == 2 && b.is_infinite()) continue;
                        FerroParams f = ferro(p, g, G, b);
                        ++n;
                        bool rhs_zero = b.is_infinite() || saddle_rhs(f, 0.0) == 0.0;
                        if (!rhs_zero || free_energy_slope(f, 0.0) != 0.0) ++nonzero;
                    }
        summary << "; m=0 stationary in " << (n - nonzero) << "/" << n;
        if (nonzero) bad.push_back("m=0 stationarity");
    }

    // quadrature against the adaptive oracle
    {
        std::mt19937 rng(2024);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double worst = 0.0;
        for (int i = 0; i < 60; ++i) {
            int p = 3 + i % 3;
            double m = u(rng), q = m * m + (1 - m * m) * u(rng);
            double g = u(rng), G = 0.5 + 2.5 * u(rng), a = 0.05 * u(rng);
            HopfieldParams h;
            h.p = p;
            h.gamma = g;
            h.Gamma = G;
            h.a = a;
            RsState r = rs_consistency_p_ge_3(h, m, q, rule);
            double mean = p * std::pow(m, p - 1) + g, sd = std::sqrt(a * p * std::pow(q, p - 1));
            auto gz = [&](double z) { return mean + sd * z; };
            double om = oracle::gaussian_expectation([&](double z) { return gz(z) / std::hypot(gz(z), G); });
            double oq = oracle::gaussian_expectation(
                [&](double z) { return gz(z) * gz(z) / (gz(z) * gz(z) + G * G); });
            double oc = oracle::gaussian_expectation(
                [&](double z) { return G * G / std::pow(gz(z) * gz(z) + G * G, 1.5); });
            worst = std::max({worst, std::fabs(r.m - om), std::fabs(r.q - oq), std::fabs(r.C - oc)});
        }
        summary << "; quadrature max deviation " << format_double(worst);
        if (worst > 1e-8) bad.push_back("quadrature");
    }

    // landscape global minimum against a dense scan of the closed form
    {
        double worst = 0.0;
        for (int p : {2, 3, 4, 5})
            for (double g : {0.0, 0.5, 1.0})
                for (double G : {0.3, 0.9, 1.2, 1.5, 2.0, 3.0}) {
                    LandscapeSample s = scan_landscape(ferro(p, g, G, Beta::infinite()));
                    double F = 1e300;
                    for (const auto& mn : s.minima)
                        if (mn.is_global) F = mn.F;
                    auto ref = oracle::dense_min(
                        [&](double m) { return oracle::ferro_uniform_inf(p, 3, g, G, m); }, 0.0,
                        1.0, 20000);
                    worst = std::max(worst, std::fabs(F - ref.F));
                    if (F > ref.F + 1e-9) worst = std::max(worst, 1.0);
                }
        summary << "; global minimum max |dF| " << format_double(worst);
        if (worst > 1e-6) bad.push_back("global minimum");
    }

    Verdict v;
    v.pass = bad.empty();
    v.detail = summary.str();
    for (const auto& b : bad) v.detail += "; failed: " + b;
    return v;
}

} // namespace

int main() {
    report(1, "p=2 second-order point", 1.0, [] { return from_presets(1, {"fig1"}); });
    report(2, "p=4 degenerate landscapes", 5.0,
           [] { return from_presets(2, {"fig3a", "fig3b"}); });
    report(3, "Gamma_c(gamma) fits", 30.0, [] { return from_presets(3, {"sm-gammac"}); });
    report(4, "gamma_c(p)", 120.0, [] { return from_presets(4, {"sm-gammacp"}); });
    report(5, "two-transition regime", 10.0, [] { return from_presets(5, {"fig2"}); });
    report(6, "gap coefficient", 60.0, [] { return from_presets(6, {"sm-gap", "fig3c"}); });
    report(7, "Dicke oracle equivalence", 60.0, dicke_oracle);
    report(8, "Hopfield p=2", 30.0, [] { return from_presets(8, {"fig4a"}); });
    report(9, "Hopfield p=4", 60.0, [] { return from_presets(9, {"fig4b"}); });
    report(10, "finite-pattern ordering", 10.0,
           [] { return from_presets(10, {"sm-hopfield-l"}); });
    report(11, "property suites", 120.0, properties);
    std::printf("%d of 11 criteria fail\n", failures);
    return failures == 0 ? 0 : 1;
}
