#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles/first_order.hpp"
#include "qac/phase.hpp"

using namespace qac;
using doctest::Approx;

namespace {

FerroParams base(int p, double gamma, Beta beta = Beta::infinite(), int K = 3) {
    FerroParams f;
    f.p = p;
    f.K = K;
    f.gamma = gamma;
    f.beta = beta;
    return f;
}

double second_difference(const FerroParams& f, double m) {
    double h = 1e-4;
    if (m < h) return free_energy_uniform(f, m + h) - free_energy_uniform(f, m);
    return free_energy_uniform(f, m + h) - 2 * free_energy_uniform(f, m) +
           free_energy_uniform(f, m - h);
}

} // namespace

TEST_CASE("p=2 critical field at zero temperature") {
    TransitionRecord r = second_order_gamma_c(base(2, 0.0), 1.0, 5.0);
    CHECK(std::fabs(r.Gamma_c - 2.0) < 1e-6);
    CHECK(r.order == TransitionOrder::second);
    CHECK(r.T == 0.0);
    CHECK(r.m_left == 0.0);
}

TEST_CASE("stability slope is 2 / Gamma at gamma = 0") {
    for (double G : {0.5, 1.0, 2.0, 3.7})
        CHECK(stability_slope(base(2, 0.0).with_Gamma(G)) == Approx(2.0 / G).epsilon(1e-6));
}

TEST_CASE("penalty raises the finite-temperature critical field") {
    FerroParams f = base(2, 0.2, Beta::finite(10.0));
    TransitionRecord r = second_order_gamma_c(f, 1.0, 50.0);
    CHECK(r.Gamma_c > 2.0);
    CHECK(std::isfinite(r.Gamma_c));
    // landscape cross-check: broken just below, symmetric just above
    auto global_m = [&](double G) {
        LandscapeSample s = scan_landscape(f.with_Gamma(G));
        for (const auto& mn : s.minima)
            if (mn.is_global) return mn.m;
        return -1.0;
    };
    CHECK(global_m(r.Gamma_c - 0.05) > 1e-3);
    CHECK(global_m(r.Gamma_c + 0.05) < 1e-6);
}

TEST_CASE("no second-order point for gamma > 0 at zero temperature") {
    CHECK_THROWS_AS(second_order_gamma_c(base(2, 0.5), 1.0, 1000.0), NotFoundError);
    CHECK_THROWS_AS(second_order_gamma_c(base(4, 0.0), 1.0, 5.0), InputError);
    CHECK_THROWS_AS(second_order_gamma_c(base(2, 0.0), 3.0, 5.0), NotFoundError);
}

TEST_CASE("stability root agrees with the vanishing broken branch") {
    FerroParams f = base(2, 0.0);
    double m = std::sqrt(1.0 - 1.9 * 1.9 / 4.0), G_vanish = -1.0;
    for (int i = 0; i <= 300; ++i) {
        double G = 1.9 + i * 1e-3;
        auto t = track_minimum(f.with_Gamma(G), m);
        REQUIRE(t.has_value());
        m = t->m;
        if (m < 1e-4) {
            G_vanish = G;
            break;
        }
    }
    CHECK(std::fabs(G_vanish - second_order_gamma_c(f, 1.0, 5.0).Gamma_c) < 1e-3);
}

TEST_CASE("first-order points against the brute-force oracle") {
    TransitionRecord a = zero_temperature_first_order(4, 0.0);
    CHECK(std::fabs(a.Gamma_c - 1.185) < 5e-3);
    CHECK(std::fabs(a.m_left) < 1e-6);
    CHECK(std::fabs(a.m_right - 0.943) < 5e-3);
    CHECK(std::fabs(a.Gamma_c - oracle::first_order_point(4, 0.0, 1.1, 1.3)) < 1e-7);

    TransitionRecord b = zero_temperature_first_order(4, 0.5);
    CHECK(std::fabs(b.Gamma_c - 1.847) < 5e-3);
    CHECK(std::fabs(b.m_left - 0.328) < 5e-3);
    CHECK(std::fabs(b.m_right - 0.844) < 5e-3);
    CHECK(std::fabs(b.Gamma_c - oracle::first_order_point(4, 0.5, 1.82, 1.87)) < 1e-7);

    for (int p : {3, 5}) {
        TransitionRecord r = zero_temperature_first_order(p, 0.2);
        double lo = r.Gamma_c - 0.02, hi = r.Gamma_c + 0.02;
        auto w = coexistence_window(p, 0.2);
        REQUIRE(w.has_value());
        lo = std::max(lo, w->Gamma_lo + 1e-6);
        hi = std::min(hi, w->Gamma_hi - 1e-6);
        CHECK(std::fabs(r.Gamma_c - oracle::first_order_point(p, 0.2, lo, hi)) < 1e-7);
    }
}

TEST_CASE("coexisting minima are stationary local minima") {
    for (double g : {0.0, 0.3, 0.6}) {
        TransitionRecord r = zero_temperature_first_order(4, g);
        FerroParams f = base(4, g, Beta::infinite(), 1).with_Gamma(r.Gamma_c);
        CHECK(std::fabs(free_energy_uniform(f, r.m_left) - free_energy_uniform(f, r.m_right)) <=
              1e-6);
        CHECK(r.m_right - r.m_left > 1e-3);
        for (double m : {r.m_left, r.m_right}) {
            if (m > 1e-6) CHECK(std::fabs(saddle_residual(f, m)) <= 1e-6);
            CHECK(second_difference(f, m) > 0.0);
        }
    }
}

TEST_CASE("first-order locator does not depend on the bracket") {
    FerroParams f = base(4, 0.0);
    TransitionRecord a = first_order_gamma_c(f, {0.0, 0.93}, 1.1, 1.25);
    TransitionRecord b = first_order_gamma_c(f, {0.0, 0.90}, 1.0, 1.3);
    CHECK(std::fabs(a.Gamma_c - b.Gamma_c) < 1e-10);
}

TEST_CASE("first-order locator failures") {
    FerroParams f = base(4, 0.0);
    // the ordered minimum disappears near Gamma = 1.54
    CHECK_THROWS_AS(first_order_gamma_c(f, {0.0, 0.5}, 1.1, 1.8), SpinodalError);
    // both minima exist but F does not cross
    CHECK_THROWS_AS(first_order_gamma_c(f, {0.0, 0.9}, 1.3, 1.5), NotFoundError);
    CHECK_THROWS_AS(first_order_gamma_c(f, {0.0, 0.9}, 1.3, 1.2), InputError);
}

TEST_CASE("generic finder reproduces the zero-temperature points") {
    auto recs = find_first_order_transitions(base(4, 0.0), 0.05, 4.0);
    REQUIRE(recs.size() == 1);
    CHECK(std::fabs(recs[0].Gamma_c - zero_temperature_first_order(4, 0.0).Gamma_c) < 1e-8);
    auto none = find_first_order_transitions(base(4, 1.5), 0.05, 4.0);
    CHECK(none.empty());
}

TEST_CASE("two first-order transitions at low temperature") {
    PhaseDiagram d = phase_diagram(4, 0.5, {0.02, 0.025, 0.03});
    int max_count = 0;
    for (double T : {0.02, 0.025, 0.03}) {
        int c = 0;
        for (const auto& r : d.points)
            if (r.T == Approx(T)) ++c;
        max_count = std::max(max_count, c);
    }
    CHECK(max_count == 2);
    for (std::size_t i = 1; i < d.points.size(); ++i) CHECK(d.points[i].T >= d.points[i - 1].T);
}

TEST_CASE("p=2 phase diagram") {
    std::vector<double> Ts{0.0, 0.2, 0.4, 0.6, 0.8};
    PhaseDiagram d = phase_diagram(2, 0.0, Ts);
    REQUIRE(d.points.size() == Ts.size());
    // at gamma = 0 both penalty orientations carry weight 1/2 at every m, so the
    // finite-temperature free energy differs from the zero-temperature one by a constant
    for (const auto& r : d.points) CHECK(std::fabs(r.Gamma_c - 2.0) < 1e-6);

    PhaseDiagram pen = phase_diagram(2, 0.5, {0.0, 0.01, 0.02, 0.05});
    CHECK(pen.not_found.size() == 1);
    CHECK(pen.not_found[0] == 0.0);
    REQUIRE(pen.points.size() == 3);
    CHECK(pen.points[0].Gamma_c > pen.points[1].Gamma_c);
    CHECK(pen.points[1].Gamma_c > pen.points[2].Gamma_c);
    CHECK(pen.points[0].Gamma_c > 10.0);
    CHECK_THROWS_AS(phase_diagram(2, 0.0, {-1.0}), InputError);
}

TEST_CASE("critical field grows with the penalty") {
    double prev = 0.0;
    for (int i = 0; i <= 7; ++i) {
        double G = zero_temperature_first_order(4, 0.1 * i).Gamma_c;
        CHECK(G > prev);
        prev = G;
    }
}

TEST_CASE("coexistence window on the stationary curve") {
    auto w0 = coexistence_window(4, 0.0);
    REQUIRE(w0.has_value());
    CHECK(w0->Gamma_lo == 0.0);
    // max of 4 m^2 sqrt(1 - m^2) is at m^2 = 2/3
    CHECK(w0->m_b == Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-6));
    CHECK(w0->Gamma_hi == Approx(8.0 / 3.0 / std::sqrt(3.0)).epsilon(1e-9));
    CHECK_FALSE(coexistence_window(2, 0.0).has_value());
    CHECK_FALSE(coexistence_window(4, 2.0).has_value());
    CHECK(stationary_field(2, 0.0, 0.6) == Approx(2 * 0.8));
}

TEST_CASE("critical penalty") {
    double gc = critical_gamma(4);
    CHECK(std::fabs(gc - 0.8) < 0.05);
    CHECK_NOTHROW(zero_temperature_first_order(4, gc - 0.01));
    CHECK_THROWS(zero_temperature_first_order(4, gc + 0.01));
    CHECK_THROWS_AS(critical_gamma(2), InputError);
}

TEST_CASE("quadratic fit of the critical field") {
    std::vector<double> grid{0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7};
    FitResult q = gamma_c_fit(4, grid);
    CHECK(std::fabs(q.coefficients[0] - 1.186) < 0.02);
    CHECK(std::fabs(q.coefficients[1] - 1.379) < 0.05);
    CHECK(std::fabs(q.coefficients[2] + 0.115) < 0.05);
    CHECK_THROWS_AS(gamma_c_fit(4, {0.3}), InputError);
}
