#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qac/ferro.hpp"
#include "qac/numerics.hpp"

namespace qac {

enum class TransitionOrder { first, second };
const char* to_string(TransitionOrder o);

struct TransitionRecord {
    double Gamma_c;
    TransitionOrder order;
    double T;
    double gamma;
    int p;
    double m_left;  // second order: 0
    double m_right; // second order: 0 (the broken branch grows from 0+)
};

struct PhaseDiagram {
    std::vector<TransitionRecord> points; // sorted by T, then Gamma_c
    std::string axis = "T";
    double resolution = 0.0;              // Gamma scan step used by the first-order finder
    std::vector<double> not_found;        // sweep values with no transition in the Gamma range
};

constexpr double trust_window = 0.05;
constexpr double stability_step = 1e-6;

// Local minimum of F(m) reached by walking downhill from the seed; nullopt if the
// walk leaves the trust window through an interior edge (the minimum vanished).
struct TrackedMinimum {
    double m;
    double F;
};
std::optional<TrackedMinimum> track_minimum(const FerroParams& params, double seed,
                                            double window = trust_window);

// d RHS / dm at m = 0 (one-sided at beta = inf).
double stability_slope(const FerroParams& params);

// p = 2: root of stability_slope - 1 in [G_lo, G_hi].
TransitionRecord second_order_gamma_c(const FerroParams& base, double G_lo, double G_hi,
                                      double tol = 1e-12);

// Seeds are approximate positions of the two minima at G_hi.
struct MinimaPair {
    double m_left;
    double m_right;
};

TransitionRecord first_order_gamma_c(const FerroParams& base, MinimaPair seeds, double G_lo,
                                     double G_hi, int n_steps = 64);

// Every first-order transition between global minima in [G_lo, G_hi], located by a
// descending Gamma scan of the landscape followed by first_order_gamma_c on each
// sign change of the free-energy difference of two coexisting minima.
std::vector<TransitionRecord> find_first_order_transitions(const FerroParams& base,
                                                           double G_lo, double G_hi,
                                                           int n_scan = 400);

// beta = inf: Gamma(m) = (gamma + p m^{p-1}) sqrt(1 - m^2) / m is the field at which m is
// stationary. Two minima coexist for Gamma in (Gamma_lo, Gamma_hi), where the curve
// is not monotone; m_a < m_b are its local minimum and maximum (m_a = 0 for gamma = 0).
struct CoexistenceWindow {
    double Gamma_lo;
    double Gamma_hi;
    double m_a;
    double m_b;
};
double stationary_field(int p, double gamma, double m);
std::optional<CoexistenceWindow> coexistence_window(int p, double gamma);

// beta = inf first-order point, bracket and seeds taken from the coexistence window.
TransitionRecord zero_temperature_first_order(int p, double gamma);

double critical_gamma(int p, double tol = 1e-4);

FitResult gamma_c_fit(int p, const std::vector<double>& gamma_grid, int degree = 2);

struct PhaseScanOptions {
    int K = 3;
    double Gamma_lo = -1.0; // negative: pick by p
    double Gamma_hi = -1.0;
    int n_scan = 400;
};

PhaseDiagram phase_diagram(int p, double gamma, const std::vector<double>& T_grid,
                           const PhaseScanOptions& opts = {});

} // namespace qac
