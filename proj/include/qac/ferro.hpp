#pragma once

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "qac/numerics.hpp"

namespace qac {

// Inverse temperature in units of 1/J; infinity selects the zero-temperature forms.
class Beta {
public:
    static Beta infinite() { return Beta(std::numeric_limits<double>::infinity()); }
    static Beta finite(double b);
    static Beta from_temperature(double T); // T = 0 maps to infinite
    static Beta parse(const std::string& s); // "inf" or a positive real

    bool is_infinite() const { return std::isinf(value_); }
    double value() const { return value_; }
    double temperature() const { return is_infinite() ? 0.0 : 1.0 / value_; }
    std::string str() const;

private:
    explicit Beta(double v) : value_(v) {}
    double value_;
};

struct FerroParams {
    int p = 2;
    int K = 3;
    double gamma = 0.0;
    double Gamma = 0.0;
    Beta beta = Beta::infinite();
    double J = 1.0;

    void validate() const;
    FerroParams with_Gamma(double G) const {
        FerroParams q = *this;
        q.Gamma = G;
        return q;
    }
};

enum class Branch { symmetric, broken };
const char* to_string(Branch b);

// Total free energy of K copies with fields m_k (length K), in units of J.
double free_energy(const FerroParams& params, std::span<const double> m);

// All K copies at the same m.
double free_energy_uniform(const FerroParams& params, double m);

// Right-hand side of the uniform saddle-point condition m = RHS(m).
double saddle_rhs(const FerroParams& params, double m);
double saddle_residual(const FerroParams& params, double m);

// dF/dm along the uniform direction (K copies), analytic.
double free_energy_slope(const FerroParams& params, double m);

struct SaddleSolution {
    double m;
    double residual;
    int iterations;
    Branch branch;
};

SaddleSolution solve_saddle(const FerroParams& params, double m0,
                            const FixedPointConfig& cfg = {});

struct LocalMinimum {
    double m;
    double F;
    bool is_global;
};

struct LandscapeSample {
    std::vector<double> m;
    std::vector<double> F;
    std::vector<LocalMinimum> minima; // ascending in m
};

constexpr int default_landscape_points = 2001;
constexpr double landscape_refine_tol = 1e-8;
constexpr double degeneracy_tol = 1e-6;

LandscapeSample scan_landscape(const FerroParams& params, double m_lo = 0.0,
                               double m_hi = 1.0, int n_grid = default_landscape_points);

// kappa copies at +m and K - kappa at -m.
double mixed_copy_free_energy(const FerroParams& params, double m, int kappa);

} // namespace qac
