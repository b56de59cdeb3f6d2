#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "qac/errors.hpp"

namespace qac {

// Gauss-Hermite rule for the standard normal measure Dz = e^{-z^2/2} dz / sqrt(2 pi).
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::string kind = "gauss-hermite-probabilist";
};

constexpr int default_quad_nodes = 120;

QuadratureRule gauss_hermite_rule(int n = default_quad_nodes);

template <class F>
double gauss_integrate(F&& f, const QuadratureRule& rule) {
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        double v = f(rule.nodes[i]);
        if (!std::isfinite(v))
            throw EvaluationError("non-finite integrand at node " +
                                      std::to_string(rule.nodes[i]),
                                  rule.nodes[i]);
        s += rule.weights[i] * v;
    }
    return s;
}

// Several integrals sharing one integrand evaluation; f returns std::array<double, N>.
template <std::size_t N, class F>
std::array<double, N> gauss_integrate_n(F&& f, const QuadratureRule& rule) {
    std::array<double, N> s{};
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        std::array<double, N> v = f(rule.nodes[i]);
        for (std::size_t k = 0; k < N; ++k) {
            if (!std::isfinite(v[k]))
                throw EvaluationError("non-finite integrand at node " +
                                          std::to_string(rule.nodes[i]),
                                      rule.nodes[i]);
            s[k] += rule.weights[i] * v[k];
        }
    }
    return s;
}

constexpr double default_root_tol = 1e-8;

// Brent's method; falls back to bisection whenever the interpolation step is poor.
double find_root_bracketed(const std::function<double(double)>& f, double lo,
                           double hi, double tol = default_root_tol);

struct FixedPointConfig {
    double damping = 0.5;
    int max_iter = 10000;
    double tol = 1e-10;
    void validate() const;
};

struct FixedPointResult {
    std::vector<double> x;
    int iterations = 0;
    double residual = 0.0; // |map(x) - x|_inf at the last step
};

using VecMap = std::function<std::vector<double>(const std::vector<double>&)>;

// Damped iteration x <- (1-d) x + d map(x).
FixedPointResult fixed_point(const VecMap& map, std::vector<double> x0,
                             const FixedPointConfig& cfg = {});

struct Minimum1D {
    double x;
    double f;
};

Minimum1D golden_section_minimize(const std::function<double(double)>& f,
                                  double lo, double hi, double tol);

struct FitResult {
    std::vector<double> coefficients; // ascending degree
    double residual_rms = 0.0;
};

FitResult polyfit(const std::vector<double>& xs, const std::vector<double>& ys,
                  int degree);

double polyval(const std::vector<double>& coefficients, double x);

} // namespace qac
