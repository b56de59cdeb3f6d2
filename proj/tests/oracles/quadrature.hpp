#pragma once

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/trapezoidal.hpp>

namespace oracle {

// Adaptive trapezoid rule for E[f(z)], z standard normal, truncated to [-12, 12].
template <class F>
double gaussian_expectation(F f, double tol = 1e-13) {
    auto g = [&](double z) { return f(z) * std::exp(-0.5 * z * z) / std::sqrt(2 * std::numbers::pi); };
    return boost::math::quadrature::trapezoidal(g, -12.0, 12.0, tol, 20);
}

} // namespace oracle
