#include "qac/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace qac {

namespace {

// Physicists' Gauss-Hermite nodes/weights (weight e^{-x^2}), Newton iteration on
// the orthonormal Hermite recurrence with the usual asymptotic initial guesses.
void gauher(int n, std::vector<double>& x, std::vector<double>& w) {
    const double eps = 1e-15;
    const double pim4 = 0.7511255444649425; // pi^{-1/4}
    const int maxit = 100;
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    int m = (n + 1) / 2;
    double z = 0.0, pp = 0.0;
    for (int i = 0; i < m; ++i) {
        if (i == 0)
            z = std::sqrt(2.0 * n + 1) - 1.85575 * std::pow(2.0 * n + 1, -0.16667);
        else if (i == 1)
            z -= 1.14 * std::pow(double(n), 0.426) / z;
        else if (i == 2)
            z = 1.86 * z - 0.86 * x[0];
        else if (i == 3)
            z = 1.91 * z - 0.91 * x[1];
        else
            z = 2.0 * z - x[i - 2];
        int its = 0;
        for (; its < maxit; ++its) {
            double p1 = pim4, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(double(j) / (j + 1)) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            double z1 = z;
            z = z1 - p1 / pp;
            if (std::fabs(z - z1) <= eps * std::max(1.0, std::fabs(z))) break;
        }
        if (its == maxit)
            throw NonConvergenceError("Gauss-Hermite node iteration", {z}, 0.0, its);
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = w[n - 1 - i] = 2.0 / (pp * pp);
    }
    if (n % 2 == 1) x[m - 1] = 0.0;
}

} // namespace

QuadratureRule gauss_hermite_rule(int n) {
    if (n < 1) throw InputError("quadrature node count must be positive");
    std::vector<double> x, w;
    gauher(n, x, w);
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double s2 = std::sqrt(2.0), spi = std::sqrt(M_PI);
    // gauher returns nodes in decreasing order
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = s2 * x[n - 1 - i];
        rule.weights[i] = w[n - 1 - i] / spi;
    }
    return rule;
}

double find_root_bracketed(const std::function<double(double)>& f, double lo,
                           double hi, double tol) {
    const double eps = std::numeric_limits<double>::epsilon();
    double a = lo, b = hi;
    double fa = f(a), fb = f(b);
    if (!std::isfinite(fa) || !std::isfinite(fb))
        throw EvaluationError("non-finite function value at bracket end",
                              std::isfinite(fa) ? b : a);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0))
        throw BracketError("no sign change on [" + std::to_string(lo) + ", " +
                           std::to_string(hi) + "]");
    double c = b, fc = fb, d = 0.0, e = 0.0;
    for (int iter = 0; iter < 1000; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            e = d = b - a;
        }
        if (std::fabs(fc) < std::fabs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        double tol1 = 2.0 * eps * std::fabs(b) + 0.5 * tol;
        double xm = 0.5 * (c - b);
        if (std::fabs(xm) <= tol1 || fb == 0.0) return b;
        if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
            double s = fb / fa, p, q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                double qq = fa / fc, r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::fabs(p);
            double min1 = 3.0 * xm * q - std::fabs(tol1 * q);
            double min2 = std::fabs(e * q);
            if (2.0 * p < std::min(min1, min2)) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::fabs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
        if (!std::isfinite(fb)) throw EvaluationError("non-finite function value", b);
    }
    throw NonConvergenceError("root finding exceeded iteration limit", {b}, fb, 1000);
}

void FixedPointConfig::validate() const {
    if (!(damping > 0.0 && damping <= 1.0))
        throw InputError("damping must lie in (0, 1]");
    if (!(tol > 0.0)) throw InputError("tolerance must be positive");
    if (max_iter < 1) throw InputError("max_iter must be positive");
}

FixedPointResult fixed_point(const VecMap& map, std::vector<double> x0,
                             const FixedPointConfig& cfg) {
    cfg.validate();
    std::vector<double> x = std::move(x0);
    double res = 0.0;
    for (int it = 1; it <= cfg.max_iter; ++it) {
        std::vector<double> y = map(x);
        if (y.size() != x.size()) throw InputError("map changed the state dimension");
        res = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (!std::isfinite(y[i])) throw DivergenceError("iterate became non-finite", it);
            res = std::max(res, std::fabs(y[i] - x[i]));
            x[i] += cfg.damping * (y[i] - x[i]);
        }
        if (res <= cfg.tol) return {x, it, res};
    }
    throw NonConvergenceError("fixed point did not converge", x, res, cfg.max_iter);
}

Minimum1D golden_section_minimize(const std::function<double(double)>& f,
                                  double lo, double hi, double tol) {
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    Minimum1D best = fc <= fd ? Minimum1D{c, fc} : Minimum1D{d, fd};
    // the ends are never probed by the bracketing steps
    double fa = f(a), fb = f(b);
    if (fa < best.f) best = {a, fa};
    if (fb < best.f) best = {b, fb};
    return best;
}

FitResult polyfit(const std::vector<double>& xs, const std::vector<double>& ys,
                  int degree) {
    if (degree < 0) throw InputError("negative fit degree");
    if (xs.size() != ys.size()) throw InputError("xs and ys differ in length");
    const int n = static_cast<int>(xs.size());
    if (n < degree + 1)
        throw InputError("underdetermined fit: " + std::to_string(n) +
                         " points for degree " + std::to_string(degree));
    Eigen::MatrixXd A(n, degree + 1);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        double v = 1.0;
        for (int j = 0; j <= degree; ++j) {
            A(i, j) = v;
            v *= xs[i];
        }
        y(i) = ys[i];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    if (qr.rank() < degree + 1)
        throw InputError("underdetermined fit: too few distinct abscissae");
    Eigen::VectorXd c = qr.solve(y);
    FitResult out;
    out.coefficients.assign(c.data(), c.data() + c.size());
    double ss = (A * c - y).squaredNorm();
    out.residual_rms = std::sqrt(ss / n);
    return out;
}

double polyval(const std::vector<double>& coefficients, double x) {
    double v = 0.0;
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) v = v * x + *it;
    return v;
}

} // namespace qac
