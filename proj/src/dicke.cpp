#include "qac/dicke.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qac/errors.hpp"
#include "qac/numerics.hpp"

namespace qac {

double SymTridiagonal::norm_bound() const {
    double r = 0.0;
    const std::size_t n = diag.size();
    for (std::size_t i = 0; i < n; ++i) {
        double s = std::fabs(diag[i]);
        if (i > 0) s += std::fabs(offdiag[i - 1]);
        if (i + 1 < n) s += std::fabs(offdiag[i]);
        r = std::max(r, s);
    }
    return r;
}

DickeHamiltonian build_dicke(int N, int p, double gamma, double Gamma) {
    if (N < 1) throw InputError("N must be positive");
    if (p < 2) throw InputError("p must be >= 2");
    DickeHamiltonian h;
    h.N = N;
    h.p = p;
    h.gamma = gamma;
    h.Gamma = Gamma;
    const double S = 0.5 * N;
    const double c = std::pow(2.0 / N, p - 1);
    h.diag.resize(N + 1);
    h.offdiag.resize(N);
    for (int i = 0; i <= N; ++i) {
        double M = i - S;
        h.diag[i] = -2.0 * (c * std::pow(M, p) + gamma * M);
        if (i < N) h.offdiag[i] = -Gamma * std::sqrt(S * (S + 1.0) - M * (M + 1.0));
    }
    return h;
}

bool has_flip_symmetry(int p, double gamma) { return p % 2 == 0 && gamma == 0.0; }

SymTridiagonal parity_even_block(const DickeHamiltonian& h) {
    if (!has_flip_symmetry(h.p, h.gamma))
        throw InputError("flip symmetry requires even p and gamma = 0");
    const int N = h.N;
    SymTridiagonal b;
    if (N % 2 == 0) {
        // states |0>, (|M> + |-M>)/sqrt2 for M = 1..N/2
        const int i0 = N / 2;
        b.diag.assign(h.diag.begin() + i0, h.diag.end());
        b.offdiag.assign(h.offdiag.begin() + i0, h.offdiag.end());
        if (!b.offdiag.empty()) b.offdiag[0] *= std::sqrt(2.0);
    } else {
        // states (|M> + |-M>)/sqrt2 for M = 1/2..N/2; |1/2> and |-1/2> are coupled directly
        const int i0 = (N + 1) / 2;
        b.diag.assign(h.diag.begin() + i0, h.diag.end());
        b.offdiag.assign(h.offdiag.begin() + i0, h.offdiag.end());
        b.diag[0] += h.offdiag[i0 - 1];
    }
    return b;
}

int count_below(const SymTridiagonal& t, double x) {
    const std::size_t n = t.diag.size();
    double emax = 1.0;
    for (double e : t.offdiag) emax = std::max(emax, e * e);
    const double pivmin = std::numeric_limits<double>::min() * emax;
    int count = 0;
    double q = t.diag[0] - x;
    if (std::fabs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++count;
    for (std::size_t i = 1; i < n; ++i) {
        q = t.diag[i] - x - t.offdiag[i - 1] * t.offdiag[i - 1] / q;
        if (std::fabs(q) < pivmin) q = -pivmin;
        if (q < 0.0) ++count;
    }
    return count;
}

std::vector<double> lowest_eigenvalues(const SymTridiagonal& t, int k) {
    const int n = static_cast<int>(t.diag.size());
    if (k < 1 || k > n) throw InputError("requested eigenvalue count out of range");
    const double eps = std::numeric_limits<double>::epsilon();
    double glo = std::numeric_limits<double>::infinity(), ghi = -glo;
    for (int i = 0; i < n; ++i) {
        double r = 0.0;
        if (i > 0) r += std::fabs(t.offdiag[i - 1]);
        if (i + 1 < n) r += std::fabs(t.offdiag[i]);
        glo = std::min(glo, t.diag[i] - r);
        ghi = std::max(ghi, t.diag[i] + r);
    }
    const double scale = std::max(std::fabs(glo), std::fabs(ghi));
    glo -= 2.0 * eps * scale + 1e-300;
    ghi += 2.0 * eps * scale + 1e-300;
    std::vector<double> out(k);
    double lo_start = glo;
    for (int j = 0; j < k; ++j) {
        // smallest x with count_below(x) > j
        double lo = lo_start, hi = ghi;
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            if (count_below(t, mid) > j)
                hi = mid;
            else
                lo = mid;
            if (hi - lo <= 2.0 * eps * std::max(std::fabs(lo), std::fabs(hi))) break;
        }
        out[j] = 0.5 * (lo + hi);
        lo_start = lo;
    }
    return out;
}

namespace {

SymTridiagonal ground_sector(int N, int p, double gamma, double Gamma) {
    DickeHamiltonian h = build_dicke(N, p, gamma, Gamma);
    if (has_flip_symmetry(p, gamma)) return parity_even_block(h);
    return h;
}

} // namespace

double spectral_gap(int N, int p, double gamma, double Gamma) {
    SymTridiagonal t = ground_sector(N, p, gamma, Gamma);
    if (t.diag.size() < 2) throw InputError("sector has a single state; no gap");
    auto e = lowest_eigenvalues(t, 2);
    return e[1] - e[0];
}

GapMinimum min_gap(int N, int p, double gamma, const GapGrid& grid, double refine_tol) {
    if (!(grid.lo >= 0.0 && grid.lo < grid.hi)) throw InputError("invalid Gamma grid");
    const int n = grid.n > 0 ? grid.n : std::max(200, 5 * N);
    if (n < 3) throw InputError("Gamma grid needs at least 3 points");
    const double h = (grid.hi - grid.lo) / (n - 1);
    int jbest = 0;
    double dbest = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
        double d = spectral_gap(N, p, gamma, grid.lo + j * h);
        if (d < dbest) {
            dbest = d;
            jbest = j;
        }
    }
    GapMinimum out;
    out.N = N;
    out.at_grid_boundary = jbest == 0 || jbest == n - 1;
    double a = grid.lo + std::max(jbest - 1, 0) * h;
    double b = grid.lo + std::min(jbest + 1, n - 1) * h;
    Minimum1D r = golden_section_minimize(
        [&](double G) { return spectral_gap(N, p, gamma, G); }, a, b, refine_tol);
    out.Gamma_min = r.x;
    out.Delta_min = r.f;
    out.matrix_norm = ground_sector(N, p, gamma, r.x).norm_bound();
    return out;
}

std::vector<int> default_gap_N_list() {
    std::vector<int> v;
    for (int N = 100; N <= 200; N += 10) v.push_back(N);
    return v;
}

GapScalingFit fit_gap_coefficient(int p, double gamma, const std::vector<int>& N_list,
                                  const GapGrid& grid, double refine_tol) {
    if (N_list.size() < 5) throw InputError("gap fit needs at least 5 system sizes");
    const double eps = std::numeric_limits<double>::epsilon();
    GapScalingFit out;
    std::vector<double> xs, ys;
    for (int N : N_list) {
        GapMinimum g = min_gap(N, p, gamma, grid, refine_tol);
        if (g.at_grid_boundary)
            throw InputError("gap minimum at the Gamma grid boundary for N = " +
                             std::to_string(N) + "; widen the grid");
        if (!(g.Delta_min > 0.0))
            throw PrecisionError("non-positive gap at N = " + std::to_string(N), N);
        if (g.Delta_min < 1e3 * eps * g.matrix_norm) {
            out.excluded_N.push_back(N);
            continue;
        }
        out.per_N.push_back(g);
        xs.push_back(N);
        ys.push_back(std::log(g.Delta_min));
    }
    if (xs.size() < 2)
        throw PrecisionError("fewer than two sizes above the precision floor",
                             out.excluded_N.empty() ? 0 : out.excluded_N.front());
    FitResult f = polyfit(xs, ys, 1);
    out.C = std::exp(f.coefficients[1]);
    out.fit_residual = f.residual_rms;
    return out;
}

} // namespace qac
