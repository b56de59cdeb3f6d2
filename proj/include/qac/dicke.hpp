#pragma once

#include <vector>

namespace qac {

struct SymTridiagonal {
    std::vector<double> diag;
    std::vector<double> offdiag; // offdiag[i] couples i and i+1
    double norm_bound() const;   // Gershgorin bound on the spectral radius
};

// Single-copy Hamiltonian in the maximal-spin sector, penalty qubits up, basis
// ordered M = -N/2 ... N/2.
struct DickeHamiltonian : SymTridiagonal {
    int N = 0;
    int p = 2;
    double gamma = 0.0;
    double Gamma = 0.0;
};

DickeHamiltonian build_dicke(int N, int p, double gamma, double Gamma);

// For even p and gamma = 0 the spin flip M -> -M is a symmetry; this is the block
// of flip-even states, which contains the ground state.
SymTridiagonal parity_even_block(const DickeHamiltonian& h);
bool has_flip_symmetry(int p, double gamma);

// Number of eigenvalues strictly below x (Sturm sequence).
int count_below(const SymTridiagonal& t, double x);

// k lowest eigenvalues by Sturm bisection, ascending.
std::vector<double> lowest_eigenvalues(const SymTridiagonal& t, int k);

// E1 - E0 in the sector that holds the ground state.
double spectral_gap(int N, int p, double gamma, double Gamma);

struct GapGrid {
    double lo = 0.5;
    double hi = 3.0;
    int n = 0; // 0: max(200, 5N)
};

struct GapMinimum {
    int N = 0;
    double Gamma_min = 0.0;
    double Delta_min = 0.0;
    bool at_grid_boundary = false;
    double matrix_norm = 0.0;
};

constexpr double default_gap_refine_tol = 1e-13;

GapMinimum min_gap(int N, int p, double gamma, const GapGrid& grid = {},
                   double refine_tol = default_gap_refine_tol);

struct GapScalingFit {
    std::vector<GapMinimum> per_N; // points used in the fit
    std::vector<int> excluded_N;   // dropped by the precision filter
    double C = 0.0;
    double fit_residual = 0.0;
};

std::vector<int> default_gap_N_list();

GapScalingFit fit_gap_coefficient(int p, double gamma,
                                  const std::vector<int>& N_list = default_gap_N_list(),
                                  const GapGrid& grid = {},
                                  double refine_tol = default_gap_refine_tol);

} // namespace qac
