#pragma once

#include <array>
#include <vector>

#include "qac/ferro.hpp"
#include "qac/numerics.hpp"

namespace qac {

// Zero-temperature Hopfield model; a = (number of patterns) / N^{p-1}.
struct HopfieldParams {
    int p = 4;
    int K = 3;
    double gamma = 0.0;
    double Gamma = 0.0;
    double a = 0.0;
    double J = 1.0;

    void validate() const;
    HopfieldParams with_Gamma(double G) const {
        HopfieldParams h = *this;
        h.Gamma = G;
        return h;
    }
    FerroParams ferro() const; // the a = 0 model at beta = inf
};

// m: condensed overlap, q: Edwards-Anderson parameter, C: zero-temperature limit of
// beta K (R - q) with R the replica-diagonal overlap.
struct RsState {
    double m = 0.0;
    double q = 0.0;
    double C = 0.0;
};

struct RSolution {
    double m = 0.0;
    double q = 0.0;
    double C = 0.0;
    std::array<double, 3> residuals{};
    Branch branch = Branch::symmetric;
    int iterations = 0;
    RsState state() const { return {m, q, C}; }
};

// Total over K copies, in units of J.
double finite_pattern_free_energy(const HopfieldParams& params, int l, double m);
Minimum1D finite_pattern_minimum(const HopfieldParams& params, int l);

// p >= 3: returns (m', q', C) from (m, q).
RsState rs_consistency_p_ge_3(const HopfieldParams& params, double m, double q,
                              const QuadratureRule& rule);

// p = 2: the state carries C, which enters through q / (1 - 2C)^2; 2C >= 1 breaks
// the replica-symmetric solution.
RsState rs_consistency_p2(const HopfieldParams& params, const RsState& s,
                          const QuadratureRule& rule);

RsState rs_map(const HopfieldParams& params, const RsState& s, const QuadratureRule& rule);

// Free energy per copy, in units of J.
double rs_free_energy(const HopfieldParams& params, const RsState& s,
                      const QuadratureRule& rule);

// Failed attempts are retried this many times, each with a quarter of the damping.
inline constexpr int max_damping_retries = 3;

RSolution solve_rs(const HopfieldParams& params, const RsState& seed,
                   const QuadratureRule& rule, const FixedPointConfig& cfg = {});

// Gamma at which two RS branches, each re-solved from its seed, have equal free
// energy; this is the thermodynamic transition rather than a sweep spinodal.
struct RsCrossing {
    double Gamma_c;
    RSolution first;
    RSolution second;
};

RsCrossing rs_branch_crossing(const HopfieldParams& params, const RsState& seed_first,
                              const RsState& seed_second, double G_lo, double G_hi,
                              const QuadratureRule& rule, const FixedPointConfig& cfg = {});

enum class SweepDirection { up, down };

struct SweepPoint {
    double Gamma;
    RSolution sol;
};

struct Jump {
    double Gamma_before;
    double Gamma_after;
    double m_before;
    double m_after;
};

struct SweepTrace {
    std::vector<SweepPoint> points; // in sweep order
    std::vector<Jump> jumps;
};

constexpr double default_jump_threshold = 0.05;

// Continuation along Gamma; the first point is seeded from m = q = 1 (up) or
// m = q = 0 (down) unless a seed is given.
SweepTrace sweep_gamma_axis(const HopfieldParams& params, const std::vector<double>& Gamma_grid,
                            SweepDirection direction, const QuadratureRule& rule,
                            double jump_threshold = default_jump_threshold,
                            const FixedPointConfig& cfg = {}, const RsState* seed = nullptr);

} // namespace qac
