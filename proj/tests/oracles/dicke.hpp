#pragma once

#include <bit>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

// Apply -N mz^p - gamma sum sz - Gamma sum sx on the full 2^N space, mz = (1/N) sum sz.
inline Eigen::VectorXd apply_full(int N, int p, double gamma, double Gamma,
                                  const Eigen::VectorXd& v) {
    const std::size_t dim = std::size_t(1) << N;
    Eigen::VectorXd out = Eigen::VectorXd::Zero(dim);
    for (std::size_t s = 0; s < dim; ++s) {
        if (v[s] == 0.0) continue;
        int up = std::popcount(s);
        double sz = 2.0 * up - N;
        out[s] += (-N * std::pow(sz / N, p) - gamma * sz) * v[s];
        for (int i = 0; i < N; ++i) out[s ^ (std::size_t(1) << i)] += -Gamma * v[s];
    }
    return out;
}

// Hamiltonian in the maximal-spin sector, built from explicit Dicke states
// (normalized uniform superpositions over fixed numbers of up spins).
inline Eigen::MatrixXd projected_dicke(int N, int p, double gamma, double Gamma) {
    const std::size_t dim = std::size_t(1) << N;
    Eigen::MatrixXd V = Eigen::MatrixXd::Zero(dim, N + 1);
    for (std::size_t s = 0; s < dim; ++s) V(s, std::popcount(s)) = 1.0;
    for (int k = 0; k <= N; ++k) V.col(k).normalize();
    Eigen::MatrixXd HV(dim, N + 1);
    for (int k = 0; k <= N; ++k) HV.col(k) = apply_full(N, p, gamma, Gamma, V.col(k));
    return V.transpose() * HV;
}

inline Eigen::VectorXd dense_eigenvalues(const Eigen::MatrixXd& h) {
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(h, Eigen::EigenvaluesOnly).eigenvalues();
}

inline Eigen::MatrixXd dense_from_tridiagonal(const std::vector<double>& d,
                                              const std::vector<double>& e) {
    const int n = int(d.size());
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) h(i, i) = d[i];
    for (int i = 0; i + 1 < n; ++i) h(i, i + 1) = h(i + 1, i) = e[i];
    return h;
}

// E1 - E0 among eigenvectors even under M -> -M (basis index i -> n-1-i).
inline double dense_even_gap(const Eigen::MatrixXd& h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    const int n = int(h.rows());
    std::vector<double> even;
    for (int k = 0; k < n && even.size() < 2; ++k) {
        Eigen::VectorXd v = es.eigenvectors().col(k);
        double overlap = 0;
        for (int i = 0; i < n; ++i) overlap += v[i] * v[n - 1 - i];
        if (overlap > 0.5) even.push_back(es.eigenvalues()[k]);
    }
    return even[1] - even[0];
}

} // namespace oracle
