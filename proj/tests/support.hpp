#pragma once
// Helpers and independent reference computations shared by the tests.

#include "ggm/graph.hpp"
#include "ggm/linalg.hpp"
#include "ggm/prox.hpp"
#include "ggm/rng.hpp"
#include "ggm/sampling.hpp"
#include "ggm/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace ggm::test {

inline Matrix random_matrix(std::size_t n, Rng& rng) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m(i, j) = rng.normal();
    return m;
}

inline SymMatrix random_sym(std::size_t n, Rng& rng) {
    return SymMatrix(random_matrix(n, rng));
}

// B Bᵀ/n + floor I; comfortably PD.
inline SymMatrix random_pd(std::size_t n, Rng& rng, double floor = 0.1) {
    const Matrix b = random_matrix(n, rng);
    Matrix a = b * b.transpose() / static_cast<double>(n);
    a.diagonal().array() += floor;
    return SymMatrix(a);
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

// log det from the eigenvalues (the library uses Cholesky).
inline double logdet_eig(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        if (es.eigenvalues()(i) <= 0.0)
            return std::numeric_limits<double>::infinity();
        s += std::log(es.eigenvalues()(i));
    }
    return s;
}

inline double l1_entries(const Matrix& m, bool diagonal) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            if (i != j || diagonal)
                s += std::abs(m(i, j));
    return s;
}

// Loop-by-loop recomputation of the joint objective for PSD P.
inline double joint_objective_ref(const std::vector<SymMatrix>& s,
                                  const std::vector<SymMatrix>& p,
                                  const std::vector<SymMatrix>& c, const PenaltyWeights& w,
                                  const PenaltyScope& scope = {}) {
    double total = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) {
        const Matrix r = s[k].mat() - p[k].mat();
        double tr = 0.0;
        for (Eigen::Index i = 0; i < r.rows(); ++i)
            for (Eigen::Index j = 0; j < r.cols(); ++j)
                tr += r(i, j) * c[k].mat()(j, i);
        total += tr - logdet_eig(r) + w.rho[k] * l1_entries(s[k].mat(), scope.penalize_diagonal) +
                 w.beta[k] * p[k].mat().trace();
    }
    for (std::size_t a = 0; a < s.size(); ++a)
        for (std::size_t b = a + 1; b < s.size(); ++b)
            total += w.rho_pair(a, b) *
                         l1_entries(s[a].mat() - s[b].mat(), scope.penalize_diagonal) +
                     w.beta_pair(a, b) *
                         l1_entries(p[a].mat() - p[b].mat(), scope.fuse_latent_diagonal);
    return total;
}

// Fused-l1 prox objective.
inline double fused_objective(const std::vector<double>& z, const std::vector<double>& v,
                              const std::vector<double>& lambda1, const PairWeights& w) {
    double f = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k)
        f += 0.5 * (z[k] - v[k]) * (z[k] - v[k]) + lambda1[k] * std::abs(z[k]);
    for (std::size_t a = 0; a < z.size(); ++a)
        for (std::size_t b = a + 1; b < z.size(); ++b)
            f += w(a, b) * std::abs(z[a] - z[b]);
    return f;
}

// Exact minimizer of the last coordinate with the others fixed: the 1-D
// objective is convex piecewise quadratic with kinks at 0 and at the fixed
// coordinates, so its minimum is at a kink or at a stationary point of one
// of the quadratic pieces.
inline double best_last(std::vector<double>& z, const std::vector<double>& v,
                        const std::vector<double>& lambda1, const PairWeights& w) {
    const std::size_t last = z.size() - 1;
    std::vector<double> cand{0.0};
    for (std::size_t k = 0; k < last; ++k)
        cand.push_back(z[k]);
    std::vector<double> kinks = cand;
    std::sort(kinks.begin(), kinks.end());
    // On each piece, slope of the kink terms is constant: evaluate it at a
    // point inside the piece and solve (z - v) + slope = 0.
    std::vector<double> probes;
    probes.push_back(kinks.front() - 1.0);
    for (std::size_t i = 0; i + 1 < kinks.size(); ++i)
        probes.push_back(0.5 * (kinks[i] + kinks[i + 1]));
    probes.push_back(kinks.back() + 1.0);
    for (double x : probes) {
        double slope = lambda1[last] * (x > 0 ? 1.0 : -1.0);
        for (std::size_t k = 0; k < last; ++k)
            slope += w(k, last) * (x > z[k] ? 1.0 : -1.0);
        cand.push_back(v[last] - slope);
    }
    double best = std::numeric_limits<double>::infinity(), arg = 0.0;
    for (double x : cand) {
        z[last] = x;
        const double f = fused_objective(z, v, lambda1, w);
        if (f < best) {
            best = f;
            arg = x;
        }
    }
    z[last] = arg;
    return best;
}

// Grid search over the first K-1 coordinates (coarse pass, then a 1e-3 pass
// around the coarse winner) with the last coordinate minimized exactly.
inline std::vector<double> fused_brute_force(const std::vector<double>& v,
                                             const std::vector<double>& lambda1,
                                             const PairWeights& w) {
    const std::size_t k = v.size();
    std::vector<double> z(k, 0.0);
    if (k == 1) {
        best_last(z, v, lambda1, w);
        return z;
    }
    const double lo = std::min(0.0, *std::min_element(v.begin(), v.end())) - 0.05;
    const double hi = std::max(0.0, *std::max_element(v.begin(), v.end())) + 0.05;
    std::vector<double> centre(k - 1, 0.5 * (lo + hi));
    auto search = [&](double half, double step) {
        const long n = static_cast<long>(std::ceil(half / step));
        double best = std::numeric_limits<double>::infinity();
        std::vector<double> best_z = z, cur(k, 0.0), base = centre;
        std::vector<long> idx(k - 1, -n);
        while (true) {
            for (std::size_t d = 0; d + 1 < k; ++d)
                cur[d] = base[d] + static_cast<double>(idx[d]) * step;
            const double f = best_last(cur, v, lambda1, w);
            if (f < best) {
                best = f;
                best_z = cur;
            }
            std::size_t d = 0;
            while (d + 1 < k && ++idx[d] > n)
                idx[d++] = -n;
            if (d + 1 == k)
                break;
        }
        z = best_z;
        centre.assign(z.begin(), z.end() - 1);
    };
    search(0.5 * (hi - lo), 0.02);
    search(0.04, 1e-3);
    return z;
}

inline std::vector<double> fused_brute_force(const std::vector<double>& v, double lambda1,
                                             const PairWeights& w) {
    return fused_brute_force(v, std::vector<double>(v.size(), lambda1), w);
}

inline ObservedCovariances covs_of(std::vector<SymMatrix> c) {
    ObservedCovariances oc;
    for (auto& m : c) {
        oc.covs.push_back(std::move(m));
        oc.sample_counts.push_back(1);
    }
    return oc;
}

// O = 4 observed nodes of a 5-node GMRF family with one hidden node,
// 30 samples per layer.
inline ObservedCovariances tiny_instance(std::uint64_t seed, std::size_t k) {
    const Graph g = gen_erdos_renyi(5, 0.5, derive_seed(seed, 1));
    const auto family = gen_rewired_family(g, k, std::min<std::size_t>(1, g.edge_count()),
                                           derive_seed(seed, 2));
    const auto part = choose_hidden(5, 1, derive_seed(seed, 3));
    ObservedCovariances covs;
    for (std::size_t a = 0; a < k; ++a) {
        const auto pg = to_precision(family[a], {}, derive_seed(seed, 4));
        covs.covs.push_back(
            observed_sample_cov(sample_gmrf(pg.precision, 30, derive_seed(seed, 5, a)), part));
        covs.sample_counts.push_back(30);
    }
    return covs;
}

}  // namespace ggm::test
