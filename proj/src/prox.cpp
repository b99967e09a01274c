#include "ggm/prox.hpp"

#include "ggm/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ggm {

PairWeights::PairWeights(std::size_t k, double fill)
    : k_(k), w_(k * (k > 0 ? k - 1 : 0) / 2, fill) {
    if (!(fill >= 0.0) || !std::isfinite(fill))
        throw_invalid("pair weights must be finite and nonnegative");
}

PairWeights::PairWeights(std::size_t k, std::vector<double> upper)
    : k_(k), w_(std::move(upper)) {
    if (w_.size() != k * (k > 0 ? k - 1 : 0) / 2)
        throw_invalid("pair weight count does not match K(K-1)/2");
    for (double w : w_)
        if (!(w >= 0.0) || !std::isfinite(w))
            throw_invalid("pair weights must be finite and nonnegative");
}

std::size_t PairWeights::index(std::size_t a, std::size_t b) const {
    if (a == b || a >= k_ || b >= k_)
        throw_invalid("pair index out of range");
    if (a > b)
        std::swap(a, b);
    // Offset of row a in the packed strict upper triangle.
    return a * (2 * k_ - a - 1) / 2 + (b - a - 1);
}

bool PairWeights::uniform() const {
    return std::all_of(w_.begin(), w_.end(), [&](double w) { return w == w_.front(); });
}

bool PairWeights::all_zero() const {
    return std::all_of(w_.begin(), w_.end(), [](double w) { return w == 0.0; });
}

PairWeights PairWeights::scaled(double s) const {
    PairWeights out = *this;
    for (double& w : out.w_)
        w *= s;
    return out;
}

SymMatrix prox_logdet(const SymMatrix& a, const SymMatrix& c, double tau) {
    if (!(tau > 0.0) || !std::isfinite(tau))
        throw_invalid("prox_logdet: tau must be positive and finite");
    if (a.dim() != c.dim())
        throw_invalid("prox_logdet: dimension mismatch");
    const EigenDecomp ed = eigh(SymMatrix(Matrix(a.mat() - c.mat() / tau)));
    const double four_over_tau = 4.0 / tau;
    Vector r(ed.eigenvalues.size());
    for (Eigen::Index i = 0; i < r.size(); ++i) {
        const double g = ed.eigenvalues(i);
        const double root = std::sqrt(g * g + four_over_tau);
        // Rationalized branch avoids cancellation for strongly negative g.
        r(i) = g >= 0.0 ? 0.5 * (g + root) : (2.0 / tau) / (root - g);
    }
    return ed.reconstruct(r);
}

SymMatrix soft_threshold(const SymMatrix& a, double lambda, bool penalize_diagonal) {
    if (!(lambda >= 0.0))
        throw_invalid("soft_threshold: lambda must be nonnegative");
    if (lambda == 0.0)
        return a;
    Matrix m = a.mat();
    const Eigen::Index n = m.rows();
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) {
            if (i == j && !penalize_diagonal)
                continue;
            const double x = m(i, j);
            m(i, j) = x > lambda ? x - lambda : (x < -lambda ? x + lambda : 0.0);
        }
    return SymMatrix(std::move(m));
}

SymMatrix prox_psd_trace(const SymMatrix& a, double kappa) {
    if (!(kappa >= 0.0))
        throw_invalid("prox_psd_trace: kappa must be nonnegative");
    const EigenDecomp ed = eigh(a);
    Vector d = (ed.eigenvalues.array() - kappa).max(0.0);
    return ed.reconstruct(d);
}

namespace {

inline double soft(double x, double t) {
    return x > t ? x - t : (x < -t ? x + t : 0.0);
}

// Uniform weight w on the complete pair graph. The minimizer preserves the
// order of v, and on the ordered cone the pairwise term is linear:
// sum_{i<j} w (z_(j) - z_(i)) = sum_i w (2i - K - 1) z_(i) (1-based ranks).
// What remains is isotonic regression of v_(i) - w (2i - K - 1).
void tv_uniform(std::span<const double> v, double w, std::span<double> z,
                FusedWorkspace& ws) {
    const std::size_t k = v.size();
    auto& order = ws.order;
    order.resize(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return v[a] < v[b] || (v[a] == v[b] && a < b);
    });
    auto& sum = ws.block_sum;
    auto& len = ws.block_len;
    sum.clear();
    len.clear();
    const double kk = static_cast<double>(k);
    for (std::size_t r = 0; r < k; ++r) {
        const double y = v[order[r]] - w * (2.0 * static_cast<double>(r + 1) - kk - 1.0);
        sum.push_back(y);
        len.push_back(1);
        while (sum.size() > 1) {
            const std::size_t b = sum.size() - 1;
            if (sum[b - 1] / static_cast<double>(len[b - 1]) <=
                sum[b] / static_cast<double>(len[b]))
                break;
            sum[b - 1] += sum[b];
            len[b - 1] += len[b];
            sum.pop_back();
            len.pop_back();
        }
    }
    std::size_t r = 0;
    for (std::size_t b = 0; b < sum.size(); ++b) {
        const double mean = sum[b] / static_cast<double>(len[b]);
        for (std::size_t t = 0; t < len[b]; ++t)
            z[order[r++]] = mean;
    }
}

// General weights: coordinate ascent on the box-constrained dual
//   min_u 1/2||v - D^T u - a||^2,  |u_e| <= w_e,  |a_i| <= lambda_i,
// where a carries the optional per-coordinate l1 terms (pairs against a node
// pinned at zero). Every coordinate step is exact. The primal z is then
// polished by recomputing each fused group's value in closed form.
void tv_general(std::span<const double> v, std::span<const double> lambda,
                const PairWeights& w, std::span<double> z, FusedWorkspace& ws) {
    const std::size_t k = v.size();
    const bool anchored = !lambda.empty();
    auto& u = ws.dual;
    u.assign(w.pair_count() + (anchored ? k : 0), 0.0);
    std::copy(v.begin(), v.end(), z.begin());

    double scale = 1.0;
    for (double x : v)
        scale = std::max(scale, std::abs(x));
    const double stop = 1e-15 * scale;

    for (int sweep = 0; sweep < 200000; ++sweep) {
        double change = 0.0;
        std::size_t e = 0;
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j, ++e) {
                const double we = w.values()[e];
                const double next = std::clamp(u[e] + 0.5 * (z[i] - z[j]), -we, we);
                const double delta = next - u[e];
                if (delta != 0.0) {
                    u[e] = next;
                    z[i] -= delta;
                    z[j] += delta;
                    change = std::max(change, std::abs(delta));
                }
            }
        if (anchored)
            for (std::size_t i = 0; i < k; ++i, ++e) {
                const double next = std::clamp(u[e] + z[i], -lambda[i], lambda[i]);
                const double delta = next - u[e];
                if (delta != 0.0) {
                    u[e] = next;
                    z[i] -= delta;
                    change = std::max(change, std::abs(delta));
                }
            }
        if (change <= stop)
            break;
    }

    // Polish. Coordinates within `tie` of each other share a group; with
    // anchors, the group near zero is pinned to exactly zero. A free group G
    // satisfies
    //   |G| c_G = sum_G v_i - sum_{i in G, j not in G} w_ij sign(c_G - c_j)
    //             - sum_G lambda_i sign(c_G).
    const double tie = 1e-9 * scale;
    auto& order = ws.order;
    order.resize(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return z[a] < z[b] || (z[a] == z[b] && a < b);
    });
    auto& group = ws.block_len;
    group.assign(k, 0);
    std::size_t n_groups = 1;
    for (std::size_t r = 1; r < k; ++r) {
        if (z[order[r]] - z[order[r - 1]] > tie)
            ++n_groups;
        group[order[r]] = n_groups - 1;
    }
    std::vector<double> rep(n_groups, 0.0);
    for (std::size_t i = 0; i < k; ++i)
        rep[group[i]] = z[i];
    std::vector<int> sign(n_groups, 0);
    std::size_t zero_group = n_groups;
    for (std::size_t g = 0; g < n_groups; ++g) {
        if (anchored && std::abs(rep[g]) <= tie) {
            zero_group = g;
            sign[g] = 0;
        } else {
            sign[g] = rep[g] > 0.0 ? 1 : -1;
        }
    }
    auto& polished = ws.tmp;
    polished.assign(n_groups, 0.0);
    std::vector<double> count(n_groups, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t g = group[i];
        polished[g] += v[i];
        count[g] += 1.0;
        if (anchored)
            polished[g] -= lambda[i] * sign[g];
        for (std::size_t j = 0; j < k; ++j)
            if (j != i && group[j] != g)
                polished[g] -= w(i, j) * (g > group[j] ? 1.0 : -1.0);
    }
    for (std::size_t g = 0; g < n_groups; ++g) {
        polished[g] = g == zero_group ? 0.0 : polished[g] / count[g];
        if (g != zero_group && anchored && (polished[g] > 0.0 ? 1 : -1) != sign[g])
            return;
        if (g > 0 && !(polished[g] > polished[g - 1]))
            return;  // grouping inconsistent; keep the dual iterate
    }
    for (std::size_t i = 0; i < k; ++i)
        z[i] = polished[group[i]];
}

}  // namespace

void prox_fused_l1(std::span<const double> values, double lambda1,
                   const PairWeights& weights, std::span<double> out,
                   FusedWorkspace& ws) {
    const std::size_t k = values.size();
    if (k == 0)
        throw_invalid("prox_fused_l1: need at least one value");
    if (weights.size() != k)
        throw_invalid("prox_fused_l1: pair weights sized for a different K");
    if (out.size() != k)
        throw_invalid("prox_fused_l1: output size mismatch");
    if (!(lambda1 >= 0.0))
        throw_invalid("prox_fused_l1: lambda1 must be nonnegative");

    if (k == 1 || weights.all_zero()) {
        std::copy(values.begin(), values.end(), out.begin());
    } else if (k == 2) {
        const double w = weights(0, 1);
        const double d = values[0] - values[1];
        if (std::abs(d) <= 2.0 * w) {
            const double m = 0.5 * (values[0] + values[1]);
            out[0] = m;
            out[1] = m;
        } else {
            const double s = d > 0.0 ? w : -w;
            out[0] = values[0] - s;
            out[1] = values[1] + s;
        }
    } else if (weights.uniform()) {
        tv_uniform(values, weights.values().front(), out, ws);
    } else {
        tv_general(values, {}, weights, out, ws);
    }
    if (lambda1 > 0.0)
        for (double& z : out)
            z = soft(z, lambda1);
}

std::vector<double> prox_fused_l1(std::span<const double> values, double lambda1,
                                  const PairWeights& weights) {
    std::vector<double> out(values.size());
    FusedWorkspace ws;
    prox_fused_l1(values, lambda1, weights, out, ws);
    return out;
}

void prox_fused_l1(std::span<const double> values, std::span<const double> lambda1,
                   const PairWeights& weights, std::span<double> out,
                   FusedWorkspace& ws) {
    if (lambda1.size() != values.size())
        throw_invalid("prox_fused_l1: need one l1 weight per value");
    for (double l : lambda1)
        if (!(l >= 0.0))
            throw_invalid("prox_fused_l1: l1 weights must be nonnegative");
    const bool equal = std::all_of(lambda1.begin(), lambda1.end(),
                                   [&](double l) { return l == lambda1.front(); });
    if (equal || values.size() == 1 || weights.all_zero()) {
        if (equal) {
            prox_fused_l1(values, lambda1.front(), weights, out, ws);
        } else {
            // No coupling: plain per-coordinate soft threshold.
            for (std::size_t i = 0; i < values.size(); ++i)
                out[i] = soft(values[i], lambda1[i]);
        }
        return;
    }
    if (weights.size() != values.size() || out.size() != values.size())
        throw_invalid("prox_fused_l1: size mismatch");
    tv_general(values, lambda1, weights, out, ws);
}

void prox_group_l2(std::span<const double> values, double lambda1, double lambda2,
                   std::span<double> out) {
    if (!(lambda1 >= 0.0) || !(lambda2 >= 0.0))
        throw_invalid("prox_group_l2: penalties must be nonnegative");
    if (out.size() != values.size())
        throw_invalid("prox_group_l2: output size mismatch");
    double norm2 = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        out[i] = soft(values[i], lambda1);
        norm2 += out[i] * out[i];
    }
    const double norm = std::sqrt(norm2);
    const double shrink = norm > lambda2 ? 1.0 - lambda2 / norm : 0.0;
    for (double& z : out)
        z *= shrink;
}

}  // namespace ggm
