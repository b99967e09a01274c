#pragma once

#include "ggm/linalg.hpp"

#include <span>
#include <vector>

namespace ggm {

/// Nonnegative weights on the unordered pairs (k, k') of K items, stored
/// row-major over k < k'.
class PairWeights {
public:
    PairWeights() = default;
    PairWeights(std::size_t k, double fill);
    PairWeights(std::size_t k, std::vector<double> upper);

    std::size_t size() const noexcept { return k_; }
    std::size_t pair_count() const noexcept { return w_.size(); }

    double operator()(std::size_t a, std::size_t b) const { return w_[index(a, b)]; }
    void set(std::size_t a, std::size_t b, double v) { w_[index(a, b)] = v; }

    /// True when every pair carries the same weight.
    bool uniform() const;
    bool all_zero() const;
    const std::vector<double>& values() const noexcept { return w_; }

    /// Copy with every weight multiplied by s.
    PairWeights scaled(double s) const;

private:
    std::size_t index(std::size_t a, std::size_t b) const;

    std::size_t k_ = 0;
    std::vector<double> w_;
};

/// argmin_R tr(cR) - logdet R + (tau/2)||R - a||_F^2. Result is strictly PD.
SymMatrix prox_logdet(const SymMatrix& a, const SymMatrix& c, double tau);

/// Entrywise sign(x) max(|x| - lambda, 0); the diagonal is left untouched
/// unless penalize_diagonal is set.
SymMatrix soft_threshold(const SymMatrix& a, double lambda, bool penalize_diagonal);

/// Prox of kappa*tr(P) + indicator(P >= 0): eigenvalue shift-and-clip.
SymMatrix prox_psd_trace(const SymMatrix& a, double kappa);

/// Scratch buffers so the fused prox can run allocation-free in solver loops.
struct FusedWorkspace {
    std::vector<std::size_t> order;
    std::vector<double> block_sum;
    std::vector<std::size_t> block_len;
    std::vector<double> dual;
    std::vector<double> tmp;
};

/// argmin_z 1/2||z - v||^2 + lambda1||z||_1 + sum_{k<k'} w_kk' |z_k - z_k'|.
///
/// The pairwise term is resolved first and the elementwise l1 applied to its
/// output by soft thresholding, which is exact for any pair graph.
/// K = 2 uses the fuse-then-shrink closed form, uniform weights use pool
/// adjacent violators on the sorted values, and general weights use exact
/// dual coordinate ascent followed by a closed-form polish of fused groups.
void prox_fused_l1(std::span<const double> values, double lambda1,
                   const PairWeights& weights, std::span<double> out,
                   FusedWorkspace& ws);

std::vector<double> prox_fused_l1(std::span<const double> values, double lambda1,
                                  const PairWeights& weights);

/// Same prox with a separate l1 weight per coordinate. Equal weights reduce
/// to the scalar form; otherwise the l1 terms join the dual as pairs against
/// a node pinned at zero.
void prox_fused_l1(std::span<const double> values, std::span<const double> lambda1,
                   const PairWeights& weights, std::span<double> out,
                   FusedWorkspace& ws);

/// argmin_z 1/2||z - v||^2 + lambda1||z||_1 + lambda2||z||_2 (sparse group
/// shrinkage: soft threshold, then radial shrink).
void prox_group_l2(std::span<const double> values, double lambda1, double lambda2,
                   std::span<double> out);

}  // namespace ggm
