#pragma once

#include "ggm/graph.hpp"
#include "ggm/linalg.hpp"

#include <cstdint>
#include <vector>

namespace ggm {

/// N x M matrix; column m is one graph signal.
using SignalMatrix = Matrix;

struct ObservedCovariances {
    std::vector<SymMatrix> covs;
    std::vector<std::size_t> sample_counts;

    std::size_t layers() const { return covs.size(); }
    std::size_t dim() const { return covs.empty() ? 0 : covs.front().dim(); }
    /// Throws InvalidInput for an empty list or mismatched dimensions.
    void validate() const;
};

/// M i.i.d. columns from N(0, S^{-1}): x = L^{-T} z with S = L L^T and z
/// standard normal, filled column by column.
SignalMatrix sample_gmrf(const SymMatrix& precision, std::size_t m, std::uint64_t seed);

/// (1/M) X_O X_O^T over the observed rows, in partition order. No centering.
SymMatrix observed_sample_cov(const SignalMatrix& x, const BlockPartition& part);

}  // namespace ggm
