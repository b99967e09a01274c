#include "ggm/sampling.hpp"

#include "ggm/error.hpp"
#include "ggm/rng.hpp"

namespace ggm {

void ObservedCovariances::validate() const {
    if (covs.empty())
        throw_invalid("need at least one covariance layer");
    if (!sample_counts.empty() && sample_counts.size() != covs.size())
        throw_invalid("sample count list does not match layer count");
    for (const auto& c : covs) {
        if (c.dim() != covs.front().dim() || c.dim() == 0)
            throw_invalid("covariance layers must share a positive dimension");
        if (!c.all_finite())
            throw_invalid("covariance has non-finite entries");
    }
}

SignalMatrix sample_gmrf(const SymMatrix& precision, std::size_t m, std::uint64_t seed) {
    if (m == 0)
        throw_invalid("sample_gmrf: need at least one sample");
    Eigen::LLT<Matrix> llt(precision.mat());
    if (llt.info() != Eigen::Success)
        throw_numerical("sample_gmrf: precision matrix is not positive definite");
    const auto n = static_cast<Eigen::Index>(precision.dim());
    const auto cols = static_cast<Eigen::Index>(m);
    Rng rng(seed);
    Matrix z(n, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < n; ++i)
            z(i, j) = rng.normal();
    return llt.matrixU().solve(z);
}

SymMatrix observed_sample_cov(const SignalMatrix& x, const BlockPartition& part) {
    if (static_cast<std::size_t>(x.rows()) != part.n_nodes())
        throw_invalid("observed_sample_cov: signal rows do not match partition");
    if (x.cols() == 0)
        throw_invalid("observed_sample_cov: no samples");
    part.validate(part.n_nodes());
    const auto o = static_cast<Eigen::Index>(part.observed.size());
    Matrix xo(o, x.cols());
    for (Eigen::Index a = 0; a < o; ++a)
        xo.row(a) = x.row(static_cast<Eigen::Index>(part.observed[static_cast<std::size_t>(a)]));
    Matrix c = xo * xo.transpose() / static_cast<double>(x.cols());
    return SymMatrix(std::move(c));
}

}  // namespace ggm
