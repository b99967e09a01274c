#include "ggm/graph.hpp"

#include "ggm/error.hpp"
#include "ggm/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace ggm {

Graph::Graph(std::size_t n_nodes) : adjacency_(SymMatrix::zero(n_nodes)) {}

Graph::Graph(SymMatrix adjacency) : adjacency_(std::move(adjacency)) {
    const std::size_t n = adjacency_.dim();
    for (std::size_t i = 0; i < n; ++i) {
        if (adjacency_(i, i) != 0.0)
            throw_invalid("adjacency must have a zero diagonal");
        for (std::size_t j = i + 1; j < n; ++j)
            if (!(adjacency_(i, j) >= 0.0) || !std::isfinite(adjacency_(i, j)))
                throw_invalid("adjacency entries must be finite and nonnegative");
    }
}

void Graph::add_edge(std::size_t i, std::size_t j, double weight) {
    if (i == j || i >= n_nodes() || j >= n_nodes())
        throw_invalid("add_edge: invalid node pair");
    if (!(weight > 0.0) || !std::isfinite(weight))
        throw_invalid("add_edge: weight must be positive and finite");
    adjacency_.set(i, j, weight);
}

void Graph::remove_edge(std::size_t i, std::size_t j) { adjacency_.set(i, j, 0.0); }

std::size_t Graph::edge_count() const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < n_nodes(); ++i)
        for (std::size_t j = i + 1; j < n_nodes(); ++j)
            c += has_edge(i, j);
    return c;
}

std::size_t Graph::degree(std::size_t i) const {
    std::size_t c = 0;
    for (std::size_t j = 0; j < n_nodes(); ++j)
        c += (j != i && has_edge(i, j));
    return c;
}

std::vector<std::pair<std::size_t, std::size_t>> Graph::edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < n_nodes(); ++i)
        for (std::size_t j = i + 1; j < n_nodes(); ++j)
            if (has_edge(i, j))
                out.emplace_back(i, j);
    return out;
}

std::size_t support_difference(const Graph& a, const Graph& b) {
    if (a.n_nodes() != b.n_nodes())
        throw_invalid("support_difference: node counts differ");
    std::size_t c = 0;
    for (std::size_t i = 0; i < a.n_nodes(); ++i)
        for (std::size_t j = i + 1; j < a.n_nodes(); ++j)
            c += a.has_edge(i, j) != b.has_edge(i, j);
    return c;
}

std::vector<std::size_t> BlockPartition::permutation() const {
    std::vector<std::size_t> p = observed;
    p.insert(p.end(), hidden.begin(), hidden.end());
    return p;
}

void BlockPartition::validate(std::size_t n) const {
    if (observed.empty())
        throw_invalid("partition needs at least one observed node");
    if (n_nodes() != n)
        throw_invalid("partition covers " + std::to_string(n_nodes()) +
                      " nodes, expected " + std::to_string(n));
    std::vector<char> seen(n, 0);
    for (std::size_t i : permutation()) {
        if (i >= n || seen[i])
            throw_invalid("partition indices must be a permutation of 0..n-1");
        seen[i] = 1;
    }
}

Graph gen_erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
    if (!(p >= 0.0 && p <= 1.0))
        throw_invalid("gen_erdos_renyi: p must lie in [0, 1]");
    if (n == 0)
        throw_invalid("gen_erdos_renyi: n must be positive");
    Rng rng(seed);
    Graph g(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (rng.uniform() < p)
                g.add_edge(i, j);
    return g;
}

Graph gen_small_world(std::size_t n, std::size_t neighbors, double rewire_p,
                      std::uint64_t seed) {
    if (neighbors >= n)
        throw_invalid("gen_small_world: neighbors must be smaller than n");
    if (neighbors % 2 != 0)
        throw_invalid("gen_small_world: neighbors must be even");
    if (!(rewire_p >= 0.0 && rewire_p <= 1.0))
        throw_invalid("gen_small_world: rewire_p must lie in [0, 1]");
    Rng rng(seed);
    Graph g(n);
    const std::size_t half = neighbors / 2;
    for (std::size_t j = 1; j <= half; ++j)
        for (std::size_t i = 0; i < n; ++i)
            g.add_edge(i, (i + j) % n);
    for (std::size_t j = 1; j <= half; ++j)
        for (std::size_t i = 0; i < n; ++i) {
            if (rng.uniform() >= rewire_p)
                continue;
            const std::size_t old = (i + j) % n;
            if (!g.has_edge(i, old) || g.degree(i) >= n - 1)
                continue;
            std::size_t w;
            do {
                w = static_cast<std::size_t>(rng.below(n));
            } while (w == i || g.has_edge(i, w));
            g.remove_edge(i, old);
            g.add_edge(i, w);
        }
    return g;
}

std::vector<Graph> gen_rewired_family(const Graph& base, std::size_t k, std::size_t n_rewire,
                                      std::uint64_t seed) {
    if (k == 0)
        throw_invalid("gen_rewired_family: k must be positive");
    const auto edges = base.edges();
    std::vector<std::pair<std::size_t, std::size_t>> non_edges;
    for (std::size_t i = 0; i < base.n_nodes(); ++i)
        for (std::size_t j = i + 1; j < base.n_nodes(); ++j)
            if (!base.has_edge(i, j))
                non_edges.emplace_back(i, j);
    if (n_rewire > edges.size() || n_rewire > non_edges.size())
        throw_invalid("gen_rewired_family: n_rewire exceeds available edges or non-edges");

    Rng rng(seed);
    // Partial Fisher-Yates: the first m entries become a uniform m-subset.
    auto pick = [&rng](auto pool, std::size_t m) {
        for (std::size_t t = 0; t < m; ++t) {
            const std::size_t r = t + static_cast<std::size_t>(rng.below(pool.size() - t));
            std::swap(pool[t], pool[r]);
        }
        pool.resize(m);
        return pool;
    };

    std::vector<Graph> family{base};
    for (std::size_t layer = 1; layer < k; ++layer) {
        Graph g = base;
        for (auto [i, j] : pick(edges, n_rewire))
            g.remove_edge(i, j);
        for (auto [i, j] : pick(non_edges, n_rewire))
            g.add_edge(i, j);
        family.push_back(std::move(g));
    }
    return family;
}

PrecisionGraph to_precision(const Graph& g, const PrecisionOptions& opt, std::uint64_t seed) {
    if (!(opt.weight_lo > 0.0) || !(opt.weight_hi >= opt.weight_lo))
        throw_invalid("to_precision: need 0 < weight_lo <= weight_hi");
    if (!(opt.diag_margin > 0.0))
        throw_invalid("to_precision: diag_margin must be positive");
    const std::size_t n = g.n_nodes();
    Rng rng(seed);
    Matrix s = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double u = rng.uniform(opt.weight_lo, opt.weight_hi);
            const double a = g.adjacency()(i, j);
            if (a != 0.0) {
                s(i, j) = -a * u;
                s(j, i) = -a * u;
            }
        }
    double shift = 0.0;
    if (n > 0 && !s.isZero(0.0))
        shift = std::abs(min_eigenvalue(SymMatrix(s)));
    s.diagonal().setConstant(shift + opt.diag_margin);
    return {g, SymMatrix(std::move(s))};
}

BlockPartition choose_hidden(std::size_t n, std::size_t n_hidden, std::uint64_t seed) {
    if (n_hidden >= n)
        throw_invalid("choose_hidden: n_hidden must be smaller than n");
    Rng rng(seed);
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t t = 0; t < n_hidden; ++t) {
        const std::size_t r = t + static_cast<std::size_t>(rng.below(n - t));
        std::swap(idx[t], idx[r]);
    }
    BlockPartition part;
    part.hidden.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_hidden));
    part.observed.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_hidden), idx.end());
    std::sort(part.hidden.begin(), part.hidden.end());
    std::sort(part.observed.begin(), part.observed.end());
    return part;
}

SymMatrix principal_submatrix(const SymMatrix& s, const std::vector<std::size_t>& idx) {
    const auto m = static_cast<Eigen::Index>(idx.size());
    Matrix out(m, m);
    for (Eigen::Index a = 0; a < m; ++a)
        for (Eigen::Index b = 0; b < m; ++b)
            out(a, b) = s(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(b)]);
    return SymMatrix(std::move(out));
}

BlockView block_view(const SymMatrix& s, const BlockPartition& part) {
    if (s.dim() != part.n_nodes())
        throw_invalid("block_view: matrix dimension does not match partition");
    part.validate(s.dim());
    const auto o = static_cast<Eigen::Index>(part.observed.size());
    const auto h = static_cast<Eigen::Index>(part.hidden.size());
    Matrix oh(o, h);
    for (Eigen::Index a = 0; a < o; ++a)
        for (Eigen::Index b = 0; b < h; ++b)
            oh(a, b) = s(part.observed[static_cast<std::size_t>(a)],
                         part.hidden[static_cast<std::size_t>(b)]);
    return {principal_submatrix(s, part.observed), std::move(oh),
            principal_submatrix(s, part.hidden)};
}

MarginalPrecision marginal_precision(const SymMatrix& s, const BlockPartition& part) {
    BlockView v = block_view(s, part);
    const auto o = static_cast<Eigen::Index>(part.observed.size());
    if (part.hidden.empty())
        return {v.observed, SymMatrix::zero(static_cast<std::size_t>(o))};
    Eigen::LLT<Matrix> llt(v.hidden.mat());
    if (llt.info() != Eigen::Success)
        throw_numerical("marginal_precision: hidden block is not positive definite");
    // P = S_OH S_H^{-1} S_HO = (L^{-1} S_HO)^T (L^{-1} S_HO)
    const Matrix half = llt.matrixL().solve(v.observed_hidden.transpose());
    SymMatrix p(Matrix(half.transpose() * half));
    return {v.observed - p, p};
}

}  // namespace ggm
