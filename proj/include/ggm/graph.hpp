#pragma once

#include "ggm/linalg.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace ggm {

/// Undirected graph over nodes 0..n-1. adjacency(i,j) > 0 iff (i,j) is an
/// edge; the diagonal is zero.
class Graph {
public:
    Graph() = default;
    explicit Graph(std::size_t n_nodes);
    /// Validates zero diagonal and nonnegative entries.
    explicit Graph(SymMatrix adjacency);

    std::size_t n_nodes() const noexcept { return adjacency_.dim(); }
    const SymMatrix& adjacency() const noexcept { return adjacency_; }

    bool has_edge(std::size_t i, std::size_t j) const { return adjacency_(i, j) != 0.0; }
    void add_edge(std::size_t i, std::size_t j, double weight = 1.0);
    void remove_edge(std::size_t i, std::size_t j);

    std::size_t edge_count() const;
    std::size_t degree(std::size_t i) const;
    /// Edges as (i, j) with i < j, lexicographic.
    std::vector<std::pair<std::size_t, std::size_t>> edges() const;

private:
    SymMatrix adjacency_;
};

/// Number of unordered pairs that are an edge in exactly one of the graphs.
std::size_t support_difference(const Graph& a, const Graph& b);

struct PrecisionGraph {
    Graph graph;
    SymMatrix precision;
};

/// Observed and hidden node indices; the observed block comes first in
/// every block view.
struct BlockPartition {
    std::vector<std::size_t> observed;
    std::vector<std::size_t> hidden;

    std::size_t n_nodes() const { return observed.size() + hidden.size(); }
    /// observed followed by hidden.
    std::vector<std::size_t> permutation() const;
    /// Throws InvalidInput unless observed/hidden partition 0..n-1 and
    /// |observed| >= 1.
    void validate(std::size_t n) const;
    /// True when hidden nodes are not a clear minority (|H| >= |O|).
    bool violates_mostly_observed() const { return hidden.size() >= observed.size(); }
};

struct MultiLayerFamily {
    std::vector<PrecisionGraph> layers;
    BlockPartition partition;
    /// support_difference between layers k < k', packed row-major.
    std::vector<std::size_t> pair_support_difference;
};

Graph gen_erdos_renyi(std::size_t n, double p, std::uint64_t seed);

/// Watts-Strogatz: ring lattice with `neighbors` (even) nearest neighbours,
/// then each lattice edge (i, i+j) is rewired to (i, w) with probability
/// rewire_p, w uniform among nodes that avoid self-loops and duplicates.
Graph gen_small_world(std::size_t n, std::size_t neighbors, double rewire_p,
                      std::uint64_t seed);

/// base followed by k-1 variants, each removing n_rewire uniformly chosen
/// edges of base and adding n_rewire uniformly chosen non-edges of base.
std::vector<Graph> gen_rewired_family(const Graph& base, std::size_t k,
                                      std::size_t n_rewire, std::uint64_t seed);

struct PrecisionOptions {
    double weight_lo = 0.5;
    double weight_hi = 1.0;
    double diag_margin = 0.1;
};

/// Off-diagonal S_ij = -A_ij u_ij with u_ij ~ U(lo, hi), diagonal set to
/// |lambda_min(offdiag)| + diag_margin. One uniform is drawn for every pair
/// i < j in a fixed order whether or not it is an edge, so layers built from
/// the same seed agree on the weights of their shared edges.
PrecisionGraph to_precision(const Graph& g, const PrecisionOptions& opt, std::uint64_t seed);

BlockPartition choose_hidden(std::size_t n, std::size_t n_hidden, std::uint64_t seed);

struct BlockView {
    SymMatrix observed;            // S_O
    Matrix observed_hidden;        // S_OH
    SymMatrix hidden;              // S_H
};

BlockView block_view(const SymMatrix& s, const BlockPartition& part);

/// Symmetric submatrix on the given (ordered) indices.
SymMatrix principal_submatrix(const SymMatrix& s, const std::vector<std::size_t>& idx);

struct MarginalPrecision {
    SymMatrix observed_precision;  // K_O = S_O - P
    SymMatrix latent_effect;       // P = S_OH S_H^{-1} S_HO
};

MarginalPrecision marginal_precision(const SymMatrix& s, const BlockPartition& part);

}  // namespace ggm
