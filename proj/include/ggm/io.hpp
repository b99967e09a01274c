#pragma once

#include "ggm/graph.hpp"
#include "ggm/linalg.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace ggm {

/// Subset of the Pajek .net format: *Network (ignored), *Vertices, *Edges,
/// *Arcs. Indices are stored 0-based.
struct PajekNetwork {
    struct Link {
        std::size_t from;
        std::size_t to;
        double weight;
        bool directed;
    };

    std::size_t n_vertices = 0;
    std::vector<std::string> labels;  // empty string when unlabeled
    std::vector<Link> links;

    /// Undirected graph: arcs are symmetrized, parallel links keep the
    /// largest weight, self-loops and zero weights are dropped. With
    /// binarize every edge gets weight 1.
    Graph to_graph(bool binarize = false) const;
};

PajekNetwork parse_pajek(std::string_view text);
PajekNetwork read_pajek_file(const std::string& path);

/// Plain edge list: first non-comment line is the node count, then one
/// "i j [weight]" line per undirected edge (1-based). '#' starts a comment.
struct EdgeListFile {
    struct Edge {
        std::size_t i;
        std::size_t j;
        double weight;
    };
    std::size_t n_nodes = 0;
    std::vector<Edge> edges;  // 1-based, as in the file

    Graph to_graph(bool binarize = false) const;
};

EdgeListFile parse_edge_list(std::string_view text);

/// One graph per path, in order. Files ending in .net are read as Pajek,
/// anything else as an edge list. All files must declare the same node count.
std::vector<Graph> load_multilayer(const std::vector<std::string>& paths, bool binarize = false);

/// Dense CSV with 17 significant digits; reading back is bit-exact.
void write_matrix_csv(const SymMatrix& m, const std::string& path);
SymMatrix read_matrix_csv(const std::string& path);
SymMatrix parse_matrix_csv(std::string_view text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace ggm
