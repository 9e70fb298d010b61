#pragma once

#include "fgcp/fdata.hpp"

#include <string>
#include <utility>
#include <vector>

namespace fgcp {

enum class TreeKind { mst, mdp, nnl };

const char* to_string(TreeKind kind);
TreeKind tree_kind_from_string(const std::string& name);

// Undirected edge, endpoints 0-based with first < second.
using Edge = std::pair<int, int>;

/// Simple undirected graph over n vertices, possibly the union of
/// k_trees pairwise edge-disjoint trees. Edges of tree t occupy
/// [tree_offsets[t], tree_offsets[t+1]) and are sorted lexicographically.
struct SimilarityGraph {
    int n = 0;
    TreeKind kind = TreeKind::mst;
    int k_trees = 1;
    std::vector<Edge> edges;
    std::vector<int> tree_offsets;  // size k_trees + 1

    int edge_count() const { return static_cast<int>(edges.size()); }
    std::vector<Edge> tree(int t) const;
    std::vector<int> degrees() const;
};

// Largest K for which an orthogonal K-tree construction is attempted;
// matches the feasibility pattern of the reference experiments (MST:
// K_n contains exactly floor(n/2) edge-disjoint spanning trees).
int max_feasible_trees(int n);

SimilarityGraph build_mst(const Matrix& d);
SimilarityGraph build_mdp(const Matrix& d);
SimilarityGraph build_nnl(const Matrix& d, int neighbors = 1);
SimilarityGraph build_k_graph(const Matrix& d, TreeKind kind, int k_trees);

inline SimilarityGraph build_mst(const DistanceMatrix& d) { return build_mst(d.d); }
inline SimilarityGraph build_mdp(const DistanceMatrix& d) { return build_mdp(d.d); }
inline SimilarityGraph build_nnl(const DistanceMatrix& d, int neighbors = 1) {
    return build_nnl(d.d, neighbors);
}
inline SimilarityGraph build_k_graph(const DistanceMatrix& d, TreeKind kind, int k_trees) {
    return build_k_graph(d.d, kind, k_trees);
}

}
