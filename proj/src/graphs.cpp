#include "fgcp/graphs.hpp"

#include "fgcp/errors.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <tuple>

namespace fgcp {

const char* to_string(TreeKind kind) {
    switch (kind) {
        case TreeKind::mst: return "mst";
        case TreeKind::mdp: return "mdp";
        case TreeKind::nnl: return "nnl";
    }
    return "?";
}

TreeKind tree_kind_from_string(const std::string& name) {
    if (name == "mst") return TreeKind::mst;
    if (name == "mdp") return TreeKind::mdp;
    if (name == "nnl") return TreeKind::nnl;
    throw std::invalid_argument("unknown tree kind: " + name);
}

std::vector<Edge> SimilarityGraph::tree(int t) const {
    return {edges.begin() + tree_offsets.at(t), edges.begin() + tree_offsets.at(t + 1)};
}

std::vector<int> SimilarityGraph::degrees() const {
    std::vector<int> deg(static_cast<std::size_t>(n), 0);
    for (const auto& [a, b] : edges) {
        ++deg[static_cast<std::size_t>(a)];
        ++deg[static_cast<std::size_t>(b)];
    }
    return deg;
}

int max_feasible_trees(int n) { return n / 2; }

namespace {

void check_input(const Matrix& d) {
    if (d.rows() != d.cols() || d.rows() < 2)
        throw std::invalid_argument("graph builder: need a square distance matrix with n >= 2");
}

// All pairs (i<j) ordered by (distance, i, j); the lexicographic
// tie-break makes every builder deterministic.
std::vector<Edge> sorted_pairs(const Matrix& d) {
    const int n = static_cast<int>(d.rows());
    std::vector<Edge> pairs;
    pairs.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    std::stable_sort(pairs.begin(), pairs.end(), [&d](const Edge& x, const Edge& y) {
        return std::make_tuple(d(x.first, x.second), x.first, x.second) <
               std::make_tuple(d(y.first, y.second), y.first, y.second);
    });
    return pairs;
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[static_cast<std::size_t>(b)] = a;
        return true;
    }
};

using EdgeSet = std::set<Edge>;

// One Kruskal pass over the unused pairs; exact for MST since greedy
// is optimal for spanning trees.
std::vector<Edge> mst_round(const Matrix& d, const std::vector<Edge>& order,
                            const EdgeSet& used, int round) {
    const int n = static_cast<int>(d.rows());
    UnionFind uf(n);
    std::vector<Edge> tree;
    tree.reserve(static_cast<std::size_t>(n - 1));
    for (const Edge& e : order) {
        if (used.count(e)) continue;
        if (uf.unite(e.first, e.second)) {
            tree.push_back(e);
            if (static_cast<int>(tree.size()) == n - 1) break;
        }
    }
    if (static_cast<int>(tree.size()) != n - 1)
        throw CapacityError(round, "cannot complete spanning tree " + std::to_string(round) +
                                       ": not enough unused edges");
    return tree;
}

// Greedy pairing: repeatedly match the globally closest unmatched pair.
// For odd n the leftover vertex is the one matched to the zero-distance
// pseudo-observation; that match contributes no edge.
std::vector<Edge> mdp_round(const Matrix& d, const std::vector<Edge>& order,
                            const EdgeSet& used, int round) {
    const int n = static_cast<int>(d.rows());
    const int want = n / 2;
    std::vector<char> matched(static_cast<std::size_t>(n), 0);
    std::vector<Edge> pairs;
    pairs.reserve(static_cast<std::size_t>(want));
    for (const Edge& e : order) {
        if (static_cast<int>(pairs.size()) == want) break;
        if (matched[static_cast<std::size_t>(e.first)] ||
            matched[static_cast<std::size_t>(e.second)])
            continue;
        if (used.count(e)) continue;
        matched[static_cast<std::size_t>(e.first)] = 1;
        matched[static_cast<std::size_t>(e.second)] = 1;
        pairs.push_back(e);
    }
    if (static_cast<int>(pairs.size()) != want)
        throw CapacityError(round, "cannot complete pairing round " + std::to_string(round) +
                                       ": remaining vertices share no unused edge");
    std::sort(pairs.begin(), pairs.end());
    return pairs;
}

// Links every vertex to its `neighbors` nearest vertices among unused
// edges; distance ties resolve to the lowest index.
std::vector<Edge> nnl_round(const Matrix& d, int neighbors, const EdgeSet& used, int round) {
    const int n = static_cast<int>(d.rows());
    EdgeSet tree_set;
    for (int i = 0; i < n; ++i) {
        std::vector<int> cand;
        cand.reserve(static_cast<std::size_t>(n - 1));
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            Edge e{std::min(i, j), std::max(i, j)};
            if (!used.count(e)) cand.push_back(j);
        }
        if (static_cast<int>(cand.size()) < neighbors)
            throw CapacityError(round, "cannot complete nearest-neighbour round " +
                                           std::to_string(round) + ": vertex " +
                                           std::to_string(i + 1) + " has too few unused edges");
        std::partial_sort(cand.begin(), cand.begin() + neighbors, cand.end(),
                          [&](int a, int b) {
                              return std::make_pair(d(i, a), a) < std::make_pair(d(i, b), b);
                          });
        for (int t = 0; t < neighbors; ++t)
            tree_set.insert({std::min(i, cand[static_cast<std::size_t>(t)]),
                             std::max(i, cand[static_cast<std::size_t>(t)])});
    }
    return {tree_set.begin(), tree_set.end()};
}

SimilarityGraph assemble(int n, TreeKind kind, std::vector<std::vector<Edge>> trees) {
    SimilarityGraph g;
    g.n = n;
    g.kind = kind;
    g.k_trees = static_cast<int>(trees.size());
    g.tree_offsets.push_back(0);
    for (auto& t : trees) {
        std::sort(t.begin(), t.end());
        g.edges.insert(g.edges.end(), t.begin(), t.end());
        g.tree_offsets.push_back(static_cast<int>(g.edges.size()));
    }
    return g;
}

std::vector<std::vector<Edge>> build_trees(const Matrix& d, TreeKind kind, int k_trees,
                                           int neighbors) {
    check_input(d);
    const int n = static_cast<int>(d.rows());
    if (k_trees < 1) throw std::invalid_argument("k_trees must be >= 1");
    if (k_trees > max_feasible_trees(n))
        throw CapacityError(max_feasible_trees(n) + 1,
                            "orthogonal tree " + std::to_string(max_feasible_trees(n) + 1) +
                                " is infeasible for n=" + std::to_string(n) +
                                " (at most " + std::to_string(max_feasible_trees(n)) +
                                " edge-disjoint trees)");
    std::vector<Edge> order;
    if (kind != TreeKind::nnl) order = sorted_pairs(d);
    EdgeSet used;
    std::vector<std::vector<Edge>> trees;
    trees.reserve(static_cast<std::size_t>(k_trees));
    for (int round = 1; round <= k_trees; ++round) {
        std::vector<Edge> t;
        switch (kind) {
            case TreeKind::mst: t = mst_round(d, order, used, round); break;
            case TreeKind::mdp: t = mdp_round(d, order, used, round); break;
            case TreeKind::nnl: t = nnl_round(d, neighbors, used, round); break;
        }
        used.insert(t.begin(), t.end());
        trees.push_back(std::move(t));
    }
    return trees;
}

}  // namespace

SimilarityGraph build_mst(const Matrix& d) {
    return assemble(static_cast<int>(d.rows()), TreeKind::mst,
                    build_trees(d, TreeKind::mst, 1, 1));
}

SimilarityGraph build_mdp(const Matrix& d) {
    return assemble(static_cast<int>(d.rows()), TreeKind::mdp,
                    build_trees(d, TreeKind::mdp, 1, 1));
}

SimilarityGraph build_nnl(const Matrix& d, int neighbors) {
    check_input(d);
    const int n = static_cast<int>(d.rows());
    if (neighbors < 1 || neighbors > n - 1)
        throw std::invalid_argument("build_nnl: neighbors must lie in [1, n-1]");
    return assemble(n, TreeKind::nnl, build_trees(d, TreeKind::nnl, 1, neighbors));
}

SimilarityGraph build_k_graph(const Matrix& d, TreeKind kind, int k_trees) {
    return assemble(static_cast<int>(d.rows()), kind, build_trees(d, kind, k_trees, 1));
}

}
