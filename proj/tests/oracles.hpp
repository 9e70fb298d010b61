// Independent brute-force oracles used to pin expected values. These
// deliberately avoid the library's own computation paths.
#pragma once

#include "fgcp/edgestats.hpp"
#include "fgcp/fdata.hpp"
#include "fgcp/graphs.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

struct EnumMoments {
    double mean_r0 = 0, var_r0 = 0;
    double mean_r1 = 0, var_r1 = 0;
    double mean_r2 = 0, var_r2 = 0;
    double cov_r1r2 = 0;
    double mean_rw = 0, var_rw = 0;
    double mean_rd = 0, var_rd = 0;
};

// Exhaustive moments over all n! vertex-label permutations. Counts are
// small integers, so the double accumulators stay exact; the weighted
// count is accumulated through its integer numerator (n-2)*Rw.
inline EnumMoments enumerate_moments(const fgcp::SimilarityGraph& g, int k) {
    const int n = g.n;
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    double cnt = 0;
    double s0 = 0, s0sq = 0, s1 = 0, s1sq = 0, s2 = 0, s2sq = 0, s12 = 0;
    double sw = 0, swsq = 0, sd = 0, sdsq = 0;
    const double w1 = n - k - 1, w2 = k - 1;  // numerators of the Rw weights
    do {
        long long r0 = 0, r1 = 0, r2 = 0;
        for (const auto& [a, b] : g.edges) {
            const bool a1 = perm[static_cast<std::size_t>(a)] < k;
            const bool b1 = perm[static_cast<std::size_t>(b)] < k;
            if (a1 && b1)
                ++r1;
            else if (!a1 && !b1)
                ++r2;
            else
                ++r0;
        }
        const double nw = w1 * static_cast<double>(r1) + w2 * static_cast<double>(r2);
        const double nd = static_cast<double>(r1 - r2);
        s0 += static_cast<double>(r0);
        s0sq += static_cast<double>(r0) * static_cast<double>(r0);
        s1 += static_cast<double>(r1);
        s1sq += static_cast<double>(r1) * static_cast<double>(r1);
        s2 += static_cast<double>(r2);
        s2sq += static_cast<double>(r2) * static_cast<double>(r2);
        s12 += static_cast<double>(r1) * static_cast<double>(r2);
        sw += nw;
        swsq += nw * nw;
        sd += nd;
        sdsq += nd * nd;
        cnt += 1;
    } while (std::next_permutation(perm.begin(), perm.end()));

    EnumMoments e;
    e.mean_r0 = s0 / cnt;
    e.var_r0 = s0sq / cnt - e.mean_r0 * e.mean_r0;
    e.mean_r1 = s1 / cnt;
    e.var_r1 = s1sq / cnt - e.mean_r1 * e.mean_r1;
    e.mean_r2 = s2 / cnt;
    e.var_r2 = s2sq / cnt - e.mean_r2 * e.mean_r2;
    e.cov_r1r2 = s12 / cnt - e.mean_r1 * e.mean_r2;
    const double den = n - 2;
    if (n >= 3) {
        e.mean_rw = (sw / cnt) / den;
        e.var_rw = (swsq / cnt - (sw / cnt) * (sw / cnt)) / (den * den);
    }
    e.mean_rd = sd / cnt;
    e.var_rd = sdsq / cnt - e.mean_rd * e.mean_rd;
    return e;
}

// Minimum spanning-tree weight by enumerating every labeled tree on n
// vertices through its Pruefer sequence (n^(n-2) trees).
inline double brute_force_mst_weight(const Eigen::MatrixXd& d) {
    const int n = static_cast<int>(d.rows());
    if (n == 2) return d(0, 1);
    const int len = n - 2;
    std::vector<int> seq(static_cast<std::size_t>(len), 0);
    double best = std::numeric_limits<double>::infinity();
    while (true) {
        // decode the Pruefer sequence
        std::vector<int> degree(static_cast<std::size_t>(n), 1);
        for (int s : seq) ++degree[static_cast<std::size_t>(s)];
        double w = 0;
        std::vector<int> deg = degree;
        std::vector<char> used(static_cast<std::size_t>(n), 0);
        for (int s : seq) {
            int leaf = -1;
            for (int v = 0; v < n; ++v)
                if (deg[static_cast<std::size_t>(v)] == 1 && !used[static_cast<std::size_t>(v)]) {
                    leaf = v;
                    break;
                }
            w += d(leaf, s);
            used[static_cast<std::size_t>(leaf)] = 1;
            --deg[static_cast<std::size_t>(s)];
        }
        int u = -1, v = -1;
        for (int x = 0; x < n; ++x)
            if (!used[static_cast<std::size_t>(x)] && deg[static_cast<std::size_t>(x)] == 1) {
                if (u < 0)
                    u = x;
                else
                    v = x;
            }
        w += d(u, v);
        best = std::min(best, w);

        int pos = len - 1;
        while (pos >= 0 && seq[static_cast<std::size_t>(pos)] == n - 1) {
            seq[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) break;
        ++seq[static_cast<std::size_t>(pos)];
    }
    return best;
}

// Minimum-weight perfect matching (even n <= 8) by recursion.
inline double optimal_matching_weight(const Eigen::MatrixXd& d, std::vector<char>& taken) {
    const int n = static_cast<int>(d.rows());
    int first = -1;
    for (int i = 0; i < n; ++i)
        if (!taken[static_cast<std::size_t>(i)]) {
            first = i;
            break;
        }
    if (first < 0) return 0.0;
    taken[static_cast<std::size_t>(first)] = 1;
    double best = std::numeric_limits<double>::infinity();
    for (int j = first + 1; j < n; ++j) {
        if (taken[static_cast<std::size_t>(j)]) continue;
        taken[static_cast<std::size_t>(j)] = 1;
        best = std::min(best, d(first, j) + optimal_matching_weight(d, taken));
        taken[static_cast<std::size_t>(j)] = 0;
    }
    taken[static_cast<std::size_t>(first)] = 0;
    return best;
}

inline double optimal_matching_weight(const Eigen::MatrixXd& d) {
    std::vector<char> taken(static_cast<std::size_t>(d.rows()), 0);
    return optimal_matching_weight(d, taken);
}

// Random symmetric distance matrix with zero diagonal.
inline Eigen::MatrixXd random_distances(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.05, 1.0);
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) d(i, j) = d(j, i) = unif(rng);
    return d;
}

// Random functional sample: iid standard normal values on a uniform grid.
inline fgcp::FunctionalSample random_sample(int n, int m, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd curves(n, m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) curves(i, j) = normal(rng);
    return fgcp::FunctionalSample(std::move(curves), fgcp::uniform_grid(m));
}

// Builds a SimilarityGraph directly from an edge list (test fixture).
inline fgcp::SimilarityGraph make_graph(int n, std::vector<fgcp::Edge> edges) {
    fgcp::SimilarityGraph g;
    g.n = n;
    g.k_trees = 1;
    std::sort(edges.begin(), edges.end());
    g.edges = std::move(edges);
    g.tree_offsets = {0, static_cast<int>(g.edges.size())};
    return g;
}

}  // namespace oracle
