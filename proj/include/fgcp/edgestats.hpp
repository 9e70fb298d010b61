#pragma once

#include "fgcp/graphs.hpp"

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fgcp {

enum class StatisticKind { original, weighted, generalized, maxtype };

inline constexpr std::array<StatisticKind, 4> kAllStatistics = {
    StatisticKind::original, StatisticKind::weighted, StatisticKind::generalized,
    StatisticKind::maxtype};

const char* to_string(StatisticKind kind);
StatisticKind statistic_kind_from_string(const std::string& name);

/// Edge counts for the split after position k: r0 between the groups,
/// r1 within {1..k}, r2 within {k+1..n}. r0+r1+r2 == |G|.
struct EdgeCounts {
    int k = 0;
    long long r0 = 0, r1 = 0, r2 = 0;
};

/// Exact first and second moments of the edge counts when vertex labels
/// are a uniform random permutation and the edge set is fixed.
struct NullMoments {
    int n = 0, k = 0;
    double mean_r0 = 0, var_r0 = 0;
    double mean_r1 = 0, mean_r2 = 0;
    double var_r1 = 0, var_r2 = 0, cov_r1r2 = 0;
    double mean_rw = 0, var_rw = 0;
    double mean_rd = 0, var_rd = 0;

    Eigen::Matrix2d sigma_r() const {
        Eigen::Matrix2d s;
        s << var_r1, cov_r1r2, cov_r1r2, var_r2;
        return s;
    }
};

EdgeCounts edge_counts(const SimilarityGraph& g, int k);
NullMoments null_moments(const SimilarityGraph& g, int k);

namespace detail {

// Per-split constants for O(1) statistic evaluation from raw counts;
// an inverse standard deviation of 0 marks the piece non-evaluable.
struct SplitEval {
    double mean_r0 = 0, inv_sd_r0 = 0;
    double mean_r1 = 0, mean_r2 = 0;
    double w1 = 0, w2 = 0;
    double mean_rw = 0, inv_sd_rw = 0;
    double mean_rd = 0, inv_sd_rd = 0;
    double s11 = 0, s12 = 0, s22 = 0;  // pseudo-inverse of sigma_R
    bool gen_ok = false;
};

SplitEval make_split_eval(const NullMoments& m, int n, long long edges);
double eval_kind(StatisticKind kind, const SplitEval& e, double r0, double r1, double r2);

}  // namespace detail

// Centered/standardized statistics; nullopt marks k non-evaluable
// (zero variance, or rank-0 sigma_R for the generalized statistic).
std::optional<double> stat_original(const EdgeCounts& c, const NullMoments& m);
std::optional<double> stat_weighted(const EdgeCounts& c, const NullMoments& m);
std::optional<double> stat_generalized(const EdgeCounts& c, const NullMoments& m);
std::optional<double> stat_maxtype(const EdgeCounts& c, const NullMoments& m);
std::optional<double> evaluate_statistic(StatisticKind kind, const EdgeCounts& c,
                                         const NullMoments& m);

/// Scan of one statistic over k in [n0, n1]: per-split trace (NaN where
/// non-evaluable), argmax location (smallest k on ties) and max value.
struct ScanResult {
    StatisticKind kind = StatisticKind::maxtype;
    int n0 = 0, n1 = 0;
    std::vector<double> trace;  // trace[k - n0]
    int k_hat = 0;
    double t_n = 0;
};

/// Default scan window: k in [max(2, ceil(lo*n)), min(n-2, floor(hi*n))].
std::pair<int, int> default_window(int n, double lo = 0.05, double hi = 0.95);

ScanResult scan(const SimilarityGraph& g, StatisticKind kind, int n0, int n1);

/// Caches adjacency and per-split null moments for a fixed graph and
/// window, then evaluates statistics under arbitrary vertex labelings.
/// Labels enter as a permutation perm with perm[v] = time position of
/// vertex v (0-based); an empty span means the identity labeling.
class ScanEngine {
public:
    ScanEngine(const SimilarityGraph& g, int n0, int n1);

    int n() const { return n_; }
    int n0() const { return n0_; }
    int n1() const { return n1_; }
    const NullMoments& moments(int k) const { return moments_[static_cast<std::size_t>(k - n0_)]; }
    bool any_evaluable(StatisticKind kind) const;

    /// Edge counts at every k in [n0, n1] under the given labeling.
    std::vector<EdgeCounts> counts(std::span<const int> perm = {}) const;

    ScanResult scan(StatisticKind kind, std::span<const int> perm = {}) const;

    /// Window maxima of all four statistics in one sweep; NaN when a
    /// statistic has no evaluable split.
    std::array<double, 4> max_all(std::span<const int> perm = {}) const;

private:
    int n_ = 0, n0_ = 0, n1_ = 0;
    std::vector<int> adj_flat_;    // neighbor lists, concatenated
    std::vector<int> adj_start_;   // size n+1
    long long edge_count_ = 0;
    std::vector<NullMoments> moments_;
    std::vector<detail::SplitEval> splits_;

    template <typename Visitor>
    void sweep(std::span<const int> perm, Visitor&& visit) const;
};

}
