#include "fgcp/edgestats.hpp"

#include "fgcp/errors.hpp"

#include <cmath>
#include <limits>

namespace fgcp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double falling(double x, int r) {
    double out = 1.0;
    for (int i = 0; i < r; ++i) out *= (x - i);
    return out;
}

// Variance is treated as zero (split non-evaluable) below this level;
// the closed forms produce exact zeros at degenerate splits, so the
// threshold only has to absorb rounding of O(|G|^2) intermediates.
double var_floor(long long edges) {
    return 1e-9 * std::max(1.0, static_cast<double>(edges));
}

struct GraphShape {
    int n = 0;
    long long edges = 0;
    double shared_pairs2 = 0;  // ordered pairs of distinct edges sharing a vertex
};

GraphShape graph_shape(const SimilarityGraph& g) {
    GraphShape s;
    s.n = g.n;
    s.edges = g.edge_count();
    double cherries = 0;  // sum_i d_i (d_i - 1) / 2
    for (int deg : g.degrees()) cherries += 0.5 * deg * (deg - 1);
    s.shared_pairs2 = 2.0 * cherries;
    return s;
}

NullMoments moments_from_shape(const GraphShape& s, int k) {
    const double n = s.n;
    const double a = k;
    const double b = n - k;
    const double m = static_cast<double>(s.edges);
    const double shared = s.shared_pairs2;
    const double disjoint = m * (m - 1) - shared;

    NullMoments out;
    out.n = s.n;
    out.k = k;

    const double n2 = falling(n, 2), n3 = falling(n, 3), n4 = falling(n, 4);
    const double p_cross = 2.0 * a * b / n2;
    const double p_in1 = falling(a, 2) / n2;
    const double p_in2 = falling(b, 2) / n2;

    out.mean_r0 = m * p_cross;
    out.mean_r1 = m * p_in1;
    out.mean_r2 = m * p_in2;

    // Second moments decompose over ordered edge pairs: identical,
    // sharing one vertex, or vertex-disjoint.
    double e_r0sq = m * p_cross;
    double e_r1sq = m * p_in1;
    double e_r2sq = m * p_in2;
    double e_r1r2 = 0;
    if (shared > 0) {
        e_r0sq += shared * (a * b * (b - 1) + b * a * (a - 1)) / n3;
        e_r1sq += shared * falling(a, 3) / n3;
        e_r2sq += shared * falling(b, 3) / n3;
    }
    if (disjoint > 0) {
        e_r0sq += disjoint * 4.0 * a * b * (a - 1) * (b - 1) / n4;
        e_r1sq += disjoint * falling(a, 4) / n4;
        e_r2sq += disjoint * falling(b, 4) / n4;
        e_r1r2 += disjoint * falling(a, 2) * falling(b, 2) / n4;
    }

    out.var_r0 = std::max(0.0, e_r0sq - out.mean_r0 * out.mean_r0);
    out.var_r1 = std::max(0.0, e_r1sq - out.mean_r1 * out.mean_r1);
    out.var_r2 = std::max(0.0, e_r2sq - out.mean_r2 * out.mean_r2);
    out.cov_r1r2 = e_r1r2 - out.mean_r1 * out.mean_r2;

    if (s.n >= 3) {
        const double w1 = (b - 1) / (n - 2);
        const double w2 = (a - 1) / (n - 2);
        out.mean_rw = w1 * out.mean_r1 + w2 * out.mean_r2;
        out.var_rw = std::max(0.0, w1 * w1 * out.var_r1 + w2 * w2 * out.var_r2 +
                                       2.0 * w1 * w2 * out.cov_r1r2);
    }
    out.mean_rd = out.mean_r1 - out.mean_r2;
    out.var_rd = std::max(0.0, out.var_r1 + out.var_r2 - 2.0 * out.cov_r1r2);
    return out;
}

}  // namespace

namespace detail {

SplitEval make_split_eval(const NullMoments& m, int n, long long edges) {
    SplitEval e;
    const double tol = var_floor(edges);
    e.mean_r0 = m.mean_r0;
    e.mean_r1 = m.mean_r1;
    e.mean_r2 = m.mean_r2;
    e.mean_rw = m.mean_rw;
    e.mean_rd = m.mean_rd;
    if (m.var_r0 > tol) e.inv_sd_r0 = 1.0 / std::sqrt(m.var_r0);
    if (n >= 3) {
        e.w1 = (static_cast<double>(n - m.k) - 1) / (static_cast<double>(n) - 2);
        e.w2 = (static_cast<double>(m.k) - 1) / (static_cast<double>(n) - 2);
        if (m.var_rw > tol) e.inv_sd_rw = 1.0 / std::sqrt(m.var_rw);
    }
    if (m.var_rd > tol) e.inv_sd_rd = 1.0 / std::sqrt(m.var_rd);

    // Pseudo-inverse of the 2x2 covariance with a 1e-12 relative cut
    // on its eigenvalues; rank 0 marks the split non-evaluable.
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(m.sigma_r());
    const Eigen::Vector2d lam = es.eigenvalues();
    const double lmax = std::max(lam(1), 0.0);
    if (lmax > tol) {
        Eigen::Matrix2d pinv = Eigen::Matrix2d::Zero();
        for (int i = 0; i < 2; ++i) {
            if (lam(i) > 1e-12 * lmax) {
                const Eigen::Vector2d q = es.eigenvectors().col(i);
                pinv += q * q.transpose() / lam(i);
            }
        }
        e.s11 = pinv(0, 0);
        e.s12 = pinv(0, 1);
        e.s22 = pinv(1, 1);
        e.gen_ok = true;
    }
    return e;
}

namespace {

inline double eval_original(const SplitEval& e, double r0) {
    return e.inv_sd_r0 > 0 ? -(r0 - e.mean_r0) * e.inv_sd_r0 : kNaN;
}
inline double eval_weighted(const SplitEval& e, double r1, double r2) {
    if (e.inv_sd_rw <= 0) return kNaN;
    return (e.w1 * r1 + e.w2 * r2 - e.mean_rw) * e.inv_sd_rw;
}
inline double eval_generalized(const SplitEval& e, double r1, double r2) {
    if (!e.gen_ok) return kNaN;
    const double x1 = r1 - e.mean_r1, x2 = r2 - e.mean_r2;
    return x1 * x1 * e.s11 + 2.0 * x1 * x2 * e.s12 + x2 * x2 * e.s22;
}
inline double eval_maxtype(const SplitEval& e, double r1, double r2) {
    if (e.inv_sd_rw <= 0 || e.inv_sd_rd <= 0) return kNaN;
    const double zw = (e.w1 * r1 + e.w2 * r2 - e.mean_rw) * e.inv_sd_rw;
    const double zd = (r1 - r2 - e.mean_rd) * e.inv_sd_rd;
    return std::max(zw, std::abs(zd));
}

}  // namespace

double eval_kind(StatisticKind kind, const SplitEval& e, double r0, double r1, double r2) {
    switch (kind) {
        case StatisticKind::original: return eval_original(e, r0);
        case StatisticKind::weighted: return eval_weighted(e, r1, r2);
        case StatisticKind::generalized: return eval_generalized(e, r1, r2);
        case StatisticKind::maxtype: return eval_maxtype(e, r1, r2);
    }
    return kNaN;
}

}  // namespace detail

const char* to_string(StatisticKind kind) {
    switch (kind) {
        case StatisticKind::original: return "original";
        case StatisticKind::weighted: return "weighted";
        case StatisticKind::generalized: return "generalized";
        case StatisticKind::maxtype: return "maxtype";
    }
    return "?";
}

StatisticKind statistic_kind_from_string(const std::string& name) {
    if (name == "original") return StatisticKind::original;
    if (name == "weighted") return StatisticKind::weighted;
    if (name == "generalized") return StatisticKind::generalized;
    if (name == "maxtype") return StatisticKind::maxtype;
    throw std::invalid_argument("unknown statistic kind: " + name);
}

EdgeCounts edge_counts(const SimilarityGraph& g, int k) {
    if (k < 1 || k >= g.n) throw std::invalid_argument("edge_counts: k must lie in [1, n-1]");
    EdgeCounts c;
    c.k = k;
    for (const auto& [a, b] : g.edges) {
        const bool a1 = a < k, b1 = b < k;  // 0-based: observation index < k is in group 1
        if (a1 && b1)
            ++c.r1;
        else if (!a1 && !b1)
            ++c.r2;
        else
            ++c.r0;
    }
    return c;
}

NullMoments null_moments(const SimilarityGraph& g, int k) {
    if (k < 1 || k >= g.n) throw std::invalid_argument("null_moments: k must lie in [1, n-1]");
    return moments_from_shape(graph_shape(g), k);
}

std::optional<double> evaluate_statistic(StatisticKind kind, const EdgeCounts& c,
                                         const NullMoments& m) {
    if (c.k != m.k) throw std::invalid_argument("evaluate_statistic: counts/moments k mismatch");
    const detail::SplitEval e = detail::make_split_eval(m, m.n, c.r0 + c.r1 + c.r2);
    const double v = detail::eval_kind(kind, e, static_cast<double>(c.r0),
                                       static_cast<double>(c.r1), static_cast<double>(c.r2));
    if (!std::isfinite(v)) return std::nullopt;
    return v;
}

std::optional<double> stat_original(const EdgeCounts& c, const NullMoments& m) {
    return evaluate_statistic(StatisticKind::original, c, m);
}
std::optional<double> stat_weighted(const EdgeCounts& c, const NullMoments& m) {
    return evaluate_statistic(StatisticKind::weighted, c, m);
}
std::optional<double> stat_generalized(const EdgeCounts& c, const NullMoments& m) {
    return evaluate_statistic(StatisticKind::generalized, c, m);
}
std::optional<double> stat_maxtype(const EdgeCounts& c, const NullMoments& m) {
    return evaluate_statistic(StatisticKind::maxtype, c, m);
}

std::pair<int, int> default_window(int n, double lo, double hi) {
    // the 1e-7 guard keeps e.g. ceil(0.05*40) == 2 despite binary rounding
    int n0 = std::max(2, static_cast<int>(std::ceil(lo * n - 1e-7)));
    int n1 = std::min(n - 2, static_cast<int>(std::floor(hi * n + 1e-7)));
    return {n0, n1};
}

ScanEngine::ScanEngine(const SimilarityGraph& g, int n0, int n1) : n_(g.n), n0_(n0), n1_(n1) {
    if (n0 < 1 || n0 > n1 || n1 >= g.n)
        throw std::invalid_argument("scan window must satisfy 1 <= n0 <= n1 < n");
    // adjacency in CSR form
    std::vector<int> deg(static_cast<std::size_t>(n_), 0);
    for (const auto& [a, b] : g.edges) {
        ++deg[static_cast<std::size_t>(a)];
        ++deg[static_cast<std::size_t>(b)];
    }
    adj_start_.assign(static_cast<std::size_t>(n_) + 1, 0);
    for (int v = 0; v < n_; ++v)
        adj_start_[static_cast<std::size_t>(v) + 1] =
            adj_start_[static_cast<std::size_t>(v)] + deg[static_cast<std::size_t>(v)];
    adj_flat_.resize(static_cast<std::size_t>(adj_start_[static_cast<std::size_t>(n_)]));
    std::vector<int> cursor(adj_start_.begin(), adj_start_.end() - 1);
    for (const auto& [a, b] : g.edges) {
        adj_flat_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(a)]++)] = b;
        adj_flat_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(b)]++)] = a;
    }
    edge_count_ = g.edge_count();

    const GraphShape shape = graph_shape(g);
    moments_.reserve(static_cast<std::size_t>(n1 - n0 + 1));
    splits_.reserve(static_cast<std::size_t>(n1 - n0 + 1));
    for (int k = n0; k <= n1; ++k) {
        moments_.push_back(moments_from_shape(shape, k));
        splits_.push_back(detail::make_split_eval(moments_.back(), n_, edge_count_));
    }
}

bool ScanEngine::any_evaluable(StatisticKind kind) const {
    for (const detail::SplitEval& e : splits_) {
        switch (kind) {
            case StatisticKind::original:
                if (e.inv_sd_r0 > 0) return true;
                break;
            case StatisticKind::weighted:
                if (e.inv_sd_rw > 0) return true;
                break;
            case StatisticKind::generalized:
                if (e.gen_ok) return true;
                break;
            case StatisticKind::maxtype:
                if (e.inv_sd_rw > 0 && e.inv_sd_rd > 0) return true;
                break;
        }
    }
    return false;
}

// Incremental sweep: advance the split one position at a time and update
// the three counts from the edges incident to the vertex that changes
// group. O(|G| + n) per labeling instead of O(|G| * n).
template <typename Visitor>
void ScanEngine::sweep(std::span<const int> perm, Visitor&& visit) const {
    const bool identity = perm.empty();
    std::vector<int> by_position;
    if (!identity) {
        by_position.assign(static_cast<std::size_t>(n_), 0);
        for (int v = 0; v < n_; ++v)
            by_position[static_cast<std::size_t>(perm[static_cast<std::size_t>(v)])] = v;
    }
    long long r0 = 0, r1 = 0, r2 = edge_count_;
    for (int k = 1; k <= n1_; ++k) {
        const int v = identity ? k - 1 : by_position[static_cast<std::size_t>(k - 1)];
        const int pv = k - 1;
        for (int idx = adj_start_[static_cast<std::size_t>(v)];
             idx < adj_start_[static_cast<std::size_t>(v) + 1]; ++idx) {
            const int u = adj_flat_[static_cast<std::size_t>(idx)];
            const int pu = identity ? u : perm[static_cast<std::size_t>(u)];
            if (pu < pv) {
                --r0;
                ++r1;
            } else {
                --r2;
                ++r0;
            }
        }
        if (k >= n0_) visit(k, r0, r1, r2);
    }
}

std::vector<EdgeCounts> ScanEngine::counts(std::span<const int> perm) const {
    std::vector<EdgeCounts> out;
    out.reserve(static_cast<std::size_t>(n1_ - n0_ + 1));
    sweep(perm, [&](int k, long long r0, long long r1, long long r2) {
        out.push_back(EdgeCounts{k, r0, r1, r2});
    });
    return out;
}

ScanResult ScanEngine::scan(StatisticKind kind, std::span<const int> perm) const {
    ScanResult res;
    res.kind = kind;
    res.n0 = n0_;
    res.n1 = n1_;
    res.trace.assign(static_cast<std::size_t>(n1_ - n0_ + 1), kNaN);
    double best = -std::numeric_limits<double>::infinity();
    int best_k = -1;
    sweep(perm, [&](int k, long long r0, long long r1, long long r2) {
        const detail::SplitEval& e = splits_[static_cast<std::size_t>(k - n0_)];
        const double val = detail::eval_kind(kind, e, static_cast<double>(r0),
                                             static_cast<double>(r1), static_cast<double>(r2));
        res.trace[static_cast<std::size_t>(k - n0_)] = val;
        if (std::isfinite(val) && val > best) {  // strict: smallest k wins ties
            best = val;
            best_k = k;
        }
    });
    if (best_k < 0)
        throw ScanError("no evaluable split in [" + std::to_string(n0_) + ", " +
                        std::to_string(n1_) + "]");
    res.k_hat = best_k;
    res.t_n = best;
    return res;
}

std::array<double, 4> ScanEngine::max_all(std::span<const int> perm) const {
    std::array<double, 4> best;
    best.fill(-std::numeric_limits<double>::infinity());
    sweep(perm, [&](int k, long long r0c, long long r1c, long long r2c) {
        const detail::SplitEval& e = splits_[static_cast<std::size_t>(k - n0_)];
        const double r0 = static_cast<double>(r0c), r1 = static_cast<double>(r1c),
                     r2 = static_cast<double>(r2c);
        const double z0 = detail::eval_kind(StatisticKind::original, e, r0, r1, r2);
        const double zw = detail::eval_kind(StatisticKind::weighted, e, r0, r1, r2);
        const double s = detail::eval_kind(StatisticKind::generalized, e, r0, r1, r2);
        const double mx = detail::eval_kind(StatisticKind::maxtype, e, r0, r1, r2);
        if (std::isfinite(z0) && z0 > best[0]) best[0] = z0;
        if (std::isfinite(zw) && zw > best[1]) best[1] = zw;
        if (std::isfinite(s) && s > best[2]) best[2] = s;
        if (std::isfinite(mx) && mx > best[3]) best[3] = mx;
    });
    for (double& b : best)
        if (!std::isfinite(b)) b = kNaN;
    return best;
}

ScanResult scan(const SimilarityGraph& g, StatisticKind kind, int n0, int n1) {
    return ScanEngine(g, n0, n1).scan(kind);
}

}
