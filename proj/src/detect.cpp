#include "fgcp/detect.hpp"

#include "fgcp/errors.hpp"
#include "fgcp/parallel.hpp"
#include "fgcp/rng.hpp"

#include <algorithm>
#include <cmath>

namespace fgcp {

void DetectionConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("alpha must lie in (0, 1)");
    if (shuffles < 1) throw std::invalid_argument("shuffles must be >= 1");
    if (k_trees < 1) throw std::invalid_argument("k_trees must be >= 1");
    if (min_segment < 4) throw std::invalid_argument("min_segment must be >= 4");
    if (!(p >= 1.0)) throw std::invalid_argument("p must satisfy 1 <= p < inf");
    if (!(window_lo >= 0.0 && window_lo <= window_hi && window_hi <= 1.0))
        throw std::invalid_argument("window fractions must satisfy 0 <= lo <= hi <= 1");
}

double permutation_threshold(std::vector<double> maxima, double alpha) {
    if (maxima.empty()) throw std::invalid_argument("permutation_threshold: no permuted maxima");
    const int m = static_cast<int>(maxima.size());
    // smallest order statistic whose ecdf exceeds 1 - alpha
    int rank = static_cast<int>(std::floor((1.0 - alpha) * m)) + 1;
    rank = std::min(rank, m);
    std::nth_element(maxima.begin(), maxima.begin() + (rank - 1), maxima.end());
    return maxima[static_cast<std::size_t>(rank - 1)];
}

double permutation_p_value(double t_n, const std::vector<double>& maxima) {
    long long count = 0;
    for (double x : maxima)
        if (x >= t_n) ++count;
    return static_cast<double>(1 + count) / static_cast<double>(maxima.size() + 1);
}

MultiStatAmoc amoc_all_stats(const SimilarityGraph& g, const AmocOptions& opt) {
    ScanEngine engine(g, opt.n0, opt.n1);
    MultiStatAmoc out;
    const auto observed = engine.max_all();
    for (int s = 0; s < 4; ++s) out.evaluable[static_cast<std::size_t>(s)] = std::isfinite(observed[static_cast<std::size_t>(s)]);

    // One scan per statistic for the argmax; cheap next to the shuffles.
    for (int s = 0; s < 4; ++s) {
        if (!out.evaluable[static_cast<std::size_t>(s)]) continue;
        auto res = engine.scan(kAllStatistics[static_cast<std::size_t>(s)]);
        out.t_n[static_cast<std::size_t>(s)] = res.t_n;
        out.k_hat[static_cast<std::size_t>(s)] = res.k_hat;
    }

    // The graph is fixed under permutation because pairwise distances are
    // label-equivariant; only the vertex labels are shuffled. Shuffle m
    // draws its own stream from (seed, m), so any schedule gives the
    // same result.
    const int M = opt.shuffles;
    std::vector<std::array<double, 4>> perm_max(static_cast<std::size_t>(M));
    parallel_for(static_cast<std::size_t>(M), opt.threads, [&](std::size_t m) {
        auto rng = make_rng(derive_seed(opt.seed, m + 1));
        const auto perm = random_permutation(engine.n(), rng);
        perm_max[m] = engine.max_all(perm);
    });

    std::vector<double> column(static_cast<std::size_t>(M));
    for (int s = 0; s < 4; ++s) {
        if (!out.evaluable[static_cast<std::size_t>(s)]) continue;
        for (int m = 0; m < M; ++m)
            column[static_cast<std::size_t>(m)] =
                perm_max[static_cast<std::size_t>(m)][static_cast<std::size_t>(s)];
        out.threshold[static_cast<std::size_t>(s)] = permutation_threshold(column, opt.alpha);
        out.p_value[static_cast<std::size_t>(s)] =
            permutation_p_value(out.t_n[static_cast<std::size_t>(s)], column);
        out.significant[static_cast<std::size_t>(s)] =
            out.t_n[static_cast<std::size_t>(s)] > out.threshold[static_cast<std::size_t>(s)];
    }
    return out;
}

namespace {

int statistic_index(StatisticKind kind) {
    switch (kind) {
        case StatisticKind::original: return 0;
        case StatisticKind::weighted: return 1;
        case StatisticKind::generalized: return 2;
        case StatisticKind::maxtype: return 3;
    }
    return 3;
}

struct SegmentTest {
    AmocResult amoc;
    bool tested = false;
    std::string note;
};

// AMOC on a prebuilt distance matrix restricted to [lo, hi] (0-based,
// inclusive). Window bounds are expressed in local split coordinates.
AmocResult amoc_on_distances(const Matrix& dist, const DetectionConfig& cfg, int n0, int n1,
                             std::uint64_t seed, int k_trees) {
    const SimilarityGraph g = build_k_graph(dist, cfg.tree, k_trees);
    AmocOptions opt;
    opt.alpha = cfg.alpha;
    opt.shuffles = cfg.shuffles;
    opt.seed = seed;
    opt.n0 = n0;
    opt.n1 = n1;
    opt.threads = cfg.threads;
    const auto multi = amoc_all_stats(g, opt);
    const int s = statistic_index(cfg.statistic);
    if (!multi.evaluable[static_cast<std::size_t>(s)])
        throw ScanError("no evaluable split for the requested statistic");
    AmocResult res;
    res.k_hat = multi.k_hat[static_cast<std::size_t>(s)];
    res.t_n = multi.t_n[static_cast<std::size_t>(s)];
    res.threshold = multi.threshold[static_cast<std::size_t>(s)];
    res.p_value = multi.p_value[static_cast<std::size_t>(s)];
    res.significant = multi.significant[static_cast<std::size_t>(s)];
    res.trace = ScanEngine(g, n0, n1).scan(cfg.statistic);
    res.k_trees_used = k_trees;
    return res;
}

}  // namespace

AmocResult amoc_test(const FunctionalSample& sample, const DetectionConfig& cfg) {
    cfg.validate();
    const int n = static_cast<int>(sample.n());
    if (n < cfg.min_segment)
        throw std::invalid_argument("amoc_test: sample shorter than min_segment");
    const auto dist = distance_matrix(sample, cfg.p, cfg.threads);
    const auto [n0, n1] = default_window(n, cfg.window_lo, cfg.window_hi);
    if (n0 > n1) throw ScanError("scan window is empty for n=" + std::to_string(n));
    return amoc_on_distances(dist.d, cfg, n0, n1, cfg.seed, cfg.k_trees);
}

SegmentationResult binary_segmentation(const FunctionalSample& sample,
                                       const DetectionConfig& cfg) {
    cfg.validate();
    const int n = static_cast<int>(sample.n());
    if (n < cfg.min_segment)
        throw std::invalid_argument("binary_segmentation: sample shorter than min_segment");

    SegmentationResult out;
    int order = 0;

    // Recurse on 1-based inclusive segments. Each segment rebuilds its
    // distance matrix and graph and draws fresh shuffles; its RNG stream
    // derives from (seed, lo, hi) so recursion order cannot matter.
    auto recurse = [&](auto&& self, int lo, int hi) -> void {
        const int len = hi - lo + 1;
        if (len < cfg.min_segment) return;

        // window clamped so both children keep at least min_segment points
        auto [n0, n1] = default_window(len, cfg.window_lo, cfg.window_hi);
        n0 = std::max(n0, cfg.min_segment);
        n1 = std::min(n1, len - cfg.min_segment);
        if (n0 > n1) return;

        FunctionalSample seg(sample.curves.middleRows(lo - 1, len), sample.grid);
        const auto dist = distance_matrix(seg, cfg.p, cfg.threads);

        int k_trees = std::min(cfg.k_trees, max_feasible_trees(len));
        if (k_trees < cfg.k_trees)
            out.notes.push_back("segment [" + std::to_string(lo) + "," + std::to_string(hi) +
                                "]: K capped to " + std::to_string(k_trees));
        AmocResult res;
        bool ok = false;
        const std::uint64_t seg_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(lo),
                                                   static_cast<std::uint64_t>(hi));
        while (k_trees >= 1 && !ok) {
            try {
                res = amoc_on_distances(dist.d, cfg, n0, n1, seg_seed, k_trees);
                ok = true;
            } catch (const CapacityError&) {
                // greedy round stalled below the feasibility bound; shrink K
                out.notes.push_back("segment [" + std::to_string(lo) + "," + std::to_string(hi) +
                                    "]: K reduced to " + std::to_string(k_trees - 1) +
                                    " after a stalled tree construction");
                --k_trees;
            } catch (const ScanError&) {
                return;  // nothing evaluable; treat as no detectable change
            }
        }
        if (!ok) return;

        if (!res.significant) return;
        const int global_k = lo - 1 + res.k_hat;
        ChangePoint cp;
        cp.index = global_k;
        cp.p_value = res.p_value;
        cp.threshold = res.threshold;
        cp.t_n = res.t_n;
        cp.order = ++order;
        cp.segment_lo = lo;
        cp.segment_hi = hi;
        cp.k_trees_used = res.k_trees_used;
        out.change_points.push_back(cp);

        self(self, lo, global_k);
        self(self, global_k + 1, hi);
    };
    recurse(recurse, 1, n);

    std::sort(out.change_points.begin(), out.change_points.end(),
              [](const ChangePoint& a, const ChangePoint& b) { return a.index < b.index; });
    int prev = 1;
    for (const auto& cp : out.change_points) {
        out.segments.emplace_back(prev, cp.index);
        prev = cp.index + 1;
    }
    out.segments.emplace_back(prev, n);
    return out;
}

}
