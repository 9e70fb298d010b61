#pragma once

#include "fgcp/edgestats.hpp"
#include "fgcp/fdata.hpp"
#include "fgcp/graphs.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fgcp {

struct DetectionConfig {
    StatisticKind statistic = StatisticKind::maxtype;
    TreeKind tree = TreeKind::mst;
    int k_trees = 15;
    double p = 2.0;
    double alpha = 0.05;
    int shuffles = 1000;
    std::uint64_t seed = 0;
    int min_segment = 10;
    double window_lo = 0.05;
    double window_hi = 0.95;
    int threads = 0;  // 0 = hardware concurrency

    void validate() const;
};

/// Empirical permutation threshold: smallest q with ecdf(q) > 1 - alpha.
double permutation_threshold(std::vector<double> maxima, double alpha);

/// Add-one permutation p-value: (1 + #{m : T^(m) >= t_n}) / (M + 1).
double permutation_p_value(double t_n, const std::vector<double>& maxima);

struct AmocResult {
    int k_hat = 0;  // 1-based global index of the last observation before the change
    double t_n = 0;
    double threshold = 0;
    double p_value = 1;
    bool significant = false;
    ScanResult trace;
    int k_trees_used = 0;  // may be smaller than requested inside segmentation
};

/// Permutation test for all four statistics on a fixed graph, sharing
/// one set of label shuffles. Drives both amoc_test and the simulation
/// experiments so the calibration semantics cannot drift apart.
struct MultiStatAmoc {
    std::array<double, 4> t_n{};
    std::array<double, 4> threshold{};
    std::array<double, 4> p_value{};
    std::array<bool, 4> significant{};
    std::array<int, 4> k_hat{};
    std::array<bool, 4> evaluable{};
};

struct AmocOptions {
    double alpha = 0.05;
    int shuffles = 1000;
    std::uint64_t seed = 0;
    int n0 = 0, n1 = 0;  // scan window; must be set
    int threads = 0;
};

MultiStatAmoc amoc_all_stats(const SimilarityGraph& g, const AmocOptions& opt);

AmocResult amoc_test(const FunctionalSample& sample, const DetectionConfig& cfg);

struct ChangePoint {
    int index = 0;  // global 1-based; change between index and index+1
    double p_value = 1;
    double threshold = 0;
    double t_n = 0;
    int order = 0;  // detection order in the recursion
    int segment_lo = 0, segment_hi = 0;
    int k_trees_used = 0;
};

struct SegmentationResult {
    std::vector<ChangePoint> change_points;           // sorted by index
    std::vector<std::pair<int, int>> segments;        // 1-based inclusive
    std::vector<std::string> notes;                   // e.g. K capping events
    std::string threshold_policy = "per-segment";     // recalibrated on every sub-segment
};

SegmentationResult binary_segmentation(const FunctionalSample& sample, const DetectionConfig& cfg);

}
