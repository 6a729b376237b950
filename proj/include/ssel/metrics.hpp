#pragma once

#include <span>
#include <vector>

#include "ssel/core.hpp"

namespace ssel {

enum class TrajectoryMode { pca1, ssel_weights };

TrajectoryMode trajectory_mode_from_string(const std::string& s);
std::string to_string(TrajectoryMode mode);

/// The scalar sequence all metrics are computed on. ssel_weights projects
/// each stage with that stage's weights and needs `stage_weights`.
std::vector<double> metric_trajectory(const Matrix& x, TrajectoryMode mode, const Boundaries* boundaries = nullptr,
                                      const std::vector<std::vector<double>>* stage_weights = nullptr);

/// max(0, (L_global - mean stage MSE) / (|L_global| + eps)), in-sample AR(1).
double ar_gain(std::span<const double> z, const Boundaries& b, double eps);

struct GenGain {
    double value = 0.0;
    int stages_used = 0;  ///< 0 means every stage was too short
};

/// Per stage: fit AR(1) on the first half, score one-step predictions on the
/// second half. Stages with a half shorter than 4 samples are skipped.
GenGain gen_gain(std::span<const double> z, const Boundaries& b, double eps);

/// Mean symmetric KL between Gaussian fits of adjacent stage slices.
double boundary_contrast(std::span<const double> z, const Boundaries& b, double eps);

struct BoundaryStability {
    std::vector<std::vector<double>> per_trial;  ///< [trial][boundary] MAD / T
    std::vector<double> per_boundary;             ///< mean over trials
    double overall = 0.0;
};

/// `archive[c][j]` holds candidate c's boundaries for trial j. MAD is the
/// mean absolute deviation from the median across candidates.
BoundaryStability boundary_stability(const std::vector<std::vector<Boundaries>>& archive, std::span<const std::size_t> lengths);

/// Indices of the min(n, nnz) largest-|w| entries, ascending; ties keep the
/// lower index.
std::vector<std::size_t> top_features(std::span<const double> w, std::size_t n);

double jaccard(std::span<const std::size_t> a, std::span<const std::size_t> b);

struct ChannelSetStability {
    std::vector<double> per_stage;                               ///< mean pairwise Jaccard
    std::vector<std::vector<std::vector<double>>> matrices;      ///< [stage] K x K
};

/// `weights[c][k]` is candidate c's stage-k weight vector.
ChannelSetStability channel_set_stability(const std::vector<std::vector<std::vector<double>>>& weights, std::size_t top_n = 8);

}  // namespace ssel
