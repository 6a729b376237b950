#pragma once

#include <cstddef>
#include <vector>

#include "ssel/core.hpp"

namespace ssel {

/// Per-stage feature maps. Each candidate's stage vector is taken in absolute
/// value and L1-normalized, then averaged over all candidates offered.
class HeatmapAccumulator {
public:
    HeatmapAccumulator(std::size_t num_stages, std::size_t dim);

    void add(const std::vector<std::vector<double>>& stage_weights);
    std::size_t count() const { return count_; }
    /// [stage][feature], mean of the normalized maps.
    std::vector<std::vector<double>> mean() const;

private:
    std::size_t count_ = 0;
    std::vector<std::vector<double>> sum_;
};

struct PrincipalComponents {
    std::vector<double> mean;
    std::vector<std::vector<double>> components;  ///< orthonormal rows
    std::vector<double> variances;                ///< eigenvalues, descending

    std::vector<double> project(const std::vector<double>& v) const;
};

/// Eigen-decomposition of the population covariance of `rows` by cyclic
/// Jacobi rotations. Each component's largest-magnitude entry is positive.
PrincipalComponents fit_pca(const std::vector<std::vector<double>>& rows, std::size_t n_components);

}  // namespace ssel
