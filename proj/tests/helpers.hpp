#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ssel/core.hpp"
#include "ssel/rng.hpp"

namespace testing {

inline ssel::Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    ssel::Rng rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    ssel::Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = n(rng);
    }
    return m;
}

/// Dataset whose standardized matrices are exactly `xs` (no restandardization).
inline ssel::Dataset dataset_of(std::vector<ssel::Matrix> xs) {
    ssel::Dataset d;
    d.subject_id = "s";
    d.axis = ssel::FeatureAxis::generic(xs.front().cols());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        ssel::TrialMatrix t;
        t.trial_id = "t" + std::to_string(i);
        t.raw = xs[i];
        t.x = std::move(xs[i]);
        d.trials.push_back(std::move(t));
    }
    return d;
}

inline ssel::Matrix column(const std::vector<double>& v) {
    ssel::Matrix m(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
    return m;
}

inline double rel_diff(double a, double b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / scale;
}

}  // namespace testing
