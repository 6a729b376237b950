#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ssel/core.hpp"

namespace ssel {

struct StageSpec {
    std::vector<int> active;  ///< feature columns following the stage dynamics
    double ar_coef = 0.0;
    double mean = 0.0;
    double noise_std = 1.0;
};

/// Seeded generator of trials with planted piecewise dynamics.
struct SynthSpec {
    std::string subject_id = "synthetic";
    int n_trials = 10;
    int t_min = 280;
    int t_max = 320;
    int dim = 70;
    std::vector<StageSpec> stages;
    std::vector<double> boundary_targets{0.25, 0.5, 0.75};
    double jitter_frac = 0.02;
    double background_std = 1.0;
    double min_seg_frac = 0.08;
    double epsilon = 1e-6;
    std::uint64_t seed = 0;

    /// Throws std::invalid_argument if generation could produce an
    /// infeasible trial.
    void validate() const;

    struct Contrast {
        bool vary_mean = true;
        bool vary_ar = true;
        bool vary_support = true;
        double mean_shift = 2.5;
        double noise_std = 0.5;
        int support_size = 6;
    };

    /// Four stages on disjoint random supports with alternating means and AR
    /// coefficients. Supports are drawn from `seed`.
    static SynthSpec planted(std::uint64_t seed, const Contrast& contrast, int dim = 70);
    static SynthSpec planted(std::uint64_t seed) { return planted(seed, Contrast{}); }
};

struct GroundTruth {
    std::vector<Boundaries> boundaries;       ///< per trial
    std::vector<std::vector<int>> active;     ///< per stage
};

struct SynthOutput {
    Dataset dataset;
    GroundTruth truth;
};

SynthOutput generate(const SynthSpec& spec);

/// Mean over boundaries of |found - truth| / T.
double boundary_error(const Boundaries& found, const Boundaries& truth, std::size_t T);

}  // namespace ssel
