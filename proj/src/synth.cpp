#include "ssel/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ssel/evolution.hpp"
#include "ssel/rng.hpp"

namespace ssel {

namespace {

constexpr std::uint64_t kSupportStream = 0x5001;
constexpr std::uint64_t kTrialStream = 0x5002;

}  // namespace

void SynthSpec::validate() const {
    if (n_trials < 1) throw std::invalid_argument("synth: n_trials must be >= 1");
    if (t_min < 1 || t_max < t_min) throw std::invalid_argument("synth: need 1 <= t_min <= t_max");
    if (dim < 1) throw std::invalid_argument("synth: dim must be >= 1");
    if (stages.size() != boundary_targets.size() + 1) throw std::invalid_argument("synth: need one stage per segment");
    double prev = 0.0;
    double min_gap = 1.0;
    for (double t : boundary_targets) {
        if (!(t > prev)) throw std::invalid_argument("synth: boundary targets must be increasing inside (0, 1)");
        min_gap = std::min(min_gap, t - prev);
        prev = t;
    }
    if (!(prev < 1.0)) throw std::invalid_argument("synth: boundary targets must lie inside (0, 1)");
    min_gap = std::min(min_gap, 1.0 - prev);
    if (jitter_frac < 0.0 || min_gap - 2.0 * jitter_frac < min_seg_frac) {
        throw std::invalid_argument("synth: boundary jitter can violate the minimum segment length");
    }
    const int m = min_segment_length(static_cast<std::size_t>(t_min), min_seg_frac);
    if (t_min < static_cast<int>(stages.size()) * m || m < 3) throw std::invalid_argument("synth: t_min too short for the stage count");
    for (const auto& s : stages) {
        if (!(std::abs(s.ar_coef) < 1.0)) throw std::invalid_argument("synth: |ar_coef| must be < 1");
        if (s.noise_std < 0.0) throw std::invalid_argument("synth: noise_std must be >= 0");
        for (int d : s.active) {
            if (d < 0 || d >= dim) throw std::invalid_argument("synth: active feature out of range");
        }
    }
    if (background_std < 0.0) throw std::invalid_argument("synth: background_std must be >= 0");
}

SynthSpec SynthSpec::planted(std::uint64_t seed, const Contrast& contrast, int dim) {
    SynthSpec spec;
    spec.seed = seed;
    spec.dim = dim;
    Rng rng = make_stream(seed, kSupportStream);
    std::vector<int> features(static_cast<std::size_t>(spec.dim));
    std::iota(features.begin(), features.end(), 0);
    std::shuffle(features.begin(), features.end(), rng);

    const int n_stages = static_cast<int>(spec.boundary_targets.size()) + 1;
    const int needed = contrast.vary_support ? n_stages * contrast.support_size : contrast.support_size;
    if (contrast.support_size < 1 || needed > dim) throw std::invalid_argument("synth: dim too small for the planted supports");
    const double ar[] = {0.8, 0.3, 0.7, 0.2};
    for (int k = 0; k < n_stages; ++k) {
        StageSpec s;
        const int offset = contrast.vary_support ? k * contrast.support_size : 0;
        s.active.assign(features.begin() + offset, features.begin() + offset + contrast.support_size);
        std::sort(s.active.begin(), s.active.end());
        s.ar_coef = contrast.vary_ar ? ar[k % 4] : 0.5;
        s.mean = contrast.vary_mean ? (k % 2 == 0 ? contrast.mean_shift : -contrast.mean_shift) : 0.0;
        s.noise_std = contrast.noise_std;
        spec.stages.push_back(std::move(s));
    }
    return spec;
}

SynthOutput generate(const SynthSpec& spec) {
    spec.validate();
    SynthOutput out;
    out.dataset.subject_id = spec.subject_id;
    out.dataset.axis = spec.dim == 70 ? FeatureAxis::epoc_default() : FeatureAxis::generic(static_cast<std::size_t>(spec.dim));
    for (const auto& s : spec.stages) out.truth.active.push_back(s.active);

    Config repair_cfg;
    repair_cfg.num_boundaries = static_cast<int>(spec.boundary_targets.size());
    repair_cfg.min_seg_frac = spec.min_seg_frac;

    const std::size_t D = static_cast<std::size_t>(spec.dim);
    std::vector<int> owner(D);
    for (int j = 0; j < spec.n_trials; ++j) {
        Rng rng = make_stream(spec.seed, kTrialStream, static_cast<std::uint64_t>(j));
        const std::size_t T = static_cast<std::size_t>(uniform_int(rng, spec.t_min, spec.t_max));
        const int radius = static_cast<int>(std::floor(spec.jitter_frac * static_cast<double>(T)));
        Boundaries b;
        for (double target : spec.boundary_targets) {
            int pos = static_cast<int>(std::lround(target * static_cast<double>(T)));
            if (radius > 0) pos += uniform_int(rng, -radius, radius);
            b.push_back(pos);
        }
        b = repair(std::move(b), T, repair_cfg);

        Matrix raw(T, D);
        std::vector<double> prev(D, 0.0);
        std::size_t stage = 0;
        for (std::size_t t = 0; t < T; ++t) {
            while (stage < b.size() && static_cast<int>(t) >= b[stage]) ++stage;
            const auto& s = spec.stages[stage];
            std::fill(owner.begin(), owner.end(), 0);
            for (int d : s.active) owner[static_cast<std::size_t>(d)] = 1;
            for (std::size_t d = 0; d < D; ++d) {
                double v;
                if (owner[d]) {
                    const double lag = t == 0 ? s.mean : prev[d];
                    v = s.mean + s.ar_coef * (lag - s.mean) + normal(rng, 0.0, s.noise_std);
                } else {
                    v = normal(rng, 0.0, spec.background_std);
                }
                raw(t, d) = v;
                prev[d] = v;
            }
        }
        char id[32];
        std::snprintf(id, sizeof id, "trial_%03d", j);
        out.dataset.trials.push_back(standardize_trial(raw, spec.epsilon, id));
        out.truth.boundaries.push_back(std::move(b));
    }
    return out;
}

double boundary_error(const Boundaries& found, const Boundaries& truth, std::size_t T) {
    if (found.size() != truth.size() || found.empty()) throw std::invalid_argument("boundary_error: mismatched boundary counts");
    double sum = 0.0;
    for (std::size_t i = 0; i < found.size(); ++i) sum += std::abs(found[i] - truth[i]);
    return sum / static_cast<double>(found.size()) / static_cast<double>(T);
}

}  // namespace ssel
