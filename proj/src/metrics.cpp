#include "ssel/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ssel/baselines.hpp"
#include "ssel/objective.hpp"

namespace ssel {

namespace {

constexpr std::size_t kMinHalf = 4;

std::span<const double> slice(std::span<const double> z, Interval iv) { return z.subspan(iv.begin, iv.length()); }

double relative_gain(double global, double local, double eps) {
    return std::max(0.0, (global - local) / (std::abs(global) + eps));
}

}  // namespace

TrajectoryMode trajectory_mode_from_string(const std::string& s) {
    if (s == "pca1") return TrajectoryMode::pca1;
    if (s == "ssel-weights") return TrajectoryMode::ssel_weights;
    throw std::invalid_argument("unknown trajectory mode '" + s + "'");
}

std::string to_string(TrajectoryMode mode) { return mode == TrajectoryMode::pca1 ? "pca1" : "ssel-weights"; }

std::vector<double> metric_trajectory(const Matrix& x, TrajectoryMode mode, const Boundaries* boundaries,
                                      const std::vector<std::vector<double>>* stage_weights) {
    if (x.rows() < 3) throw std::invalid_argument("metric trajectory needs at least 3 samples");
    if (mode == TrajectoryMode::pca1) return pca1(x).z;
    if (!boundaries || !stage_weights) throw std::invalid_argument("ssel-weights trajectory requires SSEL boundaries and stage weights");
    if (stage_weights->size() != boundaries->size() + 1) throw std::invalid_argument("stage weight count does not match boundaries");
    std::vector<double> z;
    z.reserve(x.rows());
    for (std::size_t k = 0; k < stage_weights->size(); ++k) {
        const auto part = project_stage(x, stage_interval(*boundaries, x.rows(), k), (*stage_weights)[k]);
        z.insert(z.end(), part.begin(), part.end());
    }
    return z;
}

double ar_gain(std::span<const double> z, const Boundaries& b, double eps) {
    const double global = fit_ar1(z).mse;
    double local = 0.0;
    for (std::size_t k = 0; k <= b.size(); ++k) local += fit_ar1(slice(z, stage_interval(b, z.size(), k))).mse;
    local /= static_cast<double>(b.size() + 1);
    return relative_gain(global, local, eps);
}

GenGain gen_gain(std::span<const double> z, const Boundaries& b, double eps) {
    const double global = fit_ar1(z).mse;
    GenGain out;
    double test_sum = 0.0;
    for (std::size_t k = 0; k <= b.size(); ++k) {
        const auto iv = stage_interval(b, z.size(), k);
        const std::size_t n = iv.length();
        const std::size_t half = n / 2;
        if (half < kMinHalf || n - half < kMinHalf) continue;
        const auto fit = fit_ar1(z.subspan(iv.begin, half));
        double sse = 0.0;
        for (std::size_t t = iv.begin + half; t < iv.end; ++t) {
            const double r = z[t] - fit.a * z[t - 1] - fit.b;
            sse += r * r;
        }
        test_sum += sse / static_cast<double>(n - half);
        ++out.stages_used;
    }
    if (out.stages_used == 0) return out;
    out.value = relative_gain(global, test_sum / out.stages_used, eps);
    return out;
}

double boundary_contrast(std::span<const double> z, const Boundaries& b, double eps) {
    if (b.empty()) return 0.0;
    const double floor = eps * eps;
    double sum = 0.0;
    for (std::size_t k = 0; k < b.size(); ++k) {
        const auto left = slice(z, stage_interval(b, z.size(), k));
        const auto right = slice(z, stage_interval(b, z.size(), k + 1));
        if (left.size() < 2 || right.size() < 2) throw std::invalid_argument("boundary contrast needs stages of length >= 2");
        const auto l = fit_gaussian(left, floor);
        const auto r = fit_gaussian(right, floor);
        sum += sym_kl_gaussian(l.mean, l.var, r.mean, r.var);
    }
    return sum / static_cast<double>(b.size());
}

BoundaryStability boundary_stability(const std::vector<std::vector<Boundaries>>& archive, std::span<const std::size_t> lengths) {
    const std::size_t K = archive.size();
    if (K < 2) throw std::invalid_argument("boundary stability needs at least 2 candidates");
    const std::size_t J = lengths.size();
    const std::size_t B = archive.front().empty() ? 0 : archive.front().front().size();

    BoundaryStability out;
    out.per_trial.assign(J, std::vector<double>(B, 0.0));
    out.per_boundary.assign(B, 0.0);
    std::vector<double> values(K);
    for (std::size_t j = 0; j < J; ++j) {
        for (std::size_t i = 0; i < B; ++i) {
            for (std::size_t c = 0; c < K; ++c) values[c] = archive[c].at(j).at(i);
            auto sorted = values;
            std::sort(sorted.begin(), sorted.end());
            const double median = K % 2 == 1 ? sorted[K / 2] : 0.5 * (sorted[K / 2 - 1] + sorted[K / 2]);
            double mad = 0.0;
            for (double v : values) mad += std::abs(v - median);
            mad /= static_cast<double>(K);
            out.per_trial[j][i] = mad / static_cast<double>(lengths[j]);
            out.per_boundary[i] += out.per_trial[j][i];
        }
    }
    for (auto& v : out.per_boundary) v /= static_cast<double>(J);
    for (double v : out.per_boundary) out.overall += v;
    if (B > 0) out.overall /= static_cast<double>(B);
    return out;
}

std::vector<std::size_t> top_features(std::span<const double> w, std::size_t n) {
    std::vector<std::size_t> idx;
    for (std::size_t d = 0; d < w.size(); ++d) {
        if (w[d] != 0.0) idx.push_back(d);
    }
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return std::abs(w[a]) > std::abs(w[b]); });
    if (idx.size() > n) idx.resize(n);
    std::sort(idx.begin(), idx.end());
    return idx;
}

double jaccard(std::span<const std::size_t> a, std::span<const std::size_t> b) {
    if (a.empty() && b.empty()) return 1.0;
    std::vector<std::size_t> sa(a.begin(), a.end()), sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    std::vector<std::size_t> inter;
    std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(inter));
    const std::size_t uni = sa.size() + sb.size() - inter.size();
    return static_cast<double>(inter.size()) / static_cast<double>(uni);
}

ChannelSetStability channel_set_stability(const std::vector<std::vector<std::vector<double>>>& weights, std::size_t top_n) {
    const std::size_t K = weights.size();
    if (K < 2) throw std::invalid_argument("channel-set stability needs at least 2 candidates");
    const std::size_t S = weights.front().size();
    ChannelSetStability out;
    for (std::size_t k = 0; k < S; ++k) {
        std::vector<std::vector<std::size_t>> sets(K);
        for (std::size_t c = 0; c < K; ++c) sets[c] = top_features(weights[c].at(k), top_n);
        std::vector<std::vector<double>> mat(K, std::vector<double>(K, 1.0));
        double sum = 0.0;
        for (std::size_t a = 0; a < K; ++a) {
            for (std::size_t b = a + 1; b < K; ++b) {
                mat[a][b] = mat[b][a] = jaccard(sets[a], sets[b]);
                sum += mat[a][b];
            }
        }
        out.per_stage.push_back(sum / static_cast<double>(K * (K - 1) / 2));
        out.matrices.push_back(std::move(mat));
    }
    return out;
}

}  // namespace ssel
