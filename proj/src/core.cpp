#include "ssel/core.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace ssel {

FeatureAxis::FeatureAxis(std::vector<std::string> channels, std::vector<std::string> bands)
    : channels_(std::move(channels)), bands_(std::move(bands)) {
    if (channels_.empty() || bands_.empty()) {
        throw std::invalid_argument("feature axis needs at least one channel and one band");
    }
    if (std::set<std::string>(channels_.begin(), channels_.end()).size() != channels_.size()) {
        throw std::invalid_argument("duplicate channel label");
    }
    if (std::set<std::string>(bands_.begin(), bands_.end()).size() != bands_.size()) {
        throw std::invalid_argument("duplicate band label");
    }
}

FeatureAxis FeatureAxis::epoc_default() {
    return FeatureAxis({"AF3", "F7", "F3", "FC5", "T7", "P7", "O1", "O2", "P8", "T8", "FC6", "F4", "F8", "AF4"},
                       {"Theta", "Alpha", "BetaL", "BetaH", "Gamma"});
}

FeatureAxis FeatureAxis::generic(std::size_t dim) {
    std::vector<std::string> channels;
    channels.reserve(dim);
    for (std::size_t i = 0; i < dim; ++i) channels.push_back("f" + std::to_string(i));
    return FeatureAxis(std::move(channels), {"raw"});
}

FeatureAxis FeatureAxis::from_labels(const std::vector<std::string>& labels) {
    if (labels.empty()) throw std::invalid_argument("no feature labels");
    std::vector<std::string> bands;
    std::vector<std::string> channels;
    bool split_ok = true;
    for (const auto& label : labels) {
        auto pos = label.find('_');
        if (pos == std::string::npos || pos == 0 || pos + 1 == label.size()) {
            split_ok = false;
            break;
        }
        auto band = label.substr(0, pos);
        auto channel = label.substr(pos + 1);
        if (std::find(bands.begin(), bands.end(), band) == bands.end()) bands.push_back(band);
        if (std::find(channels.begin(), channels.end(), channel) == channels.end()) channels.push_back(channel);
    }
    if (split_ok && bands.size() * channels.size() == labels.size()) {
        FeatureAxis axis(channels, bands);
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (axis.label(i) != labels[i]) {
                split_ok = false;
                break;
            }
        }
        if (split_ok) return axis;
    }
    return FeatureAxis(labels, {"raw"});
}

std::size_t FeatureAxis::index(std::size_t band, std::size_t channel) const {
    if (band >= bands_.size() || channel >= channels_.size()) throw std::out_of_range("feature axis index");
    return band * channels_.size() + channel;
}

std::string FeatureAxis::label(std::size_t column) const {
    if (column >= dim()) throw std::out_of_range("feature column");
    if (bands_.size() == 1 && bands_[0] == "raw") return channels_[column];
    return bands_[band_of(column)] + "_" + channels_[channel_of(column)];
}

std::vector<std::size_t> Dataset::lengths() const {
    std::vector<std::size_t> out;
    out.reserve(trials.size());
    for (const auto& t : trials) out.push_back(t.length());
    return out;
}

std::string to_string(Method m) {
    switch (m) {
        case Method::ssel: return "ssel";
        case Method::pelt_l2: return "pelt_l2";
        case Method::kernel_rbf: return "kernel_rbf";
        case Method::bocpd_pca1: return "bocpd_pca1";
    }
    return "unknown";
}

Method method_from_string(const std::string& s) {
    if (s == "ssel") return Method::ssel;
    if (s == "pelt_l2") return Method::pelt_l2;
    if (s == "kernel_rbf") return Method::kernel_rbf;
    if (s == "bocpd_pca1") return Method::bocpd_pca1;
    throw std::invalid_argument("unknown method '" + s + "'");
}

void Config::validate() const {
    if (num_boundaries < 1) throw std::invalid_argument("num_boundaries must be >= 1");
    if (k_s < 1) throw std::invalid_argument("k_s must be >= 1");
    if (lambda_bdry < 0 || lambda_align < 0 || lambda_1 < 0) throw std::invalid_argument("lambda weights must be >= 0");
    if (!(min_seg_frac > 0.0) || !(min_seg_frac < 1.0 / num_stages())) {
        throw std::invalid_argument("min_seg_frac must lie in (0, 1/(B+1))");
    }
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
}

int min_segment_length(std::size_t T, double min_seg_frac) {
    // 0.08 * 300 evaluates to 24.000000000000004; shave the rounding noise.
    return std::max(1, static_cast<int>(std::ceil(min_seg_frac * static_cast<double>(T) - 1e-9)));
}

TrialMatrix standardize_trial(const Matrix& raw, double eps, std::string trial_id) {
    const std::size_t T = raw.rows();
    const std::size_t D = raw.cols();
    if (T < 1 || D < 1) throw DataError("trial '" + trial_id + "' is empty");
    for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t d = 0; d < D; ++d) {
            if (!std::isfinite(raw(t, d))) {
                std::ostringstream msg;
                msg << "trial '" << trial_id << "': non-finite value at row " << t << ", column " << d;
                throw DataError(msg.str());
            }
        }
    }

    TrialMatrix out{std::move(trial_id), Matrix(T, D), raw};
    for (std::size_t d = 0; d < D; ++d) {
        double mean = 0.0;
        for (std::size_t t = 0; t < T; ++t) mean += raw(t, d);
        mean /= static_cast<double>(T);
        double ss = 0.0;
        for (std::size_t t = 0; t < T; ++t) {
            const double dev = raw(t, d) - mean;
            ss += dev * dev;
        }
        const double denom = std::sqrt(ss / static_cast<double>(T)) + eps;
        for (std::size_t t = 0; t < T; ++t) out.x(t, d) = (raw(t, d) - mean) / denom;
    }
    return out;
}

void validate_dataset(const Dataset& dataset) {
    if (dataset.trials.empty()) throw DataError("dataset '" + dataset.subject_id + "' has no trials");
    const std::size_t D = dataset.axis.dim();
    for (const auto& trial : dataset.trials) {
        if (trial.dim() != D) {
            throw DataError("trial '" + trial.trial_id + "' has " + std::to_string(trial.dim()) + " features, expected " +
                            std::to_string(D));
        }
        if (trial.length() < 1) throw DataError("trial '" + trial.trial_id + "' is empty");
    }
}

std::vector<Violation> validate_boundaries(const Boundaries& b, std::size_t T, const Config& cfg, int trial) {
    std::vector<Violation> out;
    if (static_cast<int>(b.size()) != cfg.num_boundaries) {
        out.push_back({Violation::Kind::boundary_count, trial, -1,
                       "expected " + std::to_string(cfg.num_boundaries) + " boundaries, got " + std::to_string(b.size())});
        return out;
    }
    const int Ti = static_cast<int>(T);
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (b[i] <= 0 || b[i] >= Ti) {
            out.push_back({Violation::Kind::bounds, trial, static_cast<int>(i),
                           "boundary " + std::to_string(i + 1) + " = " + std::to_string(b[i]) + " outside (0, " +
                               std::to_string(Ti) + ")"});
        }
        if (i > 0 && b[i] <= b[i - 1]) {
            out.push_back({Violation::Kind::ordering, trial, static_cast<int>(i),
                           "boundary " + std::to_string(i + 1) + " not after boundary " + std::to_string(i)});
        }
    }
    const int m = min_segment_length(T, cfg.min_seg_frac);
    int prev = 0;
    for (std::size_t k = 0; k <= b.size(); ++k) {
        const int end = k < b.size() ? b[k] : Ti;
        const int len = end - prev;
        if (len < m) {
            out.push_back({Violation::Kind::min_length, trial, static_cast<int>(k),
                           "segment " + std::to_string(k + 1) + " length " + std::to_string(len) + " < " + std::to_string(m)});
        }
        prev = end;
    }
    return out;
}

std::vector<Violation> validate_candidate(const Candidate& c, const Dataset& dataset, const Config& cfg) {
    std::vector<Violation> out;
    if (c.boundaries.size() != dataset.trials.size()) {
        out.push_back({Violation::Kind::trial_count, -1, -1,
                       "candidate has " + std::to_string(c.boundaries.size()) + " boundary sets for " +
                           std::to_string(dataset.trials.size()) + " trials"});
    } else {
        for (std::size_t j = 0; j < c.boundaries.size(); ++j) {
            auto v = validate_boundaries(c.boundaries[j], dataset.trials[j].length(), cfg, static_cast<int>(j));
            out.insert(out.end(), v.begin(), v.end());
        }
    }
    if (static_cast<int>(c.weights.size()) != cfg.num_stages()) {
        out.push_back({Violation::Kind::stage_count, -1, -1,
                       "expected " + std::to_string(cfg.num_stages()) + " stage weight vectors, got " +
                           std::to_string(c.weights.size())});
        return out;
    }
    for (std::size_t k = 0; k < c.weights.size(); ++k) {
        const auto& w = c.weights[k];
        const int stage = static_cast<int>(k);
        if (w.size() != dataset.dim()) {
            out.push_back({Violation::Kind::dimension, -1, stage,
                           "stage " + std::to_string(k + 1) + " weights have length " + std::to_string(w.size())});
            continue;
        }
        int nnz = 0;
        bool finite = true;
        for (double v : w) {
            if (!std::isfinite(v)) finite = false;
            if (v != 0.0) ++nnz;
        }
        if (!finite) out.push_back({Violation::Kind::non_finite, -1, stage, "stage " + std::to_string(k + 1) + " has non-finite weights"});
        if (nnz > cfg.k_s) {
            out.push_back({Violation::Kind::sparsity, -1, stage,
                           "stage " + std::to_string(k + 1) + " has " + std::to_string(nnz) + " nonzeros > K_s = " +
                               std::to_string(cfg.k_s)});
        }
    }
    return out;
}

Interval stage_interval(const Boundaries& b, std::size_t T, std::size_t k) {
    if (k > b.size()) throw std::out_of_range("stage index");
    const std::size_t begin = k == 0 ? 0 : static_cast<std::size_t>(b[k - 1]);
    const std::size_t end = k == b.size() ? T : static_cast<std::size_t>(b[k]);
    return {begin, end};
}

std::vector<double> project_stage(const Matrix& x, Interval interval, std::span<const double> w) {
    if (interval.begin >= interval.end || interval.end > x.rows()) {
        throw std::out_of_range("stage interval [" + std::to_string(interval.begin) + ", " + std::to_string(interval.end) +
                                ") outside trial of length " + std::to_string(x.rows()));
    }
    if (w.size() != x.cols()) throw std::invalid_argument("weight vector length does not match feature dimension");

    std::vector<std::size_t> support;
    for (std::size_t d = 0; d < w.size(); ++d) {
        if (w[d] != 0.0) support.push_back(d);
    }
    std::vector<double> z(interval.length(), 0.0);
    for (std::size_t t = interval.begin; t < interval.end; ++t) {
        const auto row = x.row(t);
        double acc = 0.0;
        for (std::size_t d : support) acc += w[d] * row[d];
        z[t - interval.begin] = acc;
    }
    return z;
}

}  // namespace ssel
