#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ssel {

/// Thrown when input data violates a structural requirement (non-finite
/// values, malformed files, unrepairable trials).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dense row-major matrix; row t is the feature vector at sample t.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

    const std::vector<double>& values() const { return data_; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Channel x band layout of the feature columns. Column index is
/// band * channels + channel.
class FeatureAxis {
public:
    FeatureAxis() = default;
    FeatureAxis(std::vector<std::string> channels, std::vector<std::string> bands);

    /// 14 EPOC-X channels x 5 bands (D = 70).
    static FeatureAxis epoc_default();
    /// One band ("raw") with generic channel names f0..f{D-1}.
    static FeatureAxis generic(std::size_t dim);
    /// Rebuilds an axis from flat column labels. Labels of the form
    /// "<band>_<channel>" that tile a full grid are split; anything else
    /// becomes a single-band axis.
    static FeatureAxis from_labels(const std::vector<std::string>& labels);

    std::size_t dim() const { return channels_.size() * bands_.size(); }
    std::size_t index(std::size_t band, std::size_t channel) const;
    std::size_t band_of(std::size_t column) const { return column / channels_.size(); }
    std::size_t channel_of(std::size_t column) const { return column % channels_.size(); }
    std::string label(std::size_t column) const;

    const std::vector<std::string>& channels() const { return channels_; }
    const std::vector<std::string>& bands() const { return bands_; }

    bool operator==(const FeatureAxis&) const = default;

private:
    std::vector<std::string> channels_;
    std::vector<std::string> bands_;
};

struct TrialMatrix {
    std::string trial_id;
    Matrix x;    ///< standardized features, T x D
    Matrix raw;  ///< values as ingested, before standardization

    std::size_t length() const { return x.rows(); }
    std::size_t dim() const { return x.cols(); }
};

struct Dataset {
    std::string subject_id;
    FeatureAxis axis;
    std::vector<TrialMatrix> trials;

    std::size_t dim() const { return axis.dim(); }
    std::vector<std::size_t> lengths() const;
};

/// Per-trial boundary positions. Stage k of a trial covers
/// [b[k-1], b[k]) with b[-1] = 0 and b[B] = T.
using Boundaries = std::vector<int>;

struct Candidate {
    std::vector<Boundaries> boundaries;       ///< one entry per trial
    std::vector<std::vector<double>> weights;  ///< one dense D-vector per stage
    std::optional<double> cached_score;

    std::size_t num_stages() const { return weights.size(); }
    bool operator==(const Candidate& other) const {
        return boundaries == other.boundaries && weights == other.weights;
    }
};

enum class Method { ssel, pelt_l2, kernel_rbf, bocpd_pca1 };

std::string to_string(Method m);
Method method_from_string(const std::string& s);

/// Scale handling of stage weights during search.
enum class WeightNorm {
    unit_l2,  ///< every stage vector is rescaled to unit Euclidean norm
    none,     ///< raw weights; the objective is then unbounded in scale
};

/// How the boundary-contrast term projects the two sides of a boundary.
enum class BoundaryProjection {
    per_stage,  ///< left side under w_k, right side under w_{k+1}
    shared,     ///< both sides under w_k + w_{k+1}
};

struct Config {
    int num_boundaries = 3;
    int k_s = 6;
    double lambda_bdry = 0.3;
    double lambda_align = 0.1;
    double lambda_1 = 0.05;
    double min_seg_frac = 0.08;
    double epsilon = 1e-6;
    BoundaryProjection boundary_projection = BoundaryProjection::per_stage;
    WeightNorm weight_norm = WeightNorm::unit_l2;
    std::uint64_t seed = 0;

    int num_stages() const { return num_boundaries + 1; }
    /// Throws std::invalid_argument on an out-of-range field.
    void validate() const;
};

/// Smallest admissible segment length for a trial of length T.
int min_segment_length(std::size_t T, double min_seg_frac);

/// Standardizes each column to (x - mean) / (population std + eps).
/// Throws DataError naming the row and column of any non-finite entry.
TrialMatrix standardize_trial(const Matrix& raw, double eps, std::string trial_id = {});

/// Throws DataError if the dataset is empty or trials disagree on D.
void validate_dataset(const Dataset& dataset);

struct Violation {
    enum class Kind { trial_count, boundary_count, ordering, bounds, min_length, stage_count, dimension, sparsity, non_finite };
    Kind kind;
    int trial = -1;
    int stage = -1;
    std::string message;
};

/// Every structural invariant a candidate breaks for this dataset; empty
/// means valid.
std::vector<Violation> validate_candidate(const Candidate& c, const Dataset& dataset, const Config& cfg);

/// Boundary-only checks for one trial (ordering, bounds, minimum length).
std::vector<Violation> validate_boundaries(const Boundaries& b, std::size_t T, const Config& cfg, int trial = -1);

/// Half-open [begin, end) interval of stage `k` in a trial of length T.
struct Interval {
    std::size_t begin;
    std::size_t end;
    std::size_t length() const { return end - begin; }
};

Interval stage_interval(const Boundaries& b, std::size_t T, std::size_t k);

/// z_t = w . x_t for t in [interval.begin, interval.end). Zero weights are
/// skipped, so sparse w costs O(nnz) per sample.
std::vector<double> project_stage(const Matrix& x, Interval interval, std::span<const double> w);

}  // namespace ssel
