#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ssel/baselines.hpp"
#include "ssel/core.hpp"
#include "ssel/evolution.hpp"
#include "ssel/objective.hpp"

namespace ssel {

/// Everything a run depends on; serialized key-for-key as JSON.
struct RunConfig {
    Config core;
    EvolutionConfig evolution;
    BaselineConfig baselines;

    void validate() const;
};

/// Applies defaults for absent keys; throws std::invalid_argument on an
/// unknown key or a value of the wrong type.
RunConfig run_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& cfg);
/// Empty path gives the defaults.
RunConfig load_run_config(const std::string& path);
/// 64-bit FNV-1a of the canonical JSON dump, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

// ---------------------------------------------------------------- trial CSV

/// Header `trial_id,t,<features...>`; t is 0-based and contiguous per trial.
/// Trials are standardized on load. Errors carry the 1-based line number.
Dataset read_trial_csv(std::istream& in, double eps, std::string subject_id);
Dataset read_trial_csv(const std::filesystem::path& path, double eps);
/// Writes the raw (pre-standardization) values.
std::string format_trial_csv(const Dataset& dataset);

/// Writes to a sibling temporary file and renames it over `path`.
void atomic_write(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

// ---------------------------------------------------------------- results

struct StageFeature {
    std::size_t index;
    std::string label;
    double weight;
    bool operator==(const StageFeature&) const = default;
};

struct ResultRecord {
    std::string subject_id;
    Method method = Method::ssel;
    std::string trial_id;
    std::size_t length = 0;
    Boundaries boundaries;
    std::optional<ObjectiveBreakdown> objective;     ///< SSEL only
    std::vector<std::vector<StageFeature>> stages;   ///< SSEL only, nonzero weights per stage
    std::string config_hash;
    std::uint64_t seed = 0;

    bool operator==(const ResultRecord&) const = default;
};

nlohmann::json to_json(const ResultRecord& r);
ResultRecord result_from_json(const nlohmann::json& j);
std::vector<ResultRecord> read_results(const std::filesystem::path& path);
std::string format_ndjson(const std::vector<nlohmann::json>& lines);

/// One archive member of an SSEL run.
struct ArchiveRecord {
    std::string subject_id;
    int rank = 0;
    ObjectiveBreakdown objective;
    std::vector<std::string> trial_ids;
    std::vector<std::size_t> lengths;
    std::vector<Boundaries> boundaries;
    std::vector<std::vector<double>> weights;  ///< dense, per stage
    std::vector<std::string> feature_labels;
    std::string config_hash;
    std::uint64_t seed = 0;
};

nlohmann::json to_json(const ArchiveRecord& r);
ArchiveRecord archive_from_json(const nlohmann::json& j);
std::vector<ArchiveRecord> read_archive(const std::filesystem::path& path);

nlohmann::json to_json(const EvolutionHistory& h);
EvolutionHistory history_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------- metrics CSV

struct MetricsRow {
    std::string subject_id;
    std::string trial_id;
    std::string method;
    std::string mode;
    std::size_t length = 0;
    double ar_gain = 0.0;
    double gen_gain = 0.0;
    int gen_gain_stages = 0;
    double boundary_contrast = 0.0;
    std::vector<double> mad;      ///< per boundary, SSEL with an archive
    double mad_overall = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> jaccard;  ///< per stage, SSEL with an archive
    std::string config_hash;
};

std::string format_metrics_csv(const std::vector<MetricsRow>& rows, int num_boundaries);
std::vector<MetricsRow> read_metrics_csv(const std::filesystem::path& path);

}  // namespace ssel
