#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "ssel/core.hpp"
#include "ssel/evolution.hpp"
#include "ssel/io.hpp"
#include "ssel/metrics.hpp"

namespace ssel {

/// Bad invocation (as opposed to bad data); the CLI maps it to exit code 2.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

namespace fs = std::filesystem;

/// "out.ndjson" + "archive.ndjson" -> "out.archive.ndjson".
fs::path sidecar(const fs::path& output, const std::string& suffix);

/// A single trial CSV, or every *.csv in a directory in name order.
std::vector<Dataset> load_datasets(const fs::path& input, double eps);

struct SynthOptions {
    std::string profile = "planted";  ///< "planted" or "regime"
    int subjects = 1;
    int trials = 10;
    int t_min = 280;
    int t_max = 320;
    int dim = 70;
};

/// Subject s is generated from seed + s. One subject writes `output` as a
/// CSV; several write subject_01.csv ... into the directory `output`. The
/// ground truth goes to a .truth.json sidecar either way.
void cmd_synth(const SynthOptions& opt, std::uint64_t seed, const fs::path& output);

/// Result records to `output`; SSEL also writes .archive.ndjson and
/// .history.json sidecars.
void cmd_segment(const fs::path& input, Method method, const RunConfig& cfg, const fs::path& output);

/// Metrics CSV to `output`; SSEL runs with an archive sidecar also get a
/// .jaccard.csv with the per-stage K x K matrices.
void cmd_evaluate(const fs::path& results, const fs::path& input, TrajectoryMode mode, const RunConfig& cfg, const fs::path& output);

/// Friedman, Kendall's W and Holm-adjusted pairwise Wilcoxon per metric. The
/// unit of analysis is the subject mean, or the trial when there is only
/// one subject. CSV to `output`, summary to a .txt sidecar.
void cmd_compare(const std::vector<fs::path>& metric_files, const RunConfig& cfg, const fs::path& output);

struct SweepOptions {
    std::vector<double> mu{0.05, 0.1, 0.2};
    std::vector<double> chi{0.4, 0.6, 0.8};
    int seeds = 1;
};

struct SweepCurve {
    std::string subject_id;
    double mu;
    double chi;
    std::uint64_t seed;
    std::vector<GenerationRecord> generations;
};

/// One SSEL run per (subject, mu, chi, seed); seeds cfg.seed .. cfg.seed +
/// seeds - 1 are shared by every grid point.
std::vector<SweepCurve> sweep_curves(const std::vector<Dataset>& datasets, const SweepOptions& opt, const RunConfig& cfg);
void cmd_sweep(const fs::path& input, const SweepOptions& opt, const RunConfig& cfg, const fs::path& output);

/// Long-format `stage,band,channel,weight` over every archive record given.
void cmd_export_heatmap(const std::vector<fs::path>& archives, const RunConfig& cfg, const fs::path& output);

/// PCA of the snapshot populations of one subject's history. Empty
/// `subject` takes the first. Writes the landscape CSV, a .trajectory.csv
/// of the best candidate per generation and a .components.csv.
void cmd_export_landscape(const fs::path& history, const std::string& subject, const RunConfig& cfg, const fs::path& output);

}  // namespace ssel
