#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "ssel/core.hpp"
#include "ssel/objective.hpp"
#include "ssel/rng.hpp"

namespace ssel {

struct EvolutionConfig {
    int population = 60;
    int elites = 6;
    int max_generations = 120;
    double p_boundary = 0.1;
    double p_weight = 0.1;
    double jitter_frac = 0.05;
    double weight_sigma = 0.05;
    double crossover_rate = 0.7;
    int patience = 15;
    int archive_size = 5;
    std::vector<int> snapshot_generations{30, 60, 90};

    void validate() const;
};

/// How population scoring is executed. Both paths produce identical scores.
enum class Exec { serial, parallel };

/// Sorts, clamps into [m, T - m] and sweeps left-to-right then right-to-left
/// so every segment has at least m = ceil(min_seg_frac * T) samples.
/// Throws DataError when T < (B + 1) * m.
Boundaries repair(Boundaries b, std::size_t T, const Config& cfg);

/// Evenly spaced positions round(q * T / (B + 1)), q = 1..B.
Boundaries quantile_positions(std::size_t T, int num_boundaries);

/// Throws DataError naming the first trial too short for B + 1 segments.
void check_trials_admit_candidates(const Dataset& dataset, const Config& cfg);

std::vector<Candidate> init_population(const Dataset& dataset, const Config& cfg, const EvolutionConfig& ecfg);

/// Draws n_pairs parent index pairs; each parent is sampled with probability
/// proportional to (P - rank + 1), rank 1 = lowest score, ties broken by index.
std::vector<std::pair<std::size_t, std::size_t>> select_parents(std::span<const double> scores, std::size_t n_pairs, Rng& rng);

/// Rescales each nonzero stage vector to unit L2 norm when cfg asks for it.
void normalize_weights(Candidate& c, const Config& cfg);

/// Keeps the k largest-magnitude entries (ties by lower index), zeroing the rest.
void truncate_to_top_k(std::vector<double>& w, int k);

Candidate crossover(const Candidate& p1, const Candidate& p2, std::span<const std::size_t> lengths, const Config& cfg,
                    const EvolutionConfig& ecfg, Rng& rng);

Candidate mutate(const Candidate& c, std::span<const std::size_t> lengths, const Config& cfg, const EvolutionConfig& ecfg,
                 Rng& rng);

/// Fills cached_score for every member that lacks one.
void score_population(std::vector<Candidate>& population, const Dataset& dataset, const Config& cfg, Exec exec);

/// The K best candidates seen so far, distinct by boundary set.
class Archive {
public:
    struct Entry {
        Candidate candidate;
        double score;
        std::uint64_t order;  ///< first time this boundary set reached the archive
    };

    explicit Archive(std::size_t capacity) : capacity_(capacity) {}

    void offer(const Candidate& c, double score);
    const std::vector<Entry>& entries() const { return entries_; }
    std::size_t capacity() const { return capacity_; }
    const Candidate& best() const { return entries_.front().candidate; }

private:
    std::size_t capacity_;
    std::uint64_t counter_ = 0;
    std::vector<Entry> entries_;
};

/// Normalized boundaries of every trial followed by every stage weight.
std::vector<double> flatten_candidate(const Candidate& c, std::span<const std::size_t> lengths);

struct GenerationRecord {
    int generation;
    double best;
    double mean;
    std::vector<double> best_vector;
};

struct PopulationSnapshot {
    int generation;
    std::vector<std::vector<double>> vectors;
    std::vector<double> scores;
};

struct EvolutionHistory {
    std::vector<GenerationRecord> generations;
    std::vector<PopulationSnapshot> snapshots;
    bool early_stopped = false;

    int generations_run() const { return static_cast<int>(generations.size()); }
};

struct SselResult {
    Archive archive;
    EvolutionHistory history;
};

/// Called once per generation after scoring, before variation.
using GenerationObserver = std::function<void(int generation, const std::vector<Candidate>& population)>;

SselResult run_ssel(const Dataset& dataset, const Config& cfg, const EvolutionConfig& ecfg, Exec exec = Exec::parallel,
                    const GenerationObserver& observer = {});

}  // namespace ssel
