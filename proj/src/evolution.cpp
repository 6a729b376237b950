#include "ssel/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>

namespace ssel {

namespace {

constexpr std::uint64_t kInitStream = 0x1001;
constexpr std::uint64_t kSelectStream = 0x2002;
constexpr std::uint64_t kOffspringStream = 0x3003;

constexpr double kImprovementTol = 1e-12;

int jitter_radius(std::size_t T, double frac) { return static_cast<int>(std::floor(frac * static_cast<double>(T))); }

std::vector<std::size_t> rank_order(std::span<const double> scores) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    return order;
}

}  // namespace

void EvolutionConfig::validate() const {
    if (population < 2) throw std::invalid_argument("population must be >= 2");
    if (elites <= 0 || elites >= population) throw std::invalid_argument("elites must satisfy 0 < E < P");
    if (max_generations < 1) throw std::invalid_argument("max_generations must be >= 1");
    auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!prob(p_boundary) || !prob(p_weight) || !prob(crossover_rate)) {
        throw std::invalid_argument("probabilities must lie in [0, 1]");
    }
    if (jitter_frac < 0.0) throw std::invalid_argument("jitter_frac must be >= 0");
    if (weight_sigma < 0.0) throw std::invalid_argument("weight_sigma must be >= 0");
    if (patience < 1) throw std::invalid_argument("patience must be >= 1");
    if (archive_size < 1) throw std::invalid_argument("archive_size must be >= 1");
}

Boundaries repair(Boundaries b, std::size_t T, const Config& cfg) {
    const int m = min_segment_length(T, cfg.min_seg_frac);
    const int B = static_cast<int>(b.size());
    const int Ti = static_cast<int>(T);
    if (Ti < (B + 1) * m) {
        throw DataError("trial of length " + std::to_string(T) + " cannot hold " + std::to_string(B + 1) +
                        " segments of length " + std::to_string(m));
    }
    std::sort(b.begin(), b.end());
    for (auto& t : b) t = std::clamp(t, m, Ti - m);
    for (int i = 1; i < B; ++i) b[i] = std::max(b[i], b[i - 1] + m);
    if (B > 0) b[B - 1] = std::min(b[B - 1], Ti - m);
    for (int i = B - 2; i >= 0; --i) b[i] = std::min(b[i], b[i + 1] - m);
    return b;
}

Boundaries quantile_positions(std::size_t T, int num_boundaries) {
    Boundaries out(num_boundaries);
    for (int q = 1; q <= num_boundaries; ++q) {
        out[q - 1] = static_cast<int>(std::lround(q * static_cast<double>(T) / (num_boundaries + 1)));
    }
    return out;
}

void check_trials_admit_candidates(const Dataset& dataset, const Config& cfg) {
    for (const auto& trial : dataset.trials) {
        const int m = min_segment_length(trial.length(), cfg.min_seg_frac);
        if (static_cast<int>(trial.length()) < cfg.num_stages() * m || m < 3) {
            throw DataError("trial '" + trial.trial_id + "' (T = " + std::to_string(trial.length()) + ") is too short for " +
                            std::to_string(cfg.num_stages()) + " stages");
        }
    }
}

std::vector<Candidate> init_population(const Dataset& dataset, const Config& cfg, const EvolutionConfig& ecfg) {
    validate_dataset(dataset);
    check_trials_admit_candidates(dataset, cfg);
    const std::size_t D = dataset.dim();
    const int nnz = std::min<int>(cfg.k_s, static_cast<int>(D));

    std::vector<Candidate> population(ecfg.population);
    for (int i = 0; i < ecfg.population; ++i) {
        Rng rng = make_stream(cfg.seed, kInitStream, static_cast<std::uint64_t>(i));
        Candidate& c = population[i];
        for (const auto& trial : dataset.trials) {
            const std::size_t T = trial.length();
            const int radius = jitter_radius(T, ecfg.jitter_frac);
            Boundaries b = quantile_positions(T, cfg.num_boundaries);
            if (radius > 0) {
                for (auto& t : b) t += uniform_int(rng, -radius, radius);
            }
            c.boundaries.push_back(repair(std::move(b), T, cfg));
        }
        std::vector<std::size_t> features(D);
        for (int k = 0; k < cfg.num_stages(); ++k) {
            std::iota(features.begin(), features.end(), 0);
            std::vector<double> w(D, 0.0);
            for (int s = 0; s < nnz; ++s) {
                const int pick = uniform_int(rng, s, static_cast<int>(D) - 1);
                std::swap(features[s], features[pick]);
                double v = 0.0;
                while (v == 0.0) v = normal(rng, 0.0, 1.0);
                w[features[s]] = v;
            }
            c.weights.push_back(std::move(w));
        }
        normalize_weights(c, cfg);
    }
    return population;
}

std::vector<std::pair<std::size_t, std::size_t>> select_parents(std::span<const double> scores, std::size_t n_pairs, Rng& rng) {
    const std::size_t P = scores.size();
    const auto order = rank_order(scores);
    std::vector<double> weights(P);
    for (std::size_t r = 0; r < P; ++r) weights[r] = static_cast<double>(P - r);  // P - rank + 1, rank = r + 1
    std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(n_pairs);
    for (std::size_t i = 0; i < n_pairs; ++i) {
        const std::size_t a = order[pick(rng)];
        const std::size_t b = order[pick(rng)];
        pairs.emplace_back(a, b);
    }
    return pairs;
}

namespace {

void normalize_stage(std::vector<double>& w, const Config& cfg) {
    if (cfg.weight_norm != WeightNorm::unit_l2) return;
    double ss = 0.0;
    for (double v : w) ss += v * v;
    if (!(ss > 0.0)) return;
    const double norm = std::sqrt(ss);
    for (auto& v : w) v /= norm;
}

}  // namespace

void normalize_weights(Candidate& c, const Config& cfg) {
    for (auto& w : c.weights) normalize_stage(w, cfg);
}

void truncate_to_top_k(std::vector<double>& w, int k) {
    std::vector<std::size_t> idx;
    for (std::size_t d = 0; d < w.size(); ++d) {
        if (w[d] != 0.0) idx.push_back(d);
    }
    if (static_cast<int>(idx.size()) <= k) return;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return std::abs(w[a]) > std::abs(w[b]); });
    for (std::size_t i = static_cast<std::size_t>(k); i < idx.size(); ++i) w[idx[i]] = 0.0;
}

Candidate crossover(const Candidate& p1, const Candidate& p2, std::span<const std::size_t> lengths, const Config& cfg,
                    const EvolutionConfig& ecfg, Rng& rng) {
    if (uniform01(rng) >= ecfg.crossover_rate) return p1;

    Candidate child;
    child.boundaries.reserve(p1.boundaries.size());
    for (std::size_t j = 0; j < p1.boundaries.size(); ++j) {
        Boundaries b(p1.boundaries[j].size());
        for (std::size_t i = 0; i < b.size(); ++i) {
            // Median of two values is their midpoint.
            b[i] = static_cast<int>(std::lround(0.5 * (p1.boundaries[j][i] + p2.boundaries[j][i])));
        }
        child.boundaries.push_back(repair(std::move(b), lengths[j], cfg));
    }
    child.weights.reserve(p1.weights.size());
    for (std::size_t k = 0; k < p1.weights.size(); ++k) {
        std::vector<double> w(p1.weights[k].size());
        for (std::size_t d = 0; d < w.size(); ++d) w[d] = 0.5 * (p1.weights[k][d] + p2.weights[k][d]);
        truncate_to_top_k(w, cfg.k_s);
        child.weights.push_back(std::move(w));
    }
    normalize_weights(child, cfg);
    return child;
}

Candidate mutate(const Candidate& c, std::span<const std::size_t> lengths, const Config& cfg, const EvolutionConfig& ecfg,
                 Rng& rng) {
    Candidate out = c;
    for (std::size_t j = 0; j < out.boundaries.size(); ++j) {
        const int radius = jitter_radius(lengths[j], ecfg.jitter_frac);
        bool moved = false;
        for (auto& t : out.boundaries[j]) {
            if (uniform01(rng) < ecfg.p_boundary && radius > 0) {
                const int delta = uniform_int(rng, -radius, radius);
                t += delta;
                moved = moved || delta != 0;
            }
        }
        if (moved) out.boundaries[j] = repair(std::move(out.boundaries[j]), lengths[j], cfg);
    }

    for (auto& w : out.weights) {
        bool perturbed = false;
        std::vector<std::size_t> support;
        for (std::size_t d = 0; d < w.size(); ++d) {
            if (w[d] != 0.0) support.push_back(d);
        }
        for (std::size_t d : support) {
            if (uniform01(rng) >= ecfg.p_weight) continue;
            if (uniform01(rng) < 0.5) {
                const double v = w[d] + normal(rng, 0.0, ecfg.weight_sigma);
                if (v != 0.0) {
                    w[d] = v;
                    perturbed = true;
                }
            } else {
                std::vector<std::size_t> zeros;
                for (std::size_t e = 0; e < w.size(); ++e) {
                    if (w[e] == 0.0) zeros.push_back(e);
                }
                if (zeros.empty()) continue;
                const std::size_t target = zeros[uniform_int(rng, 0, static_cast<int>(zeros.size()) - 1)];
                w[target] = w[d];
                w[d] = 0.0;
            }
        }
        // Swaps keep the norm; only additive noise needs rescaling.
        if (perturbed) normalize_stage(w, cfg);
    }
    if (!(out == c)) out.cached_score.reset();
    return out;
}

void score_population(std::vector<Candidate>& population, const Dataset& dataset, const Config& cfg, Exec exec) {
    const long n = static_cast<long>(population.size());
    if (exec == Exec::serial) {
        for (long i = 0; i < n; ++i) {
            if (!population[i].cached_score) population[i].cached_score = total_objective(population[i], dataset, cfg).total;
        }
        return;
    }
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) {
        if (population[i].cached_score) continue;
        try {
            population[i].cached_score = total_objective(population[i], dataset, cfg).total;
        } catch (...) {
#pragma omp critical(ssel_score_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
}

void Archive::offer(const Candidate& c, double score) {
    auto same = std::find_if(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.candidate.boundaries == c.boundaries; });
    if (same != entries_.end()) {
        if (score >= same->score) return;
        same->candidate = c;
        same->score = score;
    } else {
        if (entries_.size() >= capacity_ && score >= entries_.back().score) return;
        entries_.push_back({c, score, counter_++});
    }
    entries_.back().candidate.cached_score = entries_.back().score;
    std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) {
        return a.score != b.score ? a.score < b.score : a.order < b.order;
    });
    if (entries_.size() > capacity_) entries_.resize(capacity_);
    for (auto& e : entries_) e.candidate.cached_score = e.score;
}

std::vector<double> flatten_candidate(const Candidate& c, std::span<const std::size_t> lengths) {
    std::vector<double> out;
    for (std::size_t j = 0; j < c.boundaries.size(); ++j) {
        for (int t : c.boundaries[j]) out.push_back(static_cast<double>(t) / static_cast<double>(lengths[j]));
    }
    for (const auto& w : c.weights) out.insert(out.end(), w.begin(), w.end());
    return out;
}

SselResult run_ssel(const Dataset& dataset, const Config& cfg, const EvolutionConfig& ecfg, Exec exec,
                    const GenerationObserver& observer) {
    cfg.validate();
    ecfg.validate();
    const auto lengths = dataset.lengths();

    SselResult result{Archive(static_cast<std::size_t>(ecfg.archive_size)), {}};
    auto population = init_population(dataset, cfg, ecfg);
    double best_so_far = std::numeric_limits<double>::infinity();
    int stall = 0;

    for (int g = 0; g < ecfg.max_generations; ++g) {
        score_population(population, dataset, cfg, exec);
        if (observer) observer(g, population);

        std::vector<double> scores(population.size());
        for (std::size_t i = 0; i < population.size(); ++i) scores[i] = *population[i].cached_score;
        for (std::size_t i = 0; i < population.size(); ++i) result.archive.offer(population[i], scores[i]);

        const auto order = rank_order(scores);
        const double best = scores[order.front()];
        const double mean = std::accumulate(scores.begin(), scores.end(), 0.0) / static_cast<double>(scores.size());
        result.history.generations.push_back({g, best, mean, flatten_candidate(population[order.front()], lengths)});
        if (std::find(ecfg.snapshot_generations.begin(), ecfg.snapshot_generations.end(), g) != ecfg.snapshot_generations.end()) {
            PopulationSnapshot snap{g, {}, scores};
            for (const auto& c : population) snap.vectors.push_back(flatten_candidate(c, lengths));
            result.history.snapshots.push_back(std::move(snap));
        }

        if (best < best_so_far - kImprovementTol) {
            best_so_far = best;
            stall = 0;
        } else if (++stall >= ecfg.patience) {
            result.history.early_stopped = true;
            break;
        }
        if (g + 1 == ecfg.max_generations) break;

        std::vector<Candidate> next;
        next.reserve(population.size());
        for (int e = 0; e < ecfg.elites; ++e) next.push_back(population[order[e]]);

        Rng select_rng = make_stream(cfg.seed, kSelectStream, static_cast<std::uint64_t>(g));
        const auto pairs = select_parents(scores, population.size() - ecfg.elites, select_rng);
        for (std::size_t s = 0; s < pairs.size(); ++s) {
            Rng rng = make_stream(cfg.seed, kOffspringStream, static_cast<std::uint64_t>(g), s);
            const auto& [a, b] = pairs[s];
            Candidate child = crossover(population[a], population[b], lengths, cfg, ecfg, rng);
            if (!(child == population[a])) child.cached_score.reset();
            next.push_back(mutate(child, lengths, cfg, ecfg, rng));
        }
        population = std::move(next);
    }
    return result;
}

}  // namespace ssel
