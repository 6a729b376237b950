#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "helpers.hpp"
#include "ssel/evolution.hpp"
#include "ssel/synth.hpp"

using namespace ssel;

namespace {

Dataset small_planted(std::uint64_t seed) {
    auto spec = SynthSpec::planted(seed, SynthSpec::Contrast{}, 30);
    spec.n_trials = 3;
    spec.t_min = 100;
    spec.t_max = 120;
    return generate(spec).dataset;
}

EvolutionConfig quick() {
    EvolutionConfig e;
    e.population = 20;
    e.elites = 2;
    e.max_generations = 15;
    e.snapshot_generations = {5, 10};
    return e;
}

int nnz(const std::vector<double>& w) {
    return static_cast<int>(std::count_if(w.begin(), w.end(), [](double v) { return v != 0.0; }));
}

}  // namespace

TEST_SUITE("evolution") {

TEST_CASE("repair examples") {
    Config cfg;
    CHECK(repair({30, 20, 10}, 100, cfg) == Boundaries{10, 20, 30});
    CHECK(repair({8, 9, 10}, 100, cfg) == Boundaries{8, 16, 24});
    CHECK(repair({25, 50, 75}, 100, cfg) == Boundaries{25, 50, 75});
    CHECK(repair({95, 96, 99}, 100, cfg) == Boundaries{76, 84, 92});
    CHECK_THROWS_AS(repair({1, 2, 3}, 3, cfg), DataError);
}

TEST_CASE("repair output is always valid") {
    Config cfg;
    Rng rng(1);
    for (int i = 0; i < 5000; ++i) {
        const int T = uniform_int(rng, 32, 400);
        Boundaries b{uniform_int(rng, -50, T + 50), uniform_int(rng, -50, T + 50), uniform_int(rng, -50, T + 50)};
        CHECK(validate_boundaries(repair(b, T, cfg), T, cfg).empty());
    }
}

TEST_CASE("quartile positions") {
    CHECK(quantile_positions(100, 3) == Boundaries{25, 50, 75});
    CHECK(quantile_positions(200, 3) == Boundaries{50, 100, 150});
}

TEST_CASE("short trials are rejected by id") {
    Config cfg;
    auto ds = testing::dataset_of({Matrix(100, 2), Matrix(20, 2)});
    try {
        check_trials_admit_candidates(ds, cfg);
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("t1") != std::string::npos);
    }
}

TEST_CASE("initial population is valid, sparse and seeded") {
    Config cfg;
    cfg.seed = 42;
    auto ds = small_planted(3);
    EvolutionConfig e = quick();
    auto pop = init_population(ds, cfg, e);
    CHECK(pop.size() == 20);
    for (const auto& c : pop) {
        CHECK(validate_candidate(c, ds, cfg).empty());
        for (const auto& w : c.weights) {
            CHECK(nnz(w) == cfg.k_s);
            double n2 = 0.0;
            for (double v : w) n2 += v * v;
            CHECK(std::sqrt(n2) == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    CHECK(init_population(ds, cfg, e) == pop);
    cfg.seed = 43;
    CHECK(init_population(ds, cfg, e) != pop);
}

TEST_CASE("no jitter gives exact quartiles") {
    Config cfg;
    EvolutionConfig e = quick();
    e.jitter_frac = 0.0;
    auto ds = testing::dataset_of({Matrix(100, 8)});
    for (const auto& c : init_population(ds, cfg, e)) CHECK(c.boundaries[0] == Boundaries{25, 50, 75});
}

TEST_CASE("rank-proportional selection with two members") {
    std::vector<double> scores{-1.0, 5.0};
    Rng rng(7);
    auto pairs = select_parents(scores, 100000, rng);
    double best = 0;
    for (auto [a, b] : pairs) best += (a == 0) + (b == 0);
    CHECK(best / 200000.0 == doctest::Approx(2.0 / 3.0).epsilon(0.01));
}

TEST_CASE("selection frequencies follow linear rank weights") {
    std::vector<double> scores{3.0, -2.0, 7.0, 0.5, 1.0};  // ranks 4, 1, 5, 2, 3
    const double weight[] = {2, 5, 1, 4, 3};
    Rng rng(11);
    auto pairs = select_parents(scores, 50000, rng);
    std::vector<double> freq(5, 0.0);
    for (auto [a, b] : pairs) {
        freq[a] += 1;
        freq[b] += 1;
    }
    for (int i = 0; i < 5; ++i) CHECK(std::abs(freq[i] / 100000.0 - weight[i] / 15.0) < 0.01);
}

TEST_CASE("tied scores are ranked by index") {
    std::vector<double> scores(4, 1.0);
    Rng rng(13);
    auto pairs = select_parents(scores, 50000, rng);
    std::vector<double> freq(4, 0.0);
    for (auto [a, b] : pairs) {
        freq[a] += 1;
        freq[b] += 1;
    }
    for (int i = 0; i < 4; ++i) CHECK(std::abs(freq[i] / 100000.0 - (4 - i) / 10.0) < 0.01);
}

TEST_CASE("crossover takes midpoints") {
    Config cfg;
    cfg.weight_norm = WeightNorm::none;
    EvolutionConfig e;
    e.crossover_rate = 1.0;
    Candidate p1, p2;
    p1.boundaries = {{10, 20, 30}};
    p2.boundaries = {{14, 22, 40}};
    p1.weights = p2.weights = std::vector<std::vector<double>>(4, std::vector<double>(3, 0.0));
    const std::size_t T = 100;
    Rng rng(1);
    auto child = crossover(p1, p2, std::span(&T, 1), cfg, e, rng);
    CHECK(child.boundaries[0] == Boundaries{12, 21, 35});
}

TEST_CASE("crossover of identical parents is a fixed point") {
    Config cfg;
    auto ds = small_planted(5);
    EvolutionConfig e;
    e.crossover_rate = 1.0;
    auto pop = init_population(ds, cfg, e);
    const auto lengths = ds.lengths();
    Rng rng(2);
    for (int i = 0; i < 10; ++i) {
        auto child = crossover(pop[i], pop[i], lengths, cfg, e, rng);
        CHECK(child.boundaries == pop[i].boundaries);
        for (std::size_t k = 0; k < 4; ++k) {
            for (std::size_t d = 0; d < ds.dim(); ++d) CHECK(child.weights[k][d] == doctest::Approx(pop[i].weights[k][d]).epsilon(1e-12));
        }
    }
}

TEST_CASE("crossover truncates averaged weights back to the budget") {
    Config cfg;
    cfg.k_s = 3;
    cfg.weight_norm = WeightNorm::none;
    EvolutionConfig e;
    e.crossover_rate = 1.0;
    Candidate p1, p2;
    p1.boundaries = p2.boundaries = {{25, 50, 75}};
    p1.weights.assign(4, std::vector<double>(8, 0.0));
    p2.weights = p1.weights;
    p1.weights[0] = {4, 3, 1, 0, 0, 0, 0, 0};
    p2.weights[0] = {0, 0, 0, -2, 5, 0.5, 0, 0};
    const std::size_t T = 100;
    Rng rng(3);
    auto child = crossover(p1, p2, std::span(&T, 1), cfg, e, rng);
    CHECK(child.weights[0] == std::vector<double>{2, 1.5, 0, 0, 2.5, 0, 0, 0});
}

TEST_CASE("truncation ties keep the lower index") {
    std::vector<double> w{1, -1, 1, 0.5};
    truncate_to_top_k(w, 2);
    CHECK(w == std::vector<double>{1, -1, 0, 0});
}

TEST_CASE("zero crossover rate copies the first parent") {
    Config cfg;
    auto ds = small_planted(6);
    EvolutionConfig e;
    e.crossover_rate = 0.0;
    auto pop = init_population(ds, cfg, e);
    Rng rng(4);
    CHECK(crossover(pop[0], pop[1], ds.lengths(), cfg, e, rng) == pop[0]);
}

TEST_CASE("mutation with zero probabilities is the identity") {
    Config cfg;
    auto ds = small_planted(7);
    EvolutionConfig e;
    e.p_boundary = 0.0;
    e.p_weight = 0.0;
    auto pop = init_population(ds, cfg, e);
    Rng rng(5);
    for (const auto& c : pop) CHECK(mutate(c, ds.lengths(), cfg, e, rng) == c);
}

TEST_CASE("boundary jitter is bounded by the jitter fraction") {
    Config cfg;
    EvolutionConfig e;
    e.p_boundary = 1.0;
    e.p_weight = 0.0;
    Candidate c;
    c.boundaries = {{50, 100, 150}};
    c.weights.assign(4, std::vector<double>(5, 0.0));
    const std::size_t T = 200;
    Rng rng(6);
    int max_move = 0;
    for (int i = 0; i < 10000; ++i) {
        auto m = mutate(c, std::span(&T, 1), cfg, e, rng);
        for (int b = 0; b < 3; ++b) max_move = std::max(max_move, std::abs(m.boundaries[0][b] - c.boundaries[0][b]));
    }
    CHECK(max_move <= 10);
    CHECK(max_move == 10);
}

TEST_CASE("mutation keeps validity and support sizes") {
    Config cfg;
    auto ds = small_planted(8);
    EvolutionConfig e;
    e.p_boundary = 0.5;
    e.p_weight = 0.5;
    auto pop = init_population(ds, cfg, e);
    Rng rng(9);
    for (int rep = 0; rep < 200; ++rep) {
        const auto& c = pop[rep % pop.size()];
        auto m = mutate(c, ds.lengths(), cfg, e, rng);
        CHECK(validate_candidate(m, ds, cfg).empty());
        for (std::size_t k = 0; k < 4; ++k) CHECK(nnz(m.weights[k]) == nnz(c.weights[k]));
    }
}

TEST_CASE("unit normalization and its opt-out") {
    Candidate c;
    c.weights = {{3, 4}, {0, 0}, {0, -2}, {1, 1}};
    Config raw;
    raw.weight_norm = WeightNorm::none;
    auto copy = c;
    normalize_weights(copy, raw);
    CHECK(copy == c);
    normalize_weights(c, Config{});
    CHECK(c.weights[0] == std::vector<double>{0.6, 0.8});
    CHECK(c.weights[1] == std::vector<double>{0, 0});
    CHECK(c.weights[2] == std::vector<double>{0, -1});
}

TEST_CASE("archive holds the K best distinct boundary sets") {
    Archive a(2);
    Candidate c1, c2, c3;
    c1.boundaries = {{1, 2, 3}};
    c2.boundaries = {{2, 3, 4}};
    c3.boundaries = {{3, 4, 5}};
    a.offer(c1, 5.0);
    a.offer(c2, 3.0);
    a.offer(c1, 4.0);
    a.offer(c3, 4.5);
    REQUIRE(a.entries().size() == 2);
    CHECK(a.entries()[0].score == 3.0);
    CHECK(a.entries()[1].score == 4.0);
    CHECK(a.entries()[1].candidate.boundaries == c1.boundaries);
    a.offer(c3, 4.0);
    CHECK(a.entries()[1].candidate.boundaries == c1.boundaries);
}

TEST_CASE("run invariants: monotone best, constant size, validity, snapshots") {
    Config cfg;
    cfg.seed = 9;
    auto ds = small_planted(9);
    EvolutionConfig e = quick();
    int generations_seen = 0;
    auto res = run_ssel(ds, cfg, e, Exec::serial, [&](int g, const std::vector<Candidate>& pop) {
        CHECK(g == generations_seen++);
        CHECK(pop.size() == 20);
        for (const auto& c : pop) CHECK(validate_candidate(c, ds, cfg).empty());
    });
    const auto& gens = res.history.generations;
    CHECK(static_cast<int>(gens.size()) == generations_seen);
    for (std::size_t g = 1; g < gens.size(); ++g) CHECK(gens[g].best <= gens[g - 1].best);
    REQUIRE(res.history.snapshots.size() == 2);
    CHECK(res.history.snapshots[0].generation == 5);
    CHECK(res.history.snapshots[0].vectors.size() == 20);
    CHECK(res.archive.entries().front().score == gens.back().best);
}

TEST_CASE("archive equals a brute-force log of every scored candidate") {
    Config cfg;
    cfg.seed = 21;
    auto ds = small_planted(21);
    EvolutionConfig e = quick();
    e.archive_size = 4;
    std::map<std::vector<Boundaries>, std::pair<double, int>> best;  // boundary set -> (score, first seen)
    int seen = 0;
    auto res = run_ssel(ds, cfg, e, Exec::serial, [&](int, const std::vector<Candidate>& pop) {
        for (const auto& c : pop) {
            auto [it, inserted] = best.try_emplace(c.boundaries, *c.cached_score, seen++);
            if (!inserted) it->second.first = std::min(it->second.first, *c.cached_score);
        }
    });
    std::vector<std::pair<double, std::vector<Boundaries>>> all;
    for (const auto& [b, v] : best) all.push_back({v.first, b});
    std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    REQUIRE(res.archive.entries().size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(res.archive.entries()[i].score == all[i].first);
        CHECK(res.archive.entries()[i].candidate.boundaries == all[i].second);
    }
}

TEST_CASE("serial and parallel runs are identical") {
    Config cfg;
    cfg.seed = 77;
    auto ds = small_planted(77);
    EvolutionConfig e = quick();
    auto a = run_ssel(ds, cfg, e, Exec::serial);
    auto b = run_ssel(ds, cfg, e, Exec::parallel);
    auto c = run_ssel(ds, cfg, e, Exec::parallel);
    REQUIRE(a.archive.entries().size() == b.archive.entries().size());
    for (std::size_t i = 0; i < a.archive.entries().size(); ++i) {
        CHECK(a.archive.entries()[i].candidate == b.archive.entries()[i].candidate);
        CHECK(a.archive.entries()[i].score == b.archive.entries()[i].score);
        CHECK(c.archive.entries()[i].candidate == b.archive.entries()[i].candidate);
    }
    REQUIRE(a.history.generations.size() == b.history.generations.size());
    for (std::size_t g = 0; g < a.history.generations.size(); ++g) {
        CHECK(a.history.generations[g].best == b.history.generations[g].best);
        CHECK(a.history.generations[g].mean == b.history.generations[g].mean);
        CHECK(a.history.generations[g].best_vector == b.history.generations[g].best_vector);
    }
}

TEST_CASE("without variation the population only copies generation zero") {
    Config cfg;
    cfg.seed = 5;
    auto ds = small_planted(5);
    EvolutionConfig e = quick();
    e.crossover_rate = 0.0;
    e.p_boundary = 0.0;
    e.p_weight = 0.0;
    e.patience = 100;
    std::vector<Candidate> first;
    run_ssel(ds, cfg, e, Exec::serial, [&](int g, const std::vector<Candidate>& pop) {
        if (g == 0) {
            first = pop;
            return;
        }
        for (const auto& c : pop) CHECK(std::find(first.begin(), first.end(), c) != first.end());
    });
}

TEST_CASE("early stop after the patience window") {
    Config cfg;
    cfg.seed = 5;
    auto ds = small_planted(5);
    EvolutionConfig e = quick();
    e.crossover_rate = 0.0;
    e.p_boundary = 0.0;
    e.p_weight = 0.0;
    e.patience = 3;
    e.max_generations = 50;
    auto res = run_ssel(ds, cfg, e, Exec::serial);
    CHECK(res.history.early_stopped);
    // The best never improves after generation 0.
    CHECK(res.history.generations_run() == 4);
}

TEST_CASE("evolution config validation") {
    EvolutionConfig e;
    CHECK_NOTHROW(e.validate());
    CHECK(e.population == 60);
    CHECK(e.elites == 6);
    CHECK(e.patience == 15);
    CHECK(e.archive_size == 5);
    e.elites = 60;
    CHECK_THROWS_AS(e.validate(), std::invalid_argument);
    e = EvolutionConfig{};
    e.p_weight = 1.5;
    CHECK_THROWS_AS(e.validate(), std::invalid_argument);
}

}
