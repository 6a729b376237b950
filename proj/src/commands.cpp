#include "ssel/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "ssel/baselines.hpp"
#include "ssel/exports.hpp"
#include "ssel/objective.hpp"
#include "ssel/stats.hpp"
#include "ssel/synth.hpp"

namespace ssel {

using nlohmann::json;

namespace {

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

std::string num(double v) { return std::isnan(v) ? std::string() : format_double(v); }

std::vector<std::vector<StageFeature>> stage_features(const Candidate& c, const FeatureAxis& axis) {
    std::vector<std::vector<StageFeature>> out;
    for (const auto& w : c.weights) {
        auto idx = top_features(w, w.size());
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return std::abs(w[a]) > std::abs(w[b]); });
        std::vector<StageFeature> stage;
        for (std::size_t d : idx) stage.push_back({d, axis.label(d), w[d]});
        out.push_back(std::move(stage));
    }
    return out;
}

std::vector<std::string> feature_labels(const FeatureAxis& axis) {
    std::vector<std::string> out;
    for (std::size_t d = 0; d < axis.dim(); ++d) out.push_back(axis.label(d));
    return out;
}

SynthSpec synth_spec(const SynthOptions& opt, std::uint64_t seed) {
    SynthSpec spec;
    SynthSpec::Contrast contrast;
    if (opt.profile == "planted") {
        spec = SynthSpec::planted(seed, contrast, opt.dim);
    } else if (opt.profile == "regime") {
        // Sharp shifts at the same relative positions in every trial.
        contrast.mean_shift = 4.0;
        spec = SynthSpec::planted(seed, contrast, opt.dim);
        spec.jitter_frac = 0.0;
    } else {
        throw UsageError("unknown synth profile '" + opt.profile + "'");
    }
    spec.n_trials = opt.trials;
    spec.t_min = opt.t_min;
    spec.t_max = opt.t_max;
    return spec;
}

const TrialMatrix& find_trial(const std::map<std::string, const Dataset*>& by_subject, const std::string& subject,
                              const std::string& trial_id) {
    auto it = by_subject.find(subject);
    if (it == by_subject.end()) throw DataError("subject '" + subject + "' not found in input");
    for (const auto& t : it->second->trials) {
        if (t.trial_id == trial_id) return t;
    }
    throw DataError("trial '" + trial_id + "' of subject '" + subject + "' not found in input");
}

}  // namespace

fs::path sidecar(const fs::path& output, const std::string& suffix) {
    auto p = output;
    p.replace_extension();
    p += "." + suffix;
    return p;
}

std::vector<Dataset> load_datasets(const fs::path& input, double eps) {
    std::vector<Dataset> out;
    if (fs::is_directory(input)) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(input)) {
            if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        if (files.empty()) throw DataError("no .csv files in '" + input.string() + "'");
        for (const auto& f : files) out.push_back(read_trial_csv(f, eps));
    } else {
        out.push_back(read_trial_csv(input, eps));
    }
    return out;
}

// ---------------------------------------------------------------- synth

void cmd_synth(const SynthOptions& opt, std::uint64_t seed, const fs::path& output) {
    if (opt.subjects < 1) throw UsageError("--subjects must be >= 1");
    json subjects = json::array();
    for (int s = 0; s < opt.subjects; ++s) {
        SynthSpec spec = synth_spec(opt, seed + static_cast<std::uint64_t>(s));
        try {
            spec.validate();
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        fs::path file = output;
        if (opt.subjects == 1) {
            spec.subject_id = output.stem().string();
        } else {
            char name[32];
            std::snprintf(name, sizeof name, "subject_%02d", s + 1);
            spec.subject_id = name;
            file = output / (spec.subject_id + ".csv");
        }
        const auto out = generate(spec);
        atomic_write(file, format_trial_csv(out.dataset));

        std::vector<std::string> ids;
        std::vector<std::size_t> lengths;
        for (const auto& t : out.dataset.trials) {
            ids.push_back(t.trial_id);
            lengths.push_back(t.length());
        }
        subjects.push_back(json{{"subject_id", spec.subject_id},
                                {"seed", spec.seed},
                                {"trial_ids", ids},
                                {"lengths", lengths},
                                {"boundaries", out.truth.boundaries},
                                {"active", out.truth.active}});
    }
    json truth{{"profile", opt.profile}, {"seed", seed}, {"subjects", subjects}};
    atomic_write(sidecar(output, "truth.json"), truth.dump(1) + "\n");
}

// ---------------------------------------------------------------- segment

void cmd_segment(const fs::path& input, Method method, const RunConfig& cfg, const fs::path& output) {
    const auto datasets = load_datasets(input, cfg.core.epsilon);
    const std::string hash = config_hash(cfg);
    std::vector<json> lines;
    std::vector<json> archive_lines;
    json histories = json::array();

    for (const auto& ds : datasets) {
        if (method == Method::ssel) {
            const auto res = run_ssel(ds, cfg.core, cfg.evolution);
            const auto& best = res.archive.best();
            const auto breakdown = total_objective(best, ds, cfg.core);
            const auto stages = stage_features(best, ds.axis);
            for (std::size_t j = 0; j < ds.trials.size(); ++j) {
                ResultRecord r{ds.subject_id, method, ds.trials[j].trial_id, ds.trials[j].length(), best.boundaries[j],
                               breakdown, stages, hash, cfg.core.seed};
                lines.push_back(to_json(r));
            }
            int rank = 0;
            for (const auto& entry : res.archive.entries()) {
                ArchiveRecord a;
                a.subject_id = ds.subject_id;
                a.rank = ++rank;
                a.objective = total_objective(entry.candidate, ds, cfg.core);
                for (const auto& t : ds.trials) a.trial_ids.push_back(t.trial_id);
                a.lengths = ds.lengths();
                a.boundaries = entry.candidate.boundaries;
                a.weights = entry.candidate.weights;
                a.feature_labels = feature_labels(ds.axis);
                a.config_hash = hash;
                a.seed = cfg.core.seed;
                archive_lines.push_back(to_json(a));
            }
            histories.push_back(json{{"subject_id", ds.subject_id}, {"history", to_json(res.history)}});
        } else {
            for (const auto& trial : ds.trials) {
                ResultRecord r;
                r.subject_id = ds.subject_id;
                r.method = method;
                r.trial_id = trial.trial_id;
                r.length = trial.length();
                r.boundaries = run_baseline(method, trial, cfg.core, cfg.baselines);
                r.config_hash = hash;
                r.seed = cfg.core.seed;
                lines.push_back(to_json(r));
            }
        }
    }
    atomic_write(output, format_ndjson(lines));
    if (method == Method::ssel) {
        atomic_write(sidecar(output, "archive.ndjson"), format_ndjson(archive_lines));
        json h{{"config", to_json(cfg)}, {"config_hash", hash}, {"subjects", histories}};
        atomic_write(sidecar(output, "history.json"), h.dump() + "\n");
    }
}

// ---------------------------------------------------------------- evaluate

void cmd_evaluate(const fs::path& results, const fs::path& input, TrajectoryMode mode, const RunConfig& cfg, const fs::path& output) {
    const auto records = read_results(results);
    const auto datasets = load_datasets(input, cfg.core.epsilon);
    std::map<std::string, const Dataset*> by_subject;
    for (const auto& ds : datasets) by_subject[ds.subject_id] = &ds;
    const double eps = cfg.core.epsilon;
    const std::string hash = config_hash(cfg);

    // Archive-based stability, per subject.
    std::map<std::string, std::vector<ArchiveRecord>> archives;
    const auto archive_path = sidecar(results, "archive.ndjson");
    if (fs::exists(archive_path)) {
        for (auto& a : read_archive(archive_path)) archives[a.subject_id].push_back(std::move(a));
    }
    struct SubjectStability {
        std::map<std::string, std::vector<double>> mad;  // by trial id
        ChannelSetStability channels;
    };
    std::map<std::string, SubjectStability> stability;
    for (auto& [subject, recs] : archives) {
        if (recs.size() < 2) continue;
        std::sort(recs.begin(), recs.end(), [](const ArchiveRecord& a, const ArchiveRecord& b) { return a.rank < b.rank; });
        std::vector<std::vector<Boundaries>> bounds;
        std::vector<std::vector<std::vector<double>>> weights;
        for (const auto& r : recs) {
            if (r.trial_ids != recs.front().trial_ids) throw DataError("archive of subject '" + subject + "' mixes trial sets");
            bounds.push_back(r.boundaries);
            weights.push_back(r.weights);
        }
        SubjectStability s;
        const auto bs = boundary_stability(bounds, recs.front().lengths);
        for (std::size_t j = 0; j < recs.front().trial_ids.size(); ++j) s.mad[recs.front().trial_ids[j]] = bs.per_trial[j];
        s.channels = channel_set_stability(weights);
        stability[subject] = std::move(s);
    }

    std::vector<MetricsRow> rows;
    int num_boundaries = cfg.core.num_boundaries;
    for (const auto& rec : records) {
        const auto& trial = find_trial(by_subject, rec.subject_id, rec.trial_id);
        if (trial.length() != rec.length) throw DataError("trial '" + rec.trial_id + "' length differs from the results");
        num_boundaries = static_cast<int>(rec.boundaries.size());
        std::vector<double> z;
        if (mode == TrajectoryMode::ssel_weights) {
            if (rec.stages.empty()) {
                throw UsageError("ssel-weights mode needs SSEL records; '" + to_string(rec.method) + "' has no stage weights");
            }
            std::vector<std::vector<double>> dense(rec.stages.size(), std::vector<double>(trial.dim(), 0.0));
            for (std::size_t k = 0; k < rec.stages.size(); ++k) {
                for (const auto& f : rec.stages[k]) {
                    if (f.index >= trial.dim()) throw DataError("feature index out of range in results");
                    dense[k][f.index] = f.weight;
                }
            }
            z = metric_trajectory(trial.x, mode, &rec.boundaries, &dense);
        } else {
            z = metric_trajectory(trial.x, mode);
        }
        MetricsRow row;
        row.subject_id = rec.subject_id;
        row.trial_id = rec.trial_id;
        row.method = to_string(rec.method);
        row.mode = to_string(mode);
        row.length = trial.length();
        row.ar_gain = ar_gain(z, rec.boundaries, eps);
        const auto gg = gen_gain(z, rec.boundaries, eps);
        row.gen_gain = gg.value;
        row.gen_gain_stages = gg.stages_used;
        row.boundary_contrast = boundary_contrast(z, rec.boundaries, eps);
        if (rec.method == Method::ssel) {
            auto it = stability.find(rec.subject_id);
            if (it != stability.end()) {
                auto m = it->second.mad.find(rec.trial_id);
                if (m != it->second.mad.end()) {
                    row.mad = m->second;
                    row.mad_overall = 0.0;
                    for (double v : row.mad) row.mad_overall += v;
                    row.mad_overall /= static_cast<double>(row.mad.size());
                }
                row.jaccard = it->second.channels.per_stage;
            }
        }
        row.config_hash = hash;
        rows.push_back(std::move(row));
    }
    atomic_write(output, format_metrics_csv(rows, num_boundaries));

    if (!stability.empty()) {
        std::string out = "subject_id,stage,candidate_a,candidate_b,jaccard,config_hash\n";
        for (const auto& [subject, s] : stability) {
            for (std::size_t k = 0; k < s.channels.matrices.size(); ++k) {
                const auto& mat = s.channels.matrices[k];
                for (std::size_t a = 0; a < mat.size(); ++a) {
                    for (std::size_t b = 0; b < mat.size(); ++b) {
                        out += subject + ',' + std::to_string(k + 1) + ',' + std::to_string(a + 1) + ',' + std::to_string(b + 1) +
                               ',' + format_double(mat[a][b]) + ',' + hash + '\n';
                    }
                }
            }
        }
        atomic_write(sidecar(output, "jaccard.csv"), out);
    }
}

// ---------------------------------------------------------------- compare

void cmd_compare(const std::vector<fs::path>& metric_files, const RunConfig& cfg, const fs::path& output) {
    if (metric_files.empty()) throw UsageError("compare needs at least one metrics file");
    std::vector<MetricsRow> rows;
    for (const auto& f : metric_files) {
        auto part = read_metrics_csv(f);
        rows.insert(rows.end(), part.begin(), part.end());
    }
    if (rows.empty()) throw DataError("no metric rows");

    // Group label: the method, or method@mode when a method appears in several modes.
    std::vector<std::pair<std::string, std::string>> groups;
    for (const auto& r : rows) {
        std::pair<std::string, std::string> g{r.method, r.mode};
        if (std::find(groups.begin(), groups.end(), g) == groups.end()) groups.push_back(g);
    }
    std::map<std::string, int> method_count;
    for (const auto& g : groups) ++method_count[g.first];
    auto label_of = [&](const std::string& method, const std::string& mode) {
        return method_count[method] > 1 ? method + "@" + mode : method;
    };
    std::vector<std::string> labels;
    for (const auto& g : groups) labels.push_back(label_of(g.first, g.second));
    const std::size_t k = labels.size();
    if (k < 2) throw UsageError("compare needs at least two methods");

    std::set<std::string> subjects;
    std::set<std::string> input_hashes;
    for (const auto& r : rows) {
        subjects.insert(r.subject_id);
        input_hashes.insert(r.config_hash);
    }
    const bool by_subject = subjects.size() > 1;
    const std::string unit_name = by_subject ? "subject" : "trial";

    const char* metric_names[] = {"ar_gain", "gen_gain", "boundary_contrast"};
    struct Cell {
        double sum = 0.0;
        int count = 0;
        bool missing = false;
    };
    // acc[metric][label][unit]
    std::map<std::string, std::map<std::string, std::map<std::string, Cell>>> acc;
    std::map<std::string, std::set<std::string>> units_of;
    for (const auto& r : rows) {
        const std::string label = label_of(r.method, r.mode);
        const std::string unit = by_subject ? r.subject_id : r.trial_id;
        if (!by_subject && units_of[label].count(unit)) throw DataError("duplicate trial '" + unit + "' for " + label);
        units_of[label].insert(unit);
        const double vals[] = {r.ar_gain, r.gen_gain, r.boundary_contrast};
        for (int m = 0; m < 3; ++m) {
            auto& cell = acc[metric_names[m]][label][unit];
            if (std::isnan(vals[m])) {
                cell.missing = true;
            } else {
                cell.sum += vals[m];
                ++cell.count;
            }
        }
    }
    const auto& units_ref = units_of[labels.front()];
    for (const auto& l : labels) {
        if (units_of[l] != units_ref) throw DataError("subject mismatch: " + l + " and " + labels.front() + " cover different " + unit_name + "s");
    }
    const std::vector<std::string> units(units_ref.begin(), units_ref.end());

    const std::string hash = config_hash(cfg);
    std::string joined_hashes;
    for (const auto& h : input_hashes) joined_hashes += (joined_hashes.empty() ? "" : ";") + h;

    std::string csv = "metric,test,method_a,method_b,n,k,statistic,z,p,p_holm,effect_r,kendall_w,mean_a,mean_b,note,config_hash\n";
    std::string txt = "unit: " + unit_name + "\nmethods (k = " + std::to_string(k) + "):";
    for (const auto& l : labels) txt += " " + l;
    txt += "\nconfig hash: " + hash + "\nmetrics config hash: " + joined_hashes + "\n";

    for (const char* metric : metric_names) {
        stats::PairedScores scores;
        scores.methods = labels;
        std::size_t dropped = 0;
        for (const auto& u : units) {
            std::vector<double> row;
            bool ok = true;
            for (const auto& l : labels) {
                const auto& cell = acc[metric][l][u];
                if (cell.missing || cell.count == 0) {
                    ok = false;
                    break;
                }
                row.push_back(cell.sum / cell.count);
            }
            if (ok) scores.values.push_back(std::move(row));
            else ++dropped;
        }
        const std::size_t n = scores.n();
        std::string note = dropped ? std::to_string(dropped) + " " + unit_name + "s dropped for missing values" : "";
        txt += "\n[" + std::string(metric) + "] n = " + std::to_string(n) + (note.empty() ? "" : " (" + note + ")") + "\n";
        if (n < 2) {
            csv += std::string(metric) + ",friedman,,," + std::to_string(n) + ',' + std::to_string(k) + ",,,,,,,,,too few units," + hash + '\n';
            txt += "  too few units for testing\n";
            continue;
        }
        try {
            const auto fr = stats::friedman(scores);
            const double w = stats::kendalls_w(fr.chi2, n, k);
            csv += std::string(metric) + ",friedman,,," + std::to_string(n) + ',' + std::to_string(k) + ',' + num(fr.chi2) + ",," +
                   num(fr.p) + ",,," + num(w) + ",,," + note + ',' + hash + '\n';
            txt += "  Friedman chi2(" + std::to_string(fr.df) + ") = " + fmt("%.2f", fr.chi2) + ", p = " + fmt("%.4g", fr.p) +
                   ", Kendall W = " + fmt("%.2f", w) + "\n";
        } catch (const std::exception& e) {
            csv += std::string(metric) + ",friedman,,," + std::to_string(n) + ',' + std::to_string(k) + ",,,,,,,,," + e.what() + ',' + hash + '\n';
            txt += std::string("  Friedman undefined: ") + e.what() + "\n";
        }

        struct Pair {
            std::size_t a, b;
            stats::WilcoxonResult res;
            bool defined;
            std::string note;
            double mean_a, mean_b;
        };
        std::vector<Pair> pairs;
        std::vector<double> pvals;
        for (std::size_t a = 0; a < k; ++a) {
            for (std::size_t b = a + 1; b < k; ++b) {
                std::vector<double> xa, xb;
                for (const auto& row : scores.values) {
                    xa.push_back(row[a]);
                    xb.push_back(row[b]);
                }
                Pair p{a, b, {}, false, {}, 0.0, 0.0};
                for (double v : xa) p.mean_a += v / static_cast<double>(n);
                for (double v : xb) p.mean_b += v / static_cast<double>(n);
                try {
                    p.res = stats::wilcoxon_signed_rank(xa, xb);
                    p.defined = true;
                    pvals.push_back(p.res.p);
                } catch (const stats::UndefinedTest& e) {
                    p.note = std::string("undefined: ") + e.what();
                }
                pairs.push_back(std::move(p));
            }
        }
        const auto adjusted = stats::holm_adjust(pvals);
        std::size_t next = 0;
        for (const auto& p : pairs) {
            csv += std::string(metric) + ",wilcoxon," + labels[p.a] + ',' + labels[p.b] + ',' + std::to_string(n) + ',' + std::to_string(k) + ',';
            if (p.defined) {
                const double holm = adjusted[next++];
                const double r = stats::effect_size_r(p.res.z, n);
                csv += num(p.res.w) + ',' + num(p.res.z) + ',' + num(p.res.p) + ',' + num(holm) + ',' + num(r) + ",," +
                       num(p.mean_a) + ',' + num(p.mean_b) + ',' + (p.res.exact ? "exact" : "normal") + ',' + hash + '\n';
                txt += "  " + labels[p.a] + " vs " + labels[p.b] + ": z = " + fmt("%.2f", p.res.z) + ", p_holm = " + fmt("%.4g", holm) +
                       ", r = " + fmt("%.2f", r) + " (means " + fmt("%.4g", p.mean_a) + " vs " + fmt("%.4g", p.mean_b) + ")\n";
            } else {
                csv += ",,,,,," + num(p.mean_a) + ',' + num(p.mean_b) + ',' + p.note + ',' + hash + '\n';
                txt += "  " + labels[p.a] + " vs " + labels[p.b] + ": " + p.note + "\n";
            }
        }
    }
    atomic_write(output, csv);
    atomic_write(sidecar(output, "txt"), txt);
}

// ---------------------------------------------------------------- sweep

std::vector<SweepCurve> sweep_curves(const std::vector<Dataset>& datasets, const SweepOptions& opt, const RunConfig& cfg) {
    if (opt.mu.empty() || opt.chi.empty() || opt.seeds < 1) throw UsageError("sweep grid must be non-empty and --seeds >= 1");
    std::vector<SweepCurve> out;
    for (const auto& ds : datasets) {
        for (double mu : opt.mu) {
            for (double chi : opt.chi) {
                for (int s = 0; s < opt.seeds; ++s) {
                    Config core = cfg.core;
                    core.seed = cfg.core.seed + static_cast<std::uint64_t>(s);
                    EvolutionConfig ev = cfg.evolution;
                    ev.weight_sigma = mu;
                    ev.crossover_rate = chi;
                    try {
                        ev.validate();
                    } catch (const std::invalid_argument& e) {
                        throw UsageError(e.what());
                    }
                    auto res = run_ssel(ds, core, ev);
                    out.push_back({ds.subject_id, mu, chi, core.seed, std::move(res.history.generations)});
                }
            }
        }
    }
    return out;
}

void cmd_sweep(const fs::path& input, const SweepOptions& opt, const RunConfig& cfg, const fs::path& output) {
    const auto datasets = load_datasets(input, cfg.core.epsilon);
    const auto curves = sweep_curves(datasets, opt, cfg);
    const std::string hash = config_hash(cfg);
    std::string csv = "subject_id,mu,chi,seed,generation,best,mean,config_hash\n";
    for (const auto& c : curves) {
        for (const auto& g : c.generations) {
            csv += c.subject_id + ',' + format_double(c.mu) + ',' + format_double(c.chi) + ',' + std::to_string(c.seed) + ',' +
                   std::to_string(g.generation) + ',' + format_double(g.best) + ',' + format_double(g.mean) + ',' + hash + '\n';
        }
    }
    atomic_write(output, csv);
}

// ---------------------------------------------------------------- exports

void cmd_export_heatmap(const std::vector<fs::path>& archives, const RunConfig& cfg, const fs::path& output) {
    if (archives.empty()) throw UsageError("export-heatmap needs at least one archive file");
    std::vector<ArchiveRecord> records;
    for (const auto& f : archives) {
        auto part = read_archive(f);
        records.insert(records.end(), part.begin(), part.end());
    }
    if (records.empty()) throw DataError("no archive records");
    const auto& labels = records.front().feature_labels;
    const std::size_t stages = records.front().weights.size();
    for (const auto& r : records) {
        if (r.feature_labels != labels) throw DataError("archives disagree on feature labels");
        if (r.weights.size() != stages) throw DataError("archives disagree on stage count");
    }
    const FeatureAxis axis = FeatureAxis::from_labels(labels);
    HeatmapAccumulator acc(stages, labels.size());
    for (const auto& r : records) acc.add(r.weights);
    const auto map = acc.mean();

    const std::string hash = config_hash(cfg);
    std::string csv = "stage,band,channel,weight,config_hash\n";
    for (std::size_t k = 0; k < stages; ++k) {
        for (std::size_t b = 0; b < axis.bands().size(); ++b) {
            for (std::size_t c = 0; c < axis.channels().size(); ++c) {
                csv += std::to_string(k + 1) + ',' + axis.bands()[b] + ',' + axis.channels()[c] + ',' +
                       format_double(map[k][axis.index(b, c)]) + ',' + hash + '\n';
            }
        }
    }
    atomic_write(output, csv);
}

void cmd_export_landscape(const fs::path& history, const std::string& subject, const RunConfig& cfg, const fs::path& output) {
    json doc;
    try {
        doc = json::parse(read_file(history));
    } catch (const json::exception& e) {
        throw DataError(history.string() + ": " + e.what());
    }
    const json* chosen = nullptr;
    for (const auto& s : doc.at("subjects")) {
        if (subject.empty() || s.at("subject_id").get<std::string>() == subject) {
            chosen = &s;
            break;
        }
    }
    if (!chosen) throw DataError("subject '" + subject + "' not in history");
    const auto h = history_from_json(chosen->at("history"));

    std::vector<std::vector<double>> rows;
    for (const auto& snap : h.snapshots) rows.insert(rows.end(), snap.vectors.begin(), snap.vectors.end());
    if (rows.size() < 2) throw DataError("landscape needs at least 2 snapshot candidates");
    const auto pca = fit_pca(rows, 2);
    const std::string hash = config_hash(cfg);
    auto coord = [&](const std::vector<double>& v) {
        auto p = pca.project(v);
        p.resize(2, 0.0);
        return p;
    };

    std::string land = "generation,candidate,pc1,pc2,score,config_hash\n";
    for (const auto& snap : h.snapshots) {
        for (std::size_t i = 0; i < snap.vectors.size(); ++i) {
            const auto p = coord(snap.vectors[i]);
            land += std::to_string(snap.generation) + ',' + std::to_string(i) + ',' + format_double(p[0]) + ',' + format_double(p[1]) +
                    ',' + format_double(snap.scores[i]) + ',' + hash + '\n';
        }
    }
    std::string traj = "generation,pc1,pc2,best,config_hash\n";
    for (const auto& g : h.generations) {
        const auto p = coord(g.best_vector);
        traj += std::to_string(g.generation) + ',' + format_double(p[0]) + ',' + format_double(p[1]) + ',' + format_double(g.best) + ',' +
                hash + '\n';
    }
    std::string comps = "component,variance";
    for (std::size_t d = 0; d < pca.mean.size(); ++d) comps += ",v" + std::to_string(d);
    comps += '\n';
    for (std::size_t c = 0; c < pca.components.size(); ++c) {
        comps += std::to_string(c + 1) + ',' + format_double(pca.variances[c]);
        for (double v : pca.components[c]) comps += ',' + format_double(v);
        comps += '\n';
    }
    atomic_write(output, land);
    atomic_write(sidecar(output, "trajectory.csv"), traj);
    atomic_write(sidecar(output, "components.csv"), comps);
}

}  // namespace ssel
