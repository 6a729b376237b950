#include "ssel/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unistd.h>

namespace ssel {

using nlohmann::json;

namespace {

[[noreturn]] void bad_key(const std::string& where, const std::string& key, const std::string& what) {
    throw std::invalid_argument("config: " + where + key + ": " + what);
}

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
    if (!j.is_object()) throw std::invalid_argument("config: " + (where.empty() ? std::string("document") : where) + " must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!known.count(it.key())) bad_key(where, it.key(), "unknown key");
    }
}

void read_double(const json& j, const char* key, double& out, const std::string& where) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if (!v.is_number()) bad_key(where, key, "expected a number");
    out = v.get<double>();
}

void read_int(const json& j, const char* key, int& out, const std::string& where) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if (!v.is_number_integer()) bad_key(where, key, "expected an integer");
    out = v.get<int>();
}

void read_size(const json& j, const char* key, std::size_t& out, const std::string& where) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if (!v.is_number_unsigned()) bad_key(where, key, "expected a non-negative integer");
    out = v.get<std::size_t>();
}

std::string to_string(BoundaryProjection p) { return p == BoundaryProjection::shared ? "shared" : "per_stage"; }
std::string to_string(WeightNorm n) { return n == WeightNorm::none ? "none" : "unit_l2"; }

json objective_json(const ObjectiveBreakdown& o) {
    return json{{"ar", o.ar_term}, {"bdry", o.bdry_term}, {"align", o.align_term}, {"sparsity", o.sparsity_term}, {"total", o.total}};
}

ObjectiveBreakdown objective_from_json(const json& j) {
    ObjectiveBreakdown o;
    o.ar_term = j.at("ar").get<double>();
    o.bdry_term = j.at("bdry").get<double>();
    o.align_term = j.at("align").get<double>();
    o.sparsity_term = j.at("sparsity").get<double>();
    o.total = j.at("total").get<double>();
    return o;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

bool parse_long(const std::string& s, long& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return !s.empty() && ec == std::errc() && ptr == s.data() + s.size();
}

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

std::vector<json> read_ndjson(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    std::vector<json> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        strip_cr(line);
        if (line.empty()) continue;
        try {
            out.push_back(json::parse(line));
        } catch (const json::exception& e) {
            throw DataError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

std::string opt_double(double v) { return std::isnan(v) ? std::string() : format_double(v); }

}  // namespace

// ---------------------------------------------------------------- config

void RunConfig::validate() const {
    core.validate();
    evolution.validate();
    baselines.validate();
}

RunConfig run_config_from_json(const json& j) {
    RunConfig cfg;
    reject_unknown(j,
                   {"num_boundaries", "k_s", "lambda_bdry", "lambda_align", "lambda_1", "min_seg_frac", "epsilon",
                    "boundary_projection", "weight_norm", "seed", "evolution", "baselines"},
                   "");
    auto& c = cfg.core;
    read_int(j, "num_boundaries", c.num_boundaries, "");
    read_int(j, "k_s", c.k_s, "");
    read_double(j, "lambda_bdry", c.lambda_bdry, "");
    read_double(j, "lambda_align", c.lambda_align, "");
    read_double(j, "lambda_1", c.lambda_1, "");
    read_double(j, "min_seg_frac", c.min_seg_frac, "");
    read_double(j, "epsilon", c.epsilon, "");
    if (j.contains("boundary_projection")) {
        const auto& v = j.at("boundary_projection");
        if (v == "per_stage") c.boundary_projection = BoundaryProjection::per_stage;
        else if (v == "shared") c.boundary_projection = BoundaryProjection::shared;
        else bad_key("", "boundary_projection", "expected \"per_stage\" or \"shared\"");
    }
    if (j.contains("weight_norm")) {
        const auto& v = j.at("weight_norm");
        if (v == "unit_l2") c.weight_norm = WeightNorm::unit_l2;
        else if (v == "none") c.weight_norm = WeightNorm::none;
        else bad_key("", "weight_norm", "expected \"unit_l2\" or \"none\"");
    }
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned()) bad_key("", "seed", "expected a non-negative integer");
        c.seed = j.at("seed").get<std::uint64_t>();
    }

    if (j.contains("evolution")) {
        const auto& e = j.at("evolution");
        const std::string w = "evolution.";
        reject_unknown(e,
                       {"population", "elites", "max_generations", "p_boundary", "p_weight", "jitter_frac", "weight_sigma",
                        "crossover_rate", "patience", "archive_size", "snapshot_generations"},
                       w);
        auto& ev = cfg.evolution;
        read_int(e, "population", ev.population, w);
        read_int(e, "elites", ev.elites, w);
        read_int(e, "max_generations", ev.max_generations, w);
        read_double(e, "p_boundary", ev.p_boundary, w);
        read_double(e, "p_weight", ev.p_weight, w);
        read_double(e, "jitter_frac", ev.jitter_frac, w);
        read_double(e, "weight_sigma", ev.weight_sigma, w);
        read_double(e, "crossover_rate", ev.crossover_rate, w);
        read_int(e, "patience", ev.patience, w);
        read_int(e, "archive_size", ev.archive_size, w);
        if (e.contains("snapshot_generations")) {
            const auto& s = e.at("snapshot_generations");
            if (!s.is_array()) bad_key(w, "snapshot_generations", "expected an array of integers");
            ev.snapshot_generations.clear();
            for (const auto& g : s) {
                if (!g.is_number_integer()) bad_key(w, "snapshot_generations", "expected an array of integers");
                ev.snapshot_generations.push_back(g.get<int>());
            }
        }
    }

    if (j.contains("baselines")) {
        const auto& b = j.at("baselines");
        const std::string w = "baselines.";
        reject_unknown(b,
                       {"pelt_penalty", "kernel_max_pairs", "bocpd_hazard_lambda", "bocpd_mu0", "bocpd_kappa0", "bocpd_alpha0",
                        "bocpd_beta0", "bocpd_prune"},
                       w);
        auto& bl = cfg.baselines;
        if (b.contains("pelt_penalty")) {
            const auto& v = b.at("pelt_penalty");
            if (v.is_null()) bl.pelt_penalty.reset();
            else if (v.is_number()) bl.pelt_penalty = v.get<double>();
            else bad_key(w, "pelt_penalty", "expected a number or null");
        }
        read_size(b, "kernel_max_pairs", bl.kernel_max_pairs, w);
        read_double(b, "bocpd_hazard_lambda", bl.bocpd_hazard_lambda, w);
        read_double(b, "bocpd_mu0", bl.bocpd_mu0, w);
        read_double(b, "bocpd_kappa0", bl.bocpd_kappa0, w);
        read_double(b, "bocpd_alpha0", bl.bocpd_alpha0, w);
        read_double(b, "bocpd_beta0", bl.bocpd_beta0, w);
        read_double(b, "bocpd_prune", bl.bocpd_prune, w);
    }
    cfg.validate();
    return cfg;
}

json to_json(const RunConfig& cfg) {
    const auto& c = cfg.core;
    const auto& e = cfg.evolution;
    const auto& b = cfg.baselines;
    json j{{"num_boundaries", c.num_boundaries},
           {"k_s", c.k_s},
           {"lambda_bdry", c.lambda_bdry},
           {"lambda_align", c.lambda_align},
           {"lambda_1", c.lambda_1},
           {"min_seg_frac", c.min_seg_frac},
           {"epsilon", c.epsilon},
           {"boundary_projection", to_string(c.boundary_projection)},
           {"weight_norm", to_string(c.weight_norm)},
           {"seed", c.seed}};
    j["evolution"] = json{{"population", e.population},
                          {"elites", e.elites},
                          {"max_generations", e.max_generations},
                          {"p_boundary", e.p_boundary},
                          {"p_weight", e.p_weight},
                          {"jitter_frac", e.jitter_frac},
                          {"weight_sigma", e.weight_sigma},
                          {"crossover_rate", e.crossover_rate},
                          {"patience", e.patience},
                          {"archive_size", e.archive_size},
                          {"snapshot_generations", e.snapshot_generations}};
    j["baselines"] = json{{"pelt_penalty", b.pelt_penalty ? json(*b.pelt_penalty) : json(nullptr)},
                          {"kernel_max_pairs", b.kernel_max_pairs},
                          {"bocpd_hazard_lambda", b.bocpd_hazard_lambda},
                          {"bocpd_mu0", b.bocpd_mu0},
                          {"bocpd_kappa0", b.bocpd_kappa0},
                          {"bocpd_alpha0", b.bocpd_alpha0},
                          {"bocpd_beta0", b.bocpd_beta0},
                          {"bocpd_prune", b.bocpd_prune}};
    return j;
}

RunConfig load_run_config(const std::string& path) {
    if (path.empty()) return RunConfig{};
    const std::string text = read_file(path);
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument("config '" + path + "': " + e.what());
    }
    return run_config_from_json(j);
}

std::string config_hash(const RunConfig& cfg) {
    const std::string text = to_json(cfg).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ---------------------------------------------------------------- trial CSV

Dataset read_trial_csv(std::istream& in, double eps, std::string subject_id) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("line 1: empty file");
    strip_cr(line);
    auto header = split_csv(line);
    if (header.size() < 3 || header[0] != "trial_id" || header[1] != "t") {
        throw DataError("line 1: header must start with trial_id,t and name at least one feature");
    }
    std::vector<std::string> labels(header.begin() + 2, header.end());
    const std::size_t D = labels.size();

    Dataset ds;
    ds.subject_id = std::move(subject_id);
    try {
        ds.axis = FeatureAxis::from_labels(labels);
    } catch (const std::invalid_argument& e) {
        throw DataError(std::string("line 1: ") + e.what());
    }

    std::set<std::string> seen;
    std::string current;
    std::vector<double> values;
    std::size_t rows = 0;
    auto flush = [&]() {
        if (rows == 0) return;
        Matrix raw(rows, D);
        std::copy(values.begin(), values.end(), raw.row(0).data());
        ds.trials.push_back(standardize_trial(raw, eps, current));
        values.clear();
        rows = 0;
    };

    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        strip_cr(line);
        if (line.empty()) continue;
        const std::string where = "line " + std::to_string(lineno) + ": ";
        auto fields = split_csv(line);
        if (fields.size() != D + 2) {
            throw DataError(where + "expected " + std::to_string(D + 2) + " fields, found " + std::to_string(fields.size()));
        }
        if (fields[0].empty()) throw DataError(where + "empty trial_id");
        if (fields[0] != current) {
            flush();
            if (!seen.insert(fields[0]).second) throw DataError(where + "rows of trial '" + fields[0] + "' are not contiguous");
            current = fields[0];
        }
        long t = 0;
        if (!parse_long(fields[1], t)) throw DataError(where + "bad sample index '" + fields[1] + "'");
        if (t != static_cast<long>(rows)) {
            throw DataError(where + "trial '" + current + "': expected t = " + std::to_string(rows) + ", found " + fields[1]);
        }
        for (std::size_t d = 0; d < D; ++d) {
            double v = 0.0;
            if (!parse_double(fields[d + 2], v)) throw DataError(where + "column '" + labels[d] + "': bad number '" + fields[d + 2] + "'");
            if (!std::isfinite(v)) throw DataError(where + "column '" + labels[d] + "': non-finite value");
            values.push_back(v);
        }
        ++rows;
    }
    flush();
    if (ds.trials.empty()) throw DataError("no data rows");
    return ds;
}

Dataset read_trial_csv(const std::filesystem::path& path, double eps) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    try {
        return read_trial_csv(in, eps, path.stem().string());
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

std::string format_trial_csv(const Dataset& dataset) {
    std::string out = "trial_id,t";
    for (std::size_t d = 0; d < dataset.dim(); ++d) out += "," + dataset.axis.label(d);
    out += '\n';
    for (const auto& trial : dataset.trials) {
        for (std::size_t t = 0; t < trial.length(); ++t) {
            out += trial.trial_id;
            out += ',';
            out += std::to_string(t);
            for (double v : trial.raw.row(t)) {
                out += ',';
                out += format_double(v);
            }
            out += '\n';
        }
    }
    return out;
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::filesystem::remove(tmp);
            throw std::runtime_error("write failed for '" + path.string() + "'");
        }
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

// ---------------------------------------------------------------- results

json to_json(const ResultRecord& r) {
    json j{{"subject_id", r.subject_id},
           {"method", to_string(r.method)},
           {"trial_id", r.trial_id},
           {"T", r.length},
           {"boundaries", r.boundaries},
           {"config_hash", r.config_hash},
           {"seed", r.seed}};
    if (r.objective) j["objective"] = objective_json(*r.objective);
    if (!r.stages.empty()) {
        json stages = json::array();
        for (const auto& stage : r.stages) {
            json s = json::array();
            for (const auto& f : stage) s.push_back(json{{"index", f.index}, {"label", f.label}, {"weight", f.weight}});
            stages.push_back(std::move(s));
        }
        j["stages"] = std::move(stages);
    }
    return j;
}

ResultRecord result_from_json(const json& j) {
    ResultRecord r;
    r.subject_id = j.at("subject_id").get<std::string>();
    r.method = method_from_string(j.at("method").get<std::string>());
    r.trial_id = j.at("trial_id").get<std::string>();
    r.length = j.at("T").get<std::size_t>();
    r.boundaries = j.at("boundaries").get<Boundaries>();
    r.config_hash = j.at("config_hash").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("objective")) r.objective = objective_from_json(j.at("objective"));
    if (j.contains("stages")) {
        for (const auto& s : j.at("stages")) {
            std::vector<StageFeature> stage;
            for (const auto& f : s) {
                stage.push_back({f.at("index").get<std::size_t>(), f.at("label").get<std::string>(), f.at("weight").get<double>()});
            }
            r.stages.push_back(std::move(stage));
        }
    }
    return r;
}

std::vector<ResultRecord> read_results(const std::filesystem::path& path) {
    std::vector<ResultRecord> out;
    for (const auto& j : read_ndjson(path)) {
        try {
            out.push_back(result_from_json(j));
        } catch (const std::exception& e) {
            throw DataError(path.string() + ": malformed result record: " + e.what());
        }
    }
    return out;
}

std::string format_ndjson(const std::vector<json>& lines) {
    std::string out;
    for (const auto& j : lines) {
        out += j.dump();
        out += '\n';
    }
    return out;
}

json to_json(const ArchiveRecord& r) {
    return json{{"subject_id", r.subject_id}, {"rank", r.rank},
                {"objective", objective_json(r.objective)},
                {"trial_ids", r.trial_ids},
                {"lengths", r.lengths},
                {"boundaries", r.boundaries},
                {"weights", r.weights},
                {"feature_labels", r.feature_labels},
                {"config_hash", r.config_hash},
                {"seed", r.seed}};
}

ArchiveRecord archive_from_json(const json& j) {
    ArchiveRecord r;
    r.subject_id = j.at("subject_id").get<std::string>();
    r.rank = j.at("rank").get<int>();
    r.objective = objective_from_json(j.at("objective"));
    r.trial_ids = j.at("trial_ids").get<std::vector<std::string>>();
    r.lengths = j.at("lengths").get<std::vector<std::size_t>>();
    r.boundaries = j.at("boundaries").get<std::vector<Boundaries>>();
    r.weights = j.at("weights").get<std::vector<std::vector<double>>>();
    r.feature_labels = j.at("feature_labels").get<std::vector<std::string>>();
    r.config_hash = j.at("config_hash").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    if (r.boundaries.size() != r.trial_ids.size() || r.lengths.size() != r.trial_ids.size()) {
        throw DataError("archive record: trial count mismatch");
    }
    for (const auto& w : r.weights) {
        if (w.size() != r.feature_labels.size()) throw DataError("archive record: weight length does not match feature labels");
    }
    return r;
}

std::vector<ArchiveRecord> read_archive(const std::filesystem::path& path) {
    std::vector<ArchiveRecord> out;
    for (const auto& j : read_ndjson(path)) {
        try {
            out.push_back(archive_from_json(j));
        } catch (const DataError&) {
            throw;
        } catch (const std::exception& e) {
            throw DataError(path.string() + ": malformed archive record: " + e.what());
        }
    }
    return out;
}

json to_json(const EvolutionHistory& h) {
    json gens = json::array();
    for (const auto& g : h.generations) {
        gens.push_back(json{{"generation", g.generation}, {"best", g.best}, {"mean", g.mean}, {"best_vector", g.best_vector}});
    }
    json snaps = json::array();
    for (const auto& s : h.snapshots) {
        snaps.push_back(json{{"generation", s.generation}, {"vectors", s.vectors}, {"scores", s.scores}});
    }
    return json{{"early_stopped", h.early_stopped}, {"generations", gens}, {"snapshots", snaps}};
}

EvolutionHistory history_from_json(const json& j) {
    EvolutionHistory h;
    h.early_stopped = j.at("early_stopped").get<bool>();
    for (const auto& g : j.at("generations")) {
        h.generations.push_back({g.at("generation").get<int>(), g.at("best").get<double>(), g.at("mean").get<double>(),
                                 g.at("best_vector").get<std::vector<double>>()});
    }
    for (const auto& s : j.at("snapshots")) {
        h.snapshots.push_back({s.at("generation").get<int>(), s.at("vectors").get<std::vector<std::vector<double>>>(),
                               s.at("scores").get<std::vector<double>>()});
    }
    return h;
}

// ---------------------------------------------------------------- metrics CSV

std::string format_metrics_csv(const std::vector<MetricsRow>& rows, int num_boundaries) {
    std::string out = "subject_id,trial_id,method,mode,T,ar_gain,gen_gain,gen_gain_stages,boundary_contrast";
    for (int i = 1; i <= num_boundaries; ++i) out += ",mad_b" + std::to_string(i);
    out += ",mad_overall";
    for (int k = 1; k <= num_boundaries + 1; ++k) out += ",jaccard_s" + std::to_string(k);
    out += ",config_hash\n";
    for (const auto& r : rows) {
        out += r.subject_id + ',' + r.trial_id + ',' + r.method + ',' + r.mode + ',' + std::to_string(r.length) + ',';
        out += opt_double(r.ar_gain) + ',' + opt_double(r.gen_gain) + ',' + std::to_string(r.gen_gain_stages) + ',' +
               opt_double(r.boundary_contrast);
        for (int i = 0; i < num_boundaries; ++i) {
            out += ',';
            if (static_cast<std::size_t>(i) < r.mad.size()) out += opt_double(r.mad[i]);
        }
        out += ',' + opt_double(r.mad_overall);
        for (int k = 0; k <= num_boundaries; ++k) {
            out += ',';
            if (static_cast<std::size_t>(k) < r.jaccard.size()) out += opt_double(r.jaccard[k]);
        }
        out += ',' + r.config_hash + '\n';
    }
    return out;
}

std::vector<MetricsRow> read_metrics_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line)) throw DataError(path.string() + ": empty metrics file");
    strip_cr(line);
    const auto header = split_csv(line);
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
    for (const char* name : {"subject_id", "trial_id", "method", "mode", "T", "ar_gain", "gen_gain", "gen_gain_stages",
                             "boundary_contrast", "mad_overall", "config_hash"}) {
        if (!col.count(name)) throw DataError(path.string() + ": missing column '" + name + "'");
    }
    std::vector<std::size_t> mad_cols;
    std::vector<std::size_t> jac_cols;
    for (int i = 1; col.count("mad_b" + std::to_string(i)); ++i) mad_cols.push_back(col["mad_b" + std::to_string(i)]);
    for (int k = 1; col.count("jaccard_s" + std::to_string(k)); ++k) jac_cols.push_back(col["jaccard_s" + std::to_string(k)]);

    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<MetricsRow> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        strip_cr(line);
        if (line.empty()) continue;
        const auto f = split_csv(line);
        const std::string where = path.string() + ":" + std::to_string(lineno) + ": ";
        if (f.size() != header.size()) throw DataError(where + "wrong field count");
        auto num = [&](std::size_t c) {
            if (f[c].empty()) return nan;
            double v = 0.0;
            if (!parse_double(f[c], v)) throw DataError(where + "bad number '" + f[c] + "'");
            return v;
        };
        MetricsRow r;
        r.subject_id = f[col["subject_id"]];
        r.trial_id = f[col["trial_id"]];
        r.method = f[col["method"]];
        r.mode = f[col["mode"]];
        long len = 0;
        long stages = 0;
        if (!parse_long(f[col["T"]], len) || !parse_long(f[col["gen_gain_stages"]], stages)) throw DataError(where + "bad integer field");
        r.length = static_cast<std::size_t>(len);
        r.gen_gain_stages = static_cast<int>(stages);
        r.ar_gain = num(col["ar_gain"]);
        r.gen_gain = num(col["gen_gain"]);
        r.boundary_contrast = num(col["boundary_contrast"]);
        r.mad_overall = num(col["mad_overall"]);
        bool any = false;
        for (auto c : mad_cols) any = any || !f[c].empty();
        if (any) for (auto c : mad_cols) r.mad.push_back(num(c));
        any = false;
        for (auto c : jac_cols) any = any || !f[c].empty();
        if (any) for (auto c : jac_cols) r.jaccard.push_back(num(c));
        r.config_hash = f[col["config_hash"]];
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace ssel
