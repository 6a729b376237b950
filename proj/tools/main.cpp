// Command-line front end. Exit codes: 0 ok, 1 runtime error, 2 usage.
#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>

#include "ssel/commands.hpp"

namespace {

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string output;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config, "JSON run configuration");
    cmd->add_option("--seed", c.seed, "Master seed (overrides the config)");
    cmd->add_option("--output,-o", c.output, "Output path")->required();
}

ssel::RunConfig resolve(const Common& c) {
    ssel::RunConfig cfg;
    try {
        cfg = ssel::load_run_config(c.config);
        if (c.seed) cfg.core.seed = *c.seed;
    } catch (const std::invalid_argument& e) {
        throw ssel::UsageError(e.what());
    }
    return cfg;
}

void report(const std::string& command, const std::string& kind, const std::string& message) {
    nlohmann::json j{{"error", {{"command", command}, {"kind", kind}, {"message", message}}}};
    std::cerr << j.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Evolutionary stage segmentation of multichannel trials"};
    app.require_subcommand(1);
    Common common;

    ssel::SynthOptions synth;
    auto* c_synth = app.add_subcommand("synth", "Generate planted synthetic trials");
    add_common(c_synth, common);
    c_synth->add_option("--profile", synth.profile, "planted or regime")->check(CLI::IsMember({"planted", "regime"}));
    c_synth->add_option("--subjects", synth.subjects, "Number of subjects (>1 writes a directory)");
    c_synth->add_option("--trials", synth.trials, "Trials per subject");
    c_synth->add_option("--t-min", synth.t_min);
    c_synth->add_option("--t-max", synth.t_max);
    c_synth->add_option("--dim", synth.dim, "Feature count");

    std::string input;
    std::string method = "ssel";
    auto* c_segment = app.add_subcommand("segment", "Segment every trial of a subject");
    add_common(c_segment, common);
    c_segment->add_option("input", input, "Trial CSV or directory of CSVs")->required();
    c_segment->add_option("--method", method)->check(CLI::IsMember({"ssel", "pelt_l2", "kernel_rbf", "bocpd_pca1"}));

    std::string results;
    std::string mode = "pca1";
    auto* c_eval = app.add_subcommand("evaluate", "Compute intrinsic metrics for segmentation results");
    add_common(c_eval, common);
    c_eval->add_option("results", results, "Result records (NDJSON)")->required();
    c_eval->add_option("--input", input, "Trial CSV or directory the results refer to")->required();
    c_eval->add_option("--mode", mode)->check(CLI::IsMember({"pca1", "ssel-weights"}));

    std::vector<std::string> files;
    auto* c_compare = app.add_subcommand("compare", "Friedman and pairwise Wilcoxon tests across methods");
    add_common(c_compare, common);
    c_compare->add_option("metrics", files, "Metrics CSV files")->required();

    ssel::SweepOptions sweep;
    auto* c_sweep = app.add_subcommand("sweep", "Best-of-generation curves over a mu x chi grid");
    add_common(c_sweep, common);
    c_sweep->add_option("input", input, "Trial CSV or directory")->required();
    c_sweep->add_option("--mu", sweep.mu, "Mutation standard deviations")->delimiter(',');
    c_sweep->add_option("--chi", sweep.chi, "Crossover rates")->delimiter(',');
    c_sweep->add_option("--seeds", sweep.seeds, "Seeds per grid point");

    auto* c_heat = app.add_subcommand("export-heatmap", "Stage x band x channel weight maps from archives");
    add_common(c_heat, common);
    c_heat->add_option("archives", files, "Archive NDJSON files")->required();

    std::string subject;
    auto* c_land = app.add_subcommand("export-landscape", "PCA coordinates of population snapshots");
    add_common(c_land, common);
    c_land->add_option("history", input, "History JSON written by segment --method ssel")->required();
    c_land->add_option("--subject", subject, "Subject id (default: first)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        const auto cfg = resolve(common);
        if (c_synth->parsed()) {
            ssel::cmd_synth(synth, cfg.core.seed, common.output);
        } else if (c_segment->parsed()) {
            ssel::cmd_segment(input, ssel::method_from_string(method), cfg, common.output);
        } else if (c_eval->parsed()) {
            ssel::cmd_evaluate(results, input, ssel::trajectory_mode_from_string(mode), cfg, common.output);
        } else if (c_compare->parsed()) {
            ssel::cmd_compare({files.begin(), files.end()}, cfg, common.output);
        } else if (c_sweep->parsed()) {
            ssel::cmd_sweep(input, sweep, cfg, common.output);
        } else if (c_heat->parsed()) {
            ssel::cmd_export_heatmap({files.begin(), files.end()}, cfg, common.output);
        } else if (c_land->parsed()) {
            ssel::cmd_export_landscape(input, subject, cfg, common.output);
        }
    } catch (const ssel::UsageError& e) {
        report(command, "usage", e.what());
        return 2;
    } catch (const ssel::DataError& e) {
        report(command, "data", e.what());
        return 1;
    } catch (const std::exception& e) {
        report(command, "runtime", e.what());
        return 1;
    }
    return 0;
}
