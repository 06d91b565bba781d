// Command-line front end: train a policy, evaluate checkpoints, run the
// built-in oracle validation, or sweep an experiment axis into plot-ready CSV.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "uavmec/config_file.hpp"
#include "uavmec/experiment.hpp"
#include "uavmec/validate.hpp"

namespace fs = std::filesystem;
using namespace uavmec;

namespace {

RunConfig load_or_default(const std::string& config_path) {
    if (config_path.empty()) {
        RunConfig rc;
        rc.sync_derived();
        rc.validate();
        return rc;
    }
    return load_config_file(config_path);
}

void apply_overrides(RunConfig& rc, const std::optional<std::uint64_t>& seed,
                     const std::optional<std::string>& scheme,
                     const std::optional<int>& episodes) {
    if (seed) rc.seed = *seed;
    if (scheme) rc.scheme = scheme_from_name(*scheme);
    if (episodes) rc.eval_episodes = *episodes;
    rc.validate();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"UAV-assisted MEC simulator and REDQ trainer"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::string checkpoint_path;
    std::string axis = "sigma";
    std::optional<std::uint64_t> seed_override;
    std::optional<std::string> scheme_override;
    std::optional<int> episodes_override;

    auto add_common = [&](CLI::App* cmd, bool needs_out) {
        cmd->add_option("--config", config_path, "key=value config file");
        cmd->add_option("--seed", seed_override, "override the config seed");
        cmd->add_option("--scheme", scheme_override,
                        "proposed|random_move|untreated|no_compression|conventional");
        if (needs_out) cmd->add_option("--out", out_dir, "output directory");
    };

    CLI::App* train = app.add_subcommand("train", "train a policy and write a checkpoint");
    add_common(train, true);

    CLI::App* eval = app.add_subcommand("eval", "evaluate a checkpoint");
    add_common(eval, true);
    eval->add_option("--checkpoint", checkpoint_path, "checkpoint.json from a training run")
        ->required();
    eval->add_option("--episodes", episodes_override, "evaluation episode count");

    CLI::App* validate = app.add_subcommand("validate", "run the oracle check suite");
    std::int64_t mc_samples = 1000000;
    validate->add_option("--mc-samples", mc_samples, "Monte-Carlo samples per grid point");

    CLI::App* sweep = app.add_subcommand("sweep", "sweep one axis into an aggregated CSV");
    add_common(sweep, true);
    sweep->add_option("--axis", axis, "users|sigma|task_size")->required();
    sweep->add_option("--checkpoint", checkpoint_path,
                      "trained checkpoint (required for sigma and task_size axes)");
    sweep->add_option("--episodes", episodes_override, "evaluation episode count");

    CLI11_PARSE(app, argc, argv);

    try {
        if (train->parsed()) {
            RunConfig rc = load_or_default(config_path);
            apply_overrides(rc, seed_override, scheme_override, episodes_override);
            const TrainArtifacts art = run_training(rc, out_dir);
            std::printf("trained %ld episodes over %ld steps (scheme %s)\n", art.stats.episodes,
                        art.stats.env_steps, scheme_name(rc.scheme).c_str());
            std::printf("checkpoint: %s\nmetrics:    %s\nsnapshot:   %s\n",
                        art.checkpoint_path.c_str(), art.metrics_path.c_str(),
                        art.snapshot_path.c_str());
        } else if (eval->parsed()) {
            RunConfig rc = load_or_default(config_path);
            apply_overrides(rc, seed_override, scheme_override, episodes_override);
            const EvalSummary s =
                run_eval(rc, checkpoint_path, rc.scheme, rc.eval_episodes, out_dir);
            std::printf("scheme %s over %d episodes:\n", scheme_name(rc.scheme).c_str(),
                        s.episodes);
            std::printf("  total user energy: %.6g +/- %.6g J\n", s.mean_energy, s.std_energy);
            std::printf("  outage probability: %.4f\n", s.outage_probability);
            std::printf("  final battery: %.6g J\n", s.mean_final_battery);
        } else if (validate->parsed()) {
            const auto results = run_all_checks(20250809, mc_samples, 200, 5);
            int failures = 0;
            for (const CheckResult& r : results) {
                std::printf("[%s] %-48s %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                            r.detail.c_str());
                if (!r.pass) ++failures;
            }
            if (failures > 0) {
                std::fprintf(stderr, "%d check(s) failed\n", failures);
                return 1;
            }
        } else if (sweep->parsed()) {
            RunConfig rc = load_or_default(config_path);
            apply_overrides(rc, seed_override, scheme_override, episodes_override);
            const SweepAxis ax = sweep_axis_from_name(axis);
            if (ax != SweepAxis::Users && checkpoint_path.empty()) {
                throw ValidationError("sweep: --checkpoint is required for axis '" + axis + "'");
            }
            const auto rows = run_sweep(rc, ax, checkpoint_path, out_dir);
            std::printf("%zu sweep rows written to %s/sweep.csv\n", rows.size(), out_dir.c_str());
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
