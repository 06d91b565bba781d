// Acceptance suite. Runs every gate criterion in order and prints one
// PASS/FAIL line each; the exit code is the number of failures.
//
// Criteria 5-7 train three desk-scale policies (proposed, untreated,
// no-compression), which dominates the runtime.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "uavmec/config_file.hpp"
#include "uavmec/experiment.hpp"
#include "uavmec/validate.hpp"

using namespace uavmec;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;
std::chrono::steady_clock::time_point g_t0;

double elapsed_s() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - g_t0).count();
}

void report(int criterion, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %-34s %s (t=%.0fs)\n", pass ? "PASS" : "FAIL", criterion,
                name.c_str(), detail.c_str(), elapsed_s());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunConfig desk_run(Scheme scheme, std::uint64_t seed) {
    RunConfig rc = desk_profile();
    rc.scheme = scheme;
    rc.seed = seed;
    rc.validate();
    return rc;
}

}  // namespace

int main(int argc, char** argv) {
    g_t0 = std::chrono::steady_clock::now();
    const std::uint64_t seed = 20250809;
    const fs::path work = fs::path(argc > 1 ? argv[1] : "acceptance_work");
    fs::remove_all(work);
    fs::create_directories(work);

    // --- 1. physics identity suite -------------------------------------
    {
        const CheckResult hover = check_hover_identity();
        const CheckResult comp = check_compression_identity();
        const CheckResult rate = check_zero_power_rate();
        const CheckResult agg = check_aggregation_identities(10000, seed);
        const bool pass = hover.pass && comp.pass && rate.pass && agg.pass;
        report(1, "physics identities", pass,
               hover.detail + "; " + comp.detail + "; " + rate.detail + "; " + agg.detail);
    }

    // --- 2. chance-constraint fidelity ----------------------------------
    {
        const CheckResult grid = check_chance_grid(1000000, seed);
        report(2, "chance-constraint fidelity", grid.pass, grid.detail);
    }

    // --- 3. gradient fidelity -------------------------------------------
    {
        const CheckResult grad = check_gradient_fidelity(seed);
        report(3, "gradient fidelity", grad.pass, grad.detail);
    }

    // --- 4. REDQ mechanics at S=500, G=20 --------------------------------
    {
        const RedqMechanicsReport rep = check_redq_mechanics(500, 20, seed);
        const bool pass = rep.gamma_zero.pass && rep.accounting.pass && rep.subset_bound.pass;
        report(4, "REDQ mechanics", pass,
               rep.gamma_zero.detail + "; " + rep.accounting.detail + "; " +
                   rep.subset_bound.detail);
    }

    // --- desk-scale trainings for criteria 5-7 ---------------------------
    std::printf("... training desk-scale policies (proposed, untreated, no_compression)\n");
    std::fflush(stdout);
    const RunConfig rc_prop = desk_run(Scheme::Proposed, seed);
    const TrainArtifacts art_prop = run_training(rc_prop, work / "proposed");
    std::printf("... proposed trained (%.0fs), first-era mean episode reward %.4f, "
                "last-era %.4f\n",
                elapsed_s(), art_prop.stats.first_episodes_mean_reward,
                art_prop.stats.last_episodes_mean_reward);
    std::fflush(stdout);

    // --- 5. desk-scale learning vs random movement ------------------------
    {
        const EvalSummary prop = run_eval(rc_prop, art_prop.checkpoint_path, Scheme::Proposed,
                                          rc_prop.eval_episodes, work / "eval_proposed");
        const EvalSummary rnd = run_eval(rc_prop, art_prop.checkpoint_path, Scheme::RandomMove,
                                         rc_prop.eval_episodes, work / "eval_random");
        const double ratio = prop.mean_energy / rnd.mean_energy;
        std::ostringstream d;
        d << "proposed " << prop.mean_energy << " J vs random_move " << rnd.mean_energy
          << " J, ratio " << ratio << " (need <= 0.75)";
        report(5, "desk-scale learning", ratio <= 0.75, d.str());
    }

    const RunConfig rc_untr = desk_run(Scheme::Untreated, seed);
    const TrainArtifacts art_untr = run_training(rc_untr, work / "untreated");
    std::printf("... untreated trained (%.0fs)\n", elapsed_s());
    std::fflush(stdout);

    // --- 6. robustness behavior ------------------------------------------
    {
        const EvalSummary prop_s1 = run_eval(rc_prop, art_prop.checkpoint_path, Scheme::Proposed,
                                             rc_prop.eval_episodes, work / "rob_prop_s1");
        bool pass = prop_s1.outage_probability <= 0.15;
        std::ostringstream d;
        d << "proposed outage at sigma=1: " << prop_s1.outage_probability << " (need <= 0.15)";

        for (double sigma : {0.5, 1.0, 2.0, 3.0}) {
            RunConfig rp = rc_prop;
            rp.world.jitter.sigma_m = sigma;
            RunConfig ru = rc_untr;
            ru.world.jitter.sigma_m = sigma;
            const std::string tag = fmt_double(sigma);
            const EvalSummary p = run_eval(rp, art_prop.checkpoint_path, Scheme::Proposed,
                                           rc_prop.eval_episodes, work / ("rob_p_" + tag));
            const EvalSummary u = run_eval(ru, art_untr.checkpoint_path, Scheme::Untreated,
                                           rc_untr.eval_episodes, work / ("rob_u_" + tag));
            d << "; sigma " << sigma << ": untreated " << u.outage_probability << " vs proposed "
              << p.outage_probability;
            if (u.outage_probability < p.outage_probability) pass = false;
        }
        report(6, "robustness behavior", pass, d.str());
    }

    // --- 7. compression ablation -------------------------------------------
    {
        const RunConfig rc_nc = desk_run(Scheme::NoCompression, seed);
        const TrainArtifacts art_nc = run_training(rc_nc, work / "no_compression");
        std::printf("... no_compression trained (%.0fs)\n", elapsed_s());
        std::fflush(stdout);
        const EvalSummary nc = run_eval(rc_nc, art_nc.checkpoint_path, Scheme::NoCompression,
                                        rc_nc.eval_episodes, work / "eval_nc");
        const EvalSummary prop = run_eval(rc_prop, art_prop.checkpoint_path, Scheme::Proposed,
                                          rc_prop.eval_episodes, work / "eval_prop7");
        std::ostringstream d;
        d << "no_compression " << nc.mean_energy << " J vs proposed " << prop.mean_energy
          << " J (need >=)";
        report(7, "compression ablation", nc.mean_energy >= prop.mean_energy, d.str());
    }

    // --- 8. training determinism through the CLI -----------------------------
    {
        const fs::path cfg_path = work / "det.cfg";
        std::ofstream(cfg_path) << "user_count = 3\n"
                                   "n_slots = 10\n"
                                   "total_steps = 400\n"
                                   "warmup_steps = 150\n"
                                   "batch_size = 64\n"
                                   "hidden_layers = 32,32\n"
                                   "ensemble_size = 4\n"
                                   "subset_size = 2\n"
                                   "utd_ratio = 3\n"
                                   "replay_capacity = 2000\n";
        const std::string cli = UAVMEC_CLI_PATH;
        const auto run_train = [&](const fs::path& out) {
            const std::string cmd = cli + " train --config " + cfg_path.string() + " --seed 7" +
                                    " --out " + out.string() + " > /dev/null 2>&1";
            return std::system(cmd.c_str()) == 0;
        };
        const bool ok_a = run_train(work / "det_a");
        const bool ok_b = run_train(work / "det_b");
        const std::string a = slurp(work / "det_a" / "metrics.csv");
        const std::string b = slurp(work / "det_b" / "metrics.csv");
        const bool pass = ok_a && ok_b && !a.empty() && a == b;
        std::ostringstream d;
        d << "two cmd_train runs, metrics CSVs " << (a == b ? "byte-identical" : "DIFFER") << " ("
          << a.size() << " bytes)";
        report(8, "training determinism", pass, d.str());
    }

    std::printf("%s: %d criterion failure(s), total %.0fs\n",
                g_failures == 0 ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED", g_failures,
                elapsed_s());
    return g_failures;
}
