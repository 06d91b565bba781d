#pragma once

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "uavmec/channel.hpp"
#include "uavmec/costs.hpp"
#include "uavmec/env.hpp"
#include "uavmec/experiment.hpp"
#include "uavmec/flight.hpp"
#include "uavmec/jitter.hpp"
#include "uavmec/mdp.hpp"
#include "uavmec/redq.hpp"

namespace uavmec {

// Self-contained oracle checks shared by the `validate` command and the
// acceptance suite. Each check carries the measured figure in its detail
// string so failures are diagnosable from the log alone.

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

inline CheckResult check_hover_identity() {
    FlightParams f;
    const double hover = propulsion_power(0.0, 0.0, f);
    const double expected = f.blade_profile_power_w + f.induced_power_w;
    const double rel = std::abs(hover - expected) / expected;
    std::ostringstream d;
    d << "hover=" << hover << " W, p0+p1=" << expected << " W, rel err=" << rel;
    return {"hover power equals p0+p1", rel <= 1e-9, d.str()};
}

inline CheckResult check_compression_identity() {
    ComputeParams c;
    const double j1 = compression_density(1.0, c.epsilon_comp);
    return {"J(1) = 0 exactly", j1 == 0.0, "J(1)=" + std::to_string(j1)};
}

inline CheckResult check_zero_power_rate() {
    RadioParams radio;
    const double r = link_rate({0, 0, 0}, {0, 0, 150}, 0.0, 2e6, 150.0, radio);
    return {"rate at zero power is zero", r == 0.0, "rate=" + std::to_string(r)};
}

inline CheckResult check_aggregation_identities(int n_vectors, std::uint64_t seed) {
    Rng rng(derive_seed(seed, 0xa99));
    int failures = 0;
    for (int t = 0; t < n_vectors; ++t) {
        const int users = 1 + static_cast<int>(uniform_in(rng, 0.0, 7.999));
        CostBreakdown b;
        b.users.resize(users);
        for (UserCost& u : b.users) {
            u.t_lr = uniform01(rng);
            u.e_lr = uniform01(rng);
            u.t_off = uniform01(rng);
            u.e_off = uniform01(rng);
            u.t_relay = uniform01(rng);
            u.e_relay = uniform01(rng);
            u.t_uav_comp = uniform01(rng);
            u.e_uav_comp = uniform01(rng);
            u.t_bs_comp = uniform01(rng);
            u.t_max_s = 1.0;
        }
        b.e_fly = uniform01(rng);
        finalize_breakdown(b);

        double uav_sum = 0.0;
        for (const UserCost& u : b.users) {
            if (u.e_user != u.e_lr + u.e_off) ++failures;
            if (u.t_total != u.t_lr + u.t_off + std::max(u.t_uav_comp, u.t_relay + u.t_bs_comp))
                ++failures;
            uav_sum += u.e_relay + u.e_uav_comp;
        }
        if (b.e_uav_slot != uav_sum + b.e_fly) ++failures;
    }
    std::ostringstream d;
    d << n_vectors << " random cost vectors, " << failures << " identity failures";
    return {"per-slot aggregation identities", failures == 0, d.str()};
}

// Analytic chance probability against a fresh Monte-Carlo run over the
// displacement-norm x sigma grid.
inline CheckResult check_chance_grid(std::int64_t samples, std::uint64_t seed) {
    const double limit = 30.0;  // v_max * slot length at the default scale
    const Vec3 dir = Vec3{2.0, -1.0, 0.5} * (1.0 / Vec3{2.0, -1.0, 0.5}.norm());
    const std::vector<double> norms = {0.0, 0.5 * limit, 0.9 * limit, 1.1 * limit};
    const std::vector<double> sigmas = {0.5, 1.0, 2.0};
    double max_diff = 0.0;
    Rng rng(derive_seed(seed, 0xcc9));
    for (double nrm : norms) {
        for (double sigma : sigmas) {
            const Vec3 disp = dir * nrm;
            const JitterModel model{sigma};
            const double analytic = speed_violation_probability(disp, model, limit);
            const double mc = mc_violation_probability(disp, model, limit, samples, rng);
            max_diff = std::max(max_diff, std::abs(analytic - mc));
        }
    }
    std::ostringstream d;
    d << "max |analytic - MC(" << samples << ")| = " << max_diff << ", threshold 3e-3";
    return {"chance-constraint analytic vs Monte Carlo", max_diff <= 3e-3, d.str()};
}

namespace detail {

// max over parameters of the gradcheck error: |fd - an| relative to
// magnitude, with an absolute floor for genuinely zero entries.
struct GradCheck {
    double worst_rel = 0.0;
    int params = 0;

    void compare(double analytic, double fd) {
        ++params;
        const double scale = std::max({std::abs(analytic), std::abs(fd), 1e-6});
        const double diff = std::abs(analytic - fd);
        if (diff <= 1e-9) return;
        worst_rel = std::max(worst_rel, diff / scale);
    }
};

template <typename LossFn>
inline void fd_sweep(nn::ParamSet& params, const nn::ParamSet& analytic, LossFn&& loss,
                     GradCheck& chk, double h = 1e-5) {
    for (std::size_t l = 0; l < params.w.size(); ++l) {
        for (Eigen::Index j = 0; j < params.w[l].size(); ++j) {
            double& p = params.w[l].data()[j];
            const double saved = p;
            p = saved + h;
            const double up = loss();
            p = saved - h;
            const double dn = loss();
            p = saved;
            chk.compare(analytic.w[l].data()[j], (up - dn) / (2.0 * h));
        }
        for (Eigen::Index j = 0; j < params.b[l].size(); ++j) {
            double& p = params.b[l].data()[j];
            const double saved = p;
            p = saved + h;
            const double up = loss();
            p = saved - h;
            const double dn = loss();
            p = saved;
            chk.compare(analytic.b[l].data()[j], (up - dn) / (2.0 * h));
        }
    }
}

}  // namespace detail

// Central finite differences over every actor and critic parameter of a
// 2x16 agent, against the exact backward-pass gradients.
inline CheckResult check_gradient_fidelity(std::uint64_t seed) {
    AgentConfig cfg;
    cfg.hidden = {16, 16};
    cfg.ensemble_size = 3;
    cfg.subset_size = 2;
    const int obs_dim = 8, act_dim = 9, batch = 8;
    RedqAgent agent(cfg, obs_dim, act_dim, seed);

    Rng rng(derive_seed(seed, 0x9d));
    nn::Mat obs(batch, obs_dim), z(batch, act_dim);
    for (int i = 0; i < batch; ++i) {
        for (int j = 0; j < obs_dim; ++j) obs(i, j) = uniform01(rng);
        for (int j = 0; j < act_dim; ++j) z(i, j) = standard_normal(rng);
    }

    detail::GradCheck chk;

    // actor objective
    nn::ParamSet actor_grads;
    agent.actor_loss_and_grads(agent.actor_params(), obs, z, &actor_grads);
    detail::fd_sweep(
        agent.actor_params(), actor_grads,
        [&] { return agent.actor_loss_and_grads(agent.actor_params(), obs, z, nullptr); }, chk);

    // critic regression loss against fixed targets
    nn::Mat sa(batch, obs_dim + act_dim);
    sa.leftCols(obs_dim) = obs;
    for (int i = 0; i < batch; ++i)
        for (int j = 0; j < act_dim; ++j) sa(i, obs_dim + j) = uniform01(rng);
    Eigen::VectorXd y(batch);
    for (int i = 0; i < batch; ++i) y[i] = standard_normal(rng);

    nn::ParamSet& critic = agent.critic_params()[0];
    nn::ForwardCache cache;
    nn::Mat q = nn::forward(critic, sa, &cache);
    nn::Mat out_grad = (q.col(0) - y) * (2.0 / static_cast<double>(batch));
    nn::ParamSet critic_grads;
    nn::backward(critic, cache, out_grad, critic_grads);
    detail::fd_sweep(
        critic, critic_grads, [&] { return RedqAgent::critic_loss(critic, sa, y); }, chk);

    std::ostringstream d;
    d << chk.params << " parameters, worst relative error " << chk.worst_rel
      << ", threshold 1e-4";
    return {"actor/critic gradients vs finite differences", chk.worst_rel <= 1e-4, d.str()};
}

struct RedqMechanicsReport {
    CheckResult gamma_zero;
    CheckResult accounting;
    CheckResult subset_bound;
};

// Runs a real (small) training session and checks the bookkeeping the
// algorithm promises: reward-only targets at discount zero, S*G critic rounds
// and S actor updates past warmup, and the subset-min bound on every batch.
inline RedqMechanicsReport check_redq_mechanics(int steps_past_warmup, int utd_ratio,
                                                std::uint64_t seed) {
    RedqMechanicsReport rep;

    // discount-zero target equals the reward, bit for bit
    {
        AgentConfig cfg;
        cfg.hidden = {16, 16};
        cfg.ensemble_size = 4;
        cfg.subset_size = 2;
        cfg.discount = 0.0;
        cfg.batch_size = 32;
        RedqAgent agent(cfg, 6, 5, seed);
        Rng rng(derive_seed(seed, 0x77));
        Batch batch;
        batch.obs = nn::Mat::Random(32, 6);
        batch.next_obs = nn::Mat::Random(32, 6);
        batch.act = (nn::Mat::Random(32, 5).array() + 1.0) / 2.0;
        batch.rew = nn::Vec::Random(32);
        batch.done = nn::Vec::Zero(32);
        const auto ti = agent.compute_target(batch, agent.sample_subset());
        bool exact = true;
        for (int i = 0; i < 32; ++i) exact = exact && (ti.y[i] == batch.rew[i]);
        rep.gamma_zero = {"discount 0 makes targets equal rewards", exact,
                          exact ? "bitwise equal" : "mismatch found"};
    }

    // accounting + subset bound over a live run
    {
        WorldConfig world;
        world.user_count = 2;
        world.region.n_slots = 10;
        AgentConfig cfg;
        cfg.hidden = {32, 32};
        cfg.utd_ratio = utd_ratio;
        cfg.batch_size = 64;
        cfg.warmup_steps = 300;
        cfg.replay_capacity = 5000;
        Environment env(world, seed);
        RedqAgent agent(cfg, world.observation_dim(), world.action_dim(),
                        derive_seed(seed, 0x5e));
        agent.set_diagnostics(true);
        train_agent(env, agent, SchemeToggles{}, cfg.warmup_steps + steps_past_warmup);

        const long expect_rounds =
            static_cast<long>(steps_past_warmup) * static_cast<long>(utd_ratio);
        const bool counts_ok = agent.critic_update_rounds() == expect_rounds &&
                               agent.actor_updates() == steps_past_warmup &&
                               agent.entropy_updates() == steps_past_warmup;
        std::ostringstream d;
        d << "critic rounds " << agent.critic_update_rounds() << " (want " << expect_rounds
          << "), actor updates " << agent.actor_updates() << " (want " << steps_past_warmup
          << ")";
        rep.accounting = {"update accounting S*G critic / S actor", counts_ok, d.str()};

        std::ostringstream sd;
        sd << agent.subset_checked_batches() << " batches checked, "
           << agent.subset_bound_violations() << " violations";
        rep.subset_bound = {"subset min >= full-ensemble min on every batch",
                            agent.subset_bound_violations() == 0, sd.str()};
    }
    return rep;
}

inline std::vector<CheckResult> run_all_checks(std::uint64_t seed, std::int64_t mc_samples,
                                               int redq_steps, int redq_utd) {
    std::vector<CheckResult> results;
    results.push_back(check_hover_identity());
    results.push_back(check_compression_identity());
    results.push_back(check_zero_power_rate());
    results.push_back(check_aggregation_identities(10000, seed));
    results.push_back(check_chance_grid(mc_samples, seed));
    results.push_back(check_gradient_fidelity(seed));
    const RedqMechanicsReport rep = check_redq_mechanics(redq_steps, redq_utd, seed);
    results.push_back(rep.gamma_zero);
    results.push_back(rep.accounting);
    results.push_back(rep.subset_bound);
    return results;
}

}  // namespace uavmec
