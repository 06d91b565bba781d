#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "uavmec/checkpoint.hpp"
#include "uavmec/config_file.hpp"
#include "uavmec/env.hpp"
#include "uavmec/mdp.hpp"
#include "uavmec/metrics.hpp"
#include "uavmec/redq.hpp"

namespace uavmec {

// How a scheme reshapes the executed action and the training reward.
struct SchemeToggles {
    bool randomize_movement = false;   // random_move: uniform trajectory dims
    bool ignore_chance_penalty = false;  // untreated: p_dq pinned to 1 while training
    bool force_no_compression = false;   // no_compression: gamma pinned to 1
    bool zero_jitter = false;            // conventional: sigma = 0 in train and eval
};

inline SchemeToggles toggles_for(Scheme s) {
    SchemeToggles t;
    switch (s) {
        case Scheme::Proposed: break;
        case Scheme::RandomMove: t.randomize_movement = true; break;
        case Scheme::Untreated: t.ignore_chance_penalty = true; break;
        case Scheme::NoCompression: t.force_no_compression = true; break;
        case Scheme::Conventional: t.zero_jitter = true; break;
    }
    return t;
}

// Rewrites the raw action the way the scheme demands; what comes out is what
// the environment executes and the buffer stores.
inline void apply_scheme_to_action(RawAction& raw, const SchemeToggles& t, int user_count,
                                   Rng& rng) {
    if (t.force_no_compression) {
        for (int k = 0; k < user_count; ++k) raw[3 * k + 1] = 1.0;
    }
    if (t.randomize_movement) {
        const int base = 3 * user_count;
        for (int i = 0; i < 3; ++i) raw[base + i] = uniform01(rng);
    }
}

inline WorldConfig world_for_scheme(const RunConfig& rc, const SchemeToggles& t) {
    WorldConfig w = rc.world;
    if (t.zero_jitter) w.jitter.sigma_m = 0.0;
    return w;
}

struct TrainStats {
    long episodes = 0;
    long env_steps = 0;
    long critic_update_rounds = 0;
    long actor_updates = 0;
    double final_alpha = 0.0;
    double first_episodes_mean_reward = 0.0;  // mean episode reward over the warmup-era episodes
    double last_episodes_mean_reward = 0.0;   // mean over the closing stretch
};

// Algorithm loop: act, step, store, then utd_ratio critic rounds plus one
// actor and one entropy update per environment step once warmup has passed.
inline TrainStats train_agent(Environment& env, RedqAgent& agent, const SchemeToggles& toggles,
                              long total_steps, MetricsWriter* metrics = nullptr) {
    TrainStats stats;
    const WorldConfig& cfg = env.config();

    env.reset();
    Observation obs = encode_state(env.state(), cfg);

    long episode = 0;
    double ep_reward = 0.0, ep_esum = 0.0, ep_pt = 0.0, ep_pe = 0.0, ep_pdq = 0.0;
    int ep_slots = 0, ep_outages = 0;
    double ep_closs = 0.0, ep_aloss = 0.0;
    long ep_updates = 0;
    std::vector<double> episode_rewards;

    for (long step = 1; step <= total_steps; ++step) {
        RawAction raw = agent.act(obs, RedqAgent::Mode::Explore);
        apply_scheme_to_action(raw, toggles, cfg.user_count, agent.rng());
        const DecisionVector decision = decode_action(raw, cfg);
        Environment::StepResult sr = env.step(decision);
        RewardTerms rt = reward(sr.costs, sr.next.energy_spent_j, sr.prob_violation, cfg);
        if (toggles.ignore_chance_penalty) {
            rt.p_dq = 1.0;
            rt.reward = -rt.e_sum * rt.p_t * rt.p_e;
        }
        const Observation next_obs = encode_state(sr.next, cfg);
        agent.observe(obs, raw, rt.reward, next_obs, sr.done);

        if (agent.ready_to_update()) {
            const RedqAgent::UpdateStats us = agent.update();
            ep_closs += us.critic_loss;
            ep_aloss += us.actor_loss;
            ++ep_updates;
        }

        ep_reward += rt.reward;
        ep_esum += rt.e_sum;
        ep_pt += rt.p_t;
        ep_pe += rt.p_e;
        ep_pdq += rt.p_dq;
        if (sr.prob_violation > cfg.chance.rho_trj) ++ep_outages;
        ++ep_slots;

        if (sr.done) {
            ++episode;
            episode_rewards.push_back(ep_reward);
            if (metrics) {
                const double inv = 1.0 / static_cast<double>(ep_slots);
                const double inv_u = ep_updates > 0 ? 1.0 / static_cast<double>(ep_updates) : 0.0;
                metrics->row(step, episode, ep_reward, ep_esum,
                             static_cast<double>(ep_outages) * inv, ep_pt * inv, ep_pe * inv,
                             ep_pdq * inv, agent.alpha(), ep_closs * inv_u, ep_aloss * inv_u);
            }
            ep_reward = ep_esum = ep_pt = ep_pe = ep_pdq = 0.0;
            ep_slots = ep_outages = 0;
            ep_closs = ep_aloss = 0.0;
            ep_updates = 0;
            env.reset();
            obs = encode_state(env.state(), cfg);
        } else {
            obs = next_obs;
        }
    }

    stats.episodes = episode;
    stats.env_steps = total_steps;
    stats.critic_update_rounds = agent.critic_update_rounds();
    stats.actor_updates = agent.actor_updates();
    stats.final_alpha = agent.alpha();
    if (!episode_rewards.empty()) {
        const std::size_t head = std::max<std::size_t>(
            1, std::min(episode_rewards.size(),
                        static_cast<std::size_t>(1000 / std::max(1, cfg.region.n_slots))));
        double first = 0.0;
        for (std::size_t i = 0; i < head; ++i) first += episode_rewards[i];
        stats.first_episodes_mean_reward = first / static_cast<double>(head);
        const std::size_t tail = std::min<std::size_t>(episode_rewards.size(), 100);
        double last = 0.0;
        for (std::size_t i = episode_rewards.size() - tail; i < episode_rewards.size(); ++i)
            last += episode_rewards[i];
        stats.last_episodes_mean_reward = last / static_cast<double>(tail);
    }
    return stats;
}

struct EvalSummary {
    int episodes = 0;
    double mean_energy = 0.0;
    double std_energy = 0.0;
    double outage_probability = 0.0;   // mean per-episode outage fraction
    double mean_final_battery = 0.0;
    double mean_reward = 0.0;
};

// Deterministic-policy evaluation of a scheme over fresh episodes. The user
// layout must be the one the policy was trained with.
inline EvalSummary evaluate_policy(const WorldConfig& world, const std::vector<Vec3>& user_layout,
                                   RedqAgent& agent, const SchemeToggles& toggles,
                                   int episodes, std::uint64_t eval_seed,
                                   TrajectoryWriter* traj = nullptr) {
    require(episodes >= 1, "eval: need at least one episode");
    EvalSummary s;
    s.episodes = episodes;
    std::vector<double> energies;
    Rng move_rng(derive_seed(eval_seed, 0x7271));
    for (int e = 0; e < episodes; ++e) {
        Environment env(world, user_layout, derive_seed(eval_seed, 0x1000 + e));
        Policy policy = [&](const Observation& o) {
            RawAction raw = agent.act(o, RedqAgent::Mode::Exploit);
            apply_scheme_to_action(raw, toggles, world.user_count, move_rng);
            return raw;
        };
        EpisodeResult res = episode(env, policy, toggles.ignore_chance_penalty);
        if (traj) {
            for (const SlotRecord& rec : res.records) traj->slot(e, rec);
        }
        energies.push_back(res.summary.total_user_energy);
        s.outage_probability += res.summary.outage_fraction;
        s.mean_final_battery += res.summary.final_battery_j;
        s.mean_reward += res.summary.total_reward;
    }
    const double n = static_cast<double>(episodes);
    for (double e : energies) s.mean_energy += e;
    s.mean_energy /= n;
    for (double e : energies) s.std_energy += (e - s.mean_energy) * (e - s.mean_energy);
    s.std_energy = episodes > 1 ? std::sqrt(s.std_energy / (n - 1.0)) : 0.0;
    s.outage_probability /= n;
    s.mean_final_battery /= n;
    s.mean_reward /= n;
    return s;
}

struct TrainArtifacts {
    std::filesystem::path checkpoint_path;
    std::filesystem::path metrics_path;
    std::filesystem::path snapshot_path;
    TrainStats stats;
    std::vector<Vec3> user_layout;
};

// Full training run: resolved-config snapshot, metrics CSV, checkpoint.
inline TrainArtifacts run_training(const RunConfig& rc, const std::filesystem::path& out_dir) {
    rc.validate();
    std::filesystem::create_directories(out_dir);
    TrainArtifacts art;
    art.snapshot_path = out_dir / "resolved_config.txt";
    art.metrics_path = out_dir / "metrics.csv";
    art.checkpoint_path = out_dir / "checkpoint.json";

    {
        std::ofstream snap(art.snapshot_path);
        require(snap.good(), "train: cannot write resolved config snapshot");
        snap << resolved_config_text(rc);
    }

    const SchemeToggles toggles = toggles_for(rc.scheme);
    const WorldConfig world = world_for_scheme(rc, toggles);
    Environment env(world, rc.seed);
    RedqAgent agent(rc.agent, world.observation_dim(), world.action_dim(),
                    derive_seed(rc.seed, 0xa6e27));
    MetricsWriter metrics(art.metrics_path.string());
    art.stats = train_agent(env, agent, toggles, rc.total_steps, &metrics);
    metrics.flush();
    art.user_layout = env.user_positions();
    save_checkpoint(art.checkpoint_path.string(), agent, env.user_positions());
    return art;
}

// Rebuilds an agent around stored parameters (critics included, so training
// diagnostics can resume inspection; evaluation only uses the actor).
inline RedqAgent agent_from_checkpoint(const LoadedCheckpoint& ck, const AgentConfig& base_cfg,
                                       std::uint64_t seed) {
    AgentConfig cfg = base_cfg;
    cfg.hidden = ck.hidden;
    cfg.ensemble_size = static_cast<int>(ck.critics.size());
    cfg.warmup_steps = 0;
    RedqAgent agent(cfg, ck.obs_dim, ck.act_dim, seed);
    apply_checkpoint(agent, ck);
    return agent;
}

inline nlohmann::json eval_summary_json(const EvalSummary& s, Scheme scheme, double sigma) {
    nlohmann::json j;
    j["episodes"] = s.episodes;
    j["scheme"] = scheme_name(scheme);
    j["jitter_sigma_m"] = sigma;
    j["mean_total_user_energy_j"] = s.mean_energy;
    j["std_total_user_energy_j"] = s.std_energy;
    j["outage_probability"] = s.outage_probability;
    j["mean_final_battery_j"] = s.mean_final_battery;
    j["mean_episode_reward"] = s.mean_reward;
    return j;
}

// Evaluation entry used by the CLI: loads the checkpoint, applies the scheme,
// writes summary.json and trajectories.jsonl under out_dir.
inline EvalSummary run_eval(const RunConfig& rc, const std::filesystem::path& checkpoint_path,
                            Scheme scheme, int episodes, const std::filesystem::path& out_dir) {
    require(episodes >= 1, "eval: need at least one episode");
    const LoadedCheckpoint ck = load_checkpoint(checkpoint_path.string());
    const SchemeToggles toggles = toggles_for(scheme);
    const WorldConfig world = world_for_scheme(rc, toggles);
    require(world.observation_dim() == ck.obs_dim && world.action_dim() == ck.act_dim,
            "eval: config dimensions do not match the checkpoint (user_count mismatch?)");
    std::filesystem::create_directories(out_dir);

    RedqAgent agent = agent_from_checkpoint(ck, rc.agent, derive_seed(rc.seed, 0xeea1));
    TrajectoryWriter traj((out_dir / "trajectories.jsonl").string());
    const EvalSummary s = evaluate_policy(world, ck.user_positions, agent, toggles, episodes,
                                          derive_seed(rc.seed, 0xeea2), &traj);
    std::ofstream out(out_dir / "summary.json");
    require(out.good(), "eval: cannot write summary.json");
    out << eval_summary_json(s, scheme, world.jitter.sigma_m).dump(2) << "\n";
    return s;
}

struct SweepRow {
    double axis_value = 0.0;
    std::string axis_label;
    Scheme scheme = Scheme::Proposed;
    EvalSummary summary;
};

inline void write_sweep_csv(const std::filesystem::path& path, const std::string& axis,
                            const std::vector<SweepRow>& rows) {
    std::ofstream out(path);
    require(out.good(), "sweep: cannot write CSV");
    out << axis << ",scheme,episodes,mean_energy_j,std_energy_j,outage_probability,"
           "mean_final_battery_j\n";
    for (const SweepRow& r : rows) {
        out << r.axis_label << ',' << scheme_name(r.scheme) << ',' << r.summary.episodes << ','
            << fmt_double(r.summary.mean_energy) << ',' << fmt_double(r.summary.std_energy) << ','
            << fmt_double(r.summary.outage_probability) << ','
            << fmt_double(r.summary.mean_final_battery) << "\n";
    }
}

enum class SweepAxis { Users, Sigma, TaskSize };

inline SweepAxis sweep_axis_from_name(const std::string& s) {
    if (s == "users") return SweepAxis::Users;
    if (s == "sigma") return SweepAxis::Sigma;
    if (s == "task_size") return SweepAxis::TaskSize;
    throw ValidationError("sweep: unknown axis '" + s + "' (users|sigma|task_size)");
}

// users axis retrains per point (the network dimensions change with K);
// sigma and task_size evaluate an existing checkpoint across the axis.
inline std::vector<SweepRow> run_sweep(const RunConfig& rc, SweepAxis axis,
                                       const std::filesystem::path& checkpoint_path,
                                       const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    std::vector<SweepRow> rows;
    const SchemeToggles toggles = toggles_for(rc.scheme);

    if (axis == SweepAxis::Users) {
        require(!rc.user_sweep.empty(), "sweep: user_sweep list is empty");
        std::vector<int> values = rc.user_sweep;
        std::sort(values.begin(), values.end());
        for (int k : values) {
            RunConfig point = rc;
            point.world.user_count = k;
            const auto sub_dir = out_dir / ("users_" + std::to_string(k));
            const TrainArtifacts art = run_training(point, sub_dir);
            const EvalSummary s =
                run_eval(point, art.checkpoint_path, rc.scheme, rc.eval_episodes, sub_dir);
            rows.push_back({static_cast<double>(k), std::to_string(k), rc.scheme, s});
        }
    } else if (axis == SweepAxis::Sigma) {
        require(!rc.sigma_sweep_m.empty(), "sweep: sigma_sweep_m list is empty");
        std::vector<double> values = rc.sigma_sweep_m;
        std::sort(values.begin(), values.end());
        for (double sigma : values) {
            RunConfig point = rc;
            point.world.jitter.sigma_m = sigma;
            const auto sub_dir = out_dir / ("sigma_" + fmt_double(sigma));
            const EvalSummary s =
                run_eval(point, checkpoint_path, rc.scheme, rc.eval_episodes, sub_dir);
            rows.push_back({sigma, fmt_double(sigma), rc.scheme, s});
        }
    } else {
        require(!rc.task_size_sweep_mbits.empty(), "sweep: task size list is empty");
        auto values = rc.task_size_sweep_mbits;
        std::sort(values.begin(), values.end());
        for (const auto& [lo, hi] : values) {
            RunConfig point = rc;
            point.world.tasks.data_bits_min = lo * 1e6;
            point.world.tasks.data_bits_max = hi * 1e6;
            const std::string label = fmt_double(lo) + ":" + fmt_double(hi);
            const auto sub_dir = out_dir / ("task_" + fmt_double(lo) + "_" + fmt_double(hi));
            const EvalSummary s =
                run_eval(point, checkpoint_path, rc.scheme, rc.eval_episodes, sub_dir);
            rows.push_back({lo, label, rc.scheme, s});
        }
    }
    write_sweep_csv(out_dir / "sweep.csv",
                    axis == SweepAxis::Users   ? "users"
                    : axis == SweepAxis::Sigma ? "sigma"
                                               : "task_size",
                    rows);
    return rows;
}

}  // namespace uavmec
