#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "uavmec/env.hpp"
#include "uavmec/params.hpp"

namespace uavmec {

// Agent-facing state: everything min-max scaled into [0, 1].
// Layout: [x, y, h, battery, D_1, C_1, ..., D_K, C_K], length 2K + 4.
using Observation = Eigen::VectorXd;

// Agent output in [0, 1]^(3K+3).
// Layout: [alpha_1, gamma_1, w_1, ..., alpha_K, gamma_K, w_K, move_az, move_pol, move_radius].
using RawAction = Eigen::VectorXd;

inline double scale01(double v, double lo, double hi) {
    const double t = (v - lo) / (hi - lo);
    return t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
}

inline Observation encode_state(const SlotState& s, const WorldConfig& cfg) {
    Observation o(cfg.observation_dim());
    const Region& r = cfg.region;
    o[0] = scale01(s.realized_pos.x, r.x_min_m, r.x_max_m);
    o[1] = scale01(s.realized_pos.y, r.y_min_m, r.y_max_m);
    o[2] = scale01(s.realized_pos.z, r.h_min_m, r.h_max_m);
    o[3] = scale01(s.battery_j, 0.0, cfg.flight.e_uav_max_j);
    for (int k = 0; k < cfg.user_count; ++k) {
        o[4 + 2 * k] = scale01(s.tasks[k].data_bits, cfg.tasks.data_bits_min, cfg.tasks.data_bits_max);
        o[5 + 2 * k] = scale01(s.tasks[k].density_cycles_per_bit, cfg.tasks.density_min,
                               cfg.tasks.density_max);
    }
    return o;
}

// Maps the unit-box action onto physical controls. Movement decodes as
// direction (azimuth + polar cosine) plus radius, so the planned displacement
// respects the speed limit by construction. CPU weights are normalized by
// max(1, sum) so the UAV budget can be under- but never over-subscribed.
inline DecisionVector decode_action(const RawAction& raw, const WorldConfig& cfg) {
    if (raw.size() != cfg.action_dim()) {
        throw std::domain_error("decode_action: wrong action dimension");
    }
    for (Eigen::Index i = 0; i < raw.size(); ++i) {
        if (!(raw[i] >= 0.0 && raw[i] <= 1.0)) {
            throw std::domain_error("decode_action: entries must lie in [0, 1]");
        }
    }
    DecisionVector d;
    const int k_users = cfg.user_count;
    d.alpha.resize(k_users);
    d.gamma.resize(k_users);
    d.f_alloc_hz.resize(k_users);

    double weight_sum = 0.0;
    for (int k = 0; k < k_users; ++k) {
        d.alpha[k] = raw[3 * k];
        d.gamma[k] = cfg.compute.gamma_min + raw[3 * k + 1] * (1.0 - cfg.compute.gamma_min);
        weight_sum += raw[3 * k + 2];
    }
    const double norm = std::max(1.0, weight_sum);
    for (int k = 0; k < k_users; ++k) {
        d.f_alloc_hz[k] = raw[3 * k + 2] / norm * cfg.compute.f_uav_max_hz;
    }

    const double azimuth = 2.0 * std::numbers::pi * raw[3 * k_users];
    const double cos_polar = 2.0 * raw[3 * k_users + 1] - 1.0;
    const double sin_polar = std::sqrt(std::max(0.0, 1.0 - cos_polar * cos_polar));
    const double radius = raw[3 * k_users + 2] * cfg.region.max_step_m();
    d.displacement_m = {radius * sin_polar * std::cos(azimuth),
                        radius * sin_polar * std::sin(azimuth), radius * cos_polar};
    return d;
}

// Soft constraint multiplier: 1 while x <= a, approaches 2 as the excess
// (x - a)/b grows. P(x, a, b) = 2 - exp(-[(x - a)/b]^+).
inline double penalty(double x, double a, double b) {
    if (!(b > 0.0)) throw std::domain_error("penalty: scale b must be > 0");
    const double excess = std::max(0.0, (x - a) / b);
    return 2.0 - std::exp(-excess);
}

struct RewardTerms {
    double e_sum = 0.0;      // total user energy this slot
    double p_t = 1.0;        // deadline multiplier, averaged over users
    double p_e = 1.0;        // UAV energy-budget multiplier
    double p_dq = 1.0;       // speed chance-constraint multiplier
    double reward = 0.0;     // -e_sum * p_t * p_e * p_dq
    double e_uav_cum = 0.0;  // cumulative UAV energy including this slot
};

// Penalized reward for one slot. Infeasible users count as maximally late
// (multiplier 2). e_uav_cum must already include this slot's UAV energy.
inline RewardTerms reward(const CostBreakdown& costs, double e_uav_cum, double prob_violation,
                          const WorldConfig& cfg) {
    RewardTerms t;
    t.e_sum = costs.total_user_energy();
    t.e_uav_cum = e_uav_cum;
    double p_t_sum = 0.0;
    for (const UserCost& u : costs.users) {
        p_t_sum += u.infeasible ? 2.0 : penalty(u.t_total, u.t_max_s, u.t_max_s);
    }
    t.p_t = p_t_sum / static_cast<double>(costs.users.size());
    t.p_e = penalty(e_uav_cum, cfg.flight.e_uav_max_j, cfg.flight.e_uav_max_j);
    t.p_dq = penalty(prob_violation, cfg.chance.rho_trj, cfg.chance.rho_trj);
    t.reward = -t.e_sum * t.p_t * t.p_e * t.p_dq;
    return t;
}

// One replay record.
struct Transition {
    Observation obs;
    RawAction action;       // the executed raw action
    double reward = 0.0;
    Observation next_obs;
    bool done = false;
};

struct SlotRecord {
    int slot = 0;
    SlotState state_before;   // positions at the slot start
    SlotState state_after;
    DecisionVector decision;
    CostBreakdown costs;
    RewardTerms reward_terms;
    double prob_violation = 0.0;
};

struct EpisodeSummary {
    double total_user_energy = 0.0;  // sum over slots of e_sum
    double total_reward = 0.0;
    double outage_fraction = 0.0;    // slots with prob_violation > rho
    double final_battery_j = 0.0;
    double mean_p_t = 1.0, mean_p_e = 1.0, mean_p_dq = 1.0;
};

struct EpisodeResult {
    std::vector<Transition> transitions;
    std::vector<SlotRecord> records;
    EpisodeSummary summary;
};

using Policy = std::function<RawAction(const Observation&)>;

// Rolls one full episode. `ignore_chance_penalty` reproduces the variant that
// feels jitter but never pays for it (p_dq pinned to 1 in the reward).
inline EpisodeResult episode(Environment& env, const Policy& policy,
                             bool ignore_chance_penalty = false) {
    EpisodeResult out;
    const WorldConfig& cfg = env.config();
    env.reset();
    out.summary.mean_p_t = out.summary.mean_p_e = out.summary.mean_p_dq = 0.0;
    int outages = 0;
    for (int n = 1; n <= cfg.region.n_slots; ++n) {
        SlotRecord rec;
        rec.slot = n;
        rec.state_before = env.state();
        const Observation obs = encode_state(rec.state_before, cfg);
        const RawAction action = policy(obs);
        rec.decision = decode_action(action, cfg);
        Environment::StepResult sr = env.step(rec.decision);
        rec.state_after = sr.next;
        rec.costs = sr.costs;
        rec.prob_violation = sr.prob_violation;
        rec.reward_terms = reward(sr.costs, sr.next.energy_spent_j, sr.prob_violation, cfg);
        if (ignore_chance_penalty) {
            rec.reward_terms.p_dq = 1.0;
            rec.reward_terms.reward =
                -rec.reward_terms.e_sum * rec.reward_terms.p_t * rec.reward_terms.p_e;
        }
        if (sr.prob_violation > cfg.chance.rho_trj) ++outages;

        Transition tr;
        tr.obs = obs;
        tr.action = action;
        tr.reward = rec.reward_terms.reward;
        tr.next_obs = encode_state(sr.next, cfg);
        tr.done = sr.done;
        out.transitions.push_back(std::move(tr));

        out.summary.total_user_energy += rec.reward_terms.e_sum;
        out.summary.total_reward += rec.reward_terms.reward;
        out.summary.mean_p_t += rec.reward_terms.p_t;
        out.summary.mean_p_e += rec.reward_terms.p_e;
        out.summary.mean_p_dq += rec.reward_terms.p_dq;
        out.records.push_back(std::move(rec));
    }
    const double n = static_cast<double>(cfg.region.n_slots);
    out.summary.mean_p_t /= n;
    out.summary.mean_p_e /= n;
    out.summary.mean_p_dq /= n;
    out.summary.outage_fraction = outages / n;
    out.summary.final_battery_j = env.state().battery_j;
    return out;
}

}  // namespace uavmec
