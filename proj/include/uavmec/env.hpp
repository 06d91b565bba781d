#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "uavmec/channel.hpp"
#include "uavmec/costs.hpp"
#include "uavmec/flight.hpp"
#include "uavmec/jitter.hpp"
#include "uavmec/params.hpp"
#include "uavmec/rng.hpp"
#include "uavmec/tasks.hpp"

namespace uavmec {

// Decoded per-slot controls: where to fly and how to schedule every task.
struct DecisionVector {
    Vec3 displacement_m;                 // planned displacement, ||.|| <= v_max * slot_len
    std::vector<double> alpha;           // offload ratio per user, [0, 1]
    std::vector<double> gamma;           // compression ratio per user, [gamma_min, 1]
    std::vector<double> f_alloc_hz;      // UAV CPU share per user, sum <= f_uav_max
};

// Snapshot of the world at the start of a slot.
struct SlotState {
    Vec3 planned_pos;
    Vec3 realized_pos;      // planned_pos + jitter
    double battery_j = 0.0; // max(0, e_uav_max - energy_spent)
    double energy_spent_j = 0.0;  // cumulative UAV energy this episode
    std::vector<TaskInstance> tasks;
    int slot_index = 1;     // 1-based, saturates at n_slots on the terminal state
};

// Deterministic-given-RNG physics engine. One instance per rollout; instances
// are independent and own their RNG.
class Environment {
public:
    struct StepResult {
        SlotState next;
        CostBreakdown costs;
        double prob_violation = 0.0;  // chance of breaking the speed limit, planned displacement
        bool done = false;
    };

    Environment(WorldConfig cfg, std::uint64_t seed)
        : cfg_(std::move(cfg)), rng_(derive_seed(seed, 0xe2f)) {
        cfg_.validate();
        Rng layout_rng(derive_seed(seed, 0x10a));
        user_pos_.reserve(cfg_.user_count);
        for (int k = 0; k < cfg_.user_count; ++k) {
            user_pos_.push_back({uniform_in(layout_rng, cfg_.region.x_min_m, cfg_.region.x_max_m),
                                 uniform_in(layout_rng, cfg_.region.y_min_m, cfg_.region.y_max_m),
                                 0.0});
        }
        reset();
    }

    // Fixed user layout variant (e.g. replaying a dumped trajectory).
    Environment(WorldConfig cfg, std::vector<Vec3> user_positions, std::uint64_t seed)
        : cfg_(std::move(cfg)), user_pos_(std::move(user_positions)),
          rng_(derive_seed(seed, 0xe2f)) {
        cfg_.validate();
        require(static_cast<int>(user_pos_.size()) == cfg_.user_count,
                "environment: user layout size must match user_count");
        reset();
    }

    const SlotState& reset() {
        state_.planned_pos = cfg_.start_pos;
        state_.realized_pos = cfg_.start_pos + sample_jitter(cfg_.jitter, rng_);
        state_.energy_spent_j = 0.0;
        state_.battery_j = cfg_.flight.e_uav_max_j;
        state_.tasks = sample_tasks(rng_, cfg_);
        state_.slot_index = 1;
        done_ = false;
        return state_;
    }

    // Advances one slot: move (clamped plan + jitter), serve this slot's tasks
    // at the new realized position, deduct UAV energy, draw tasks for the next
    // slot. Link/allocation failures are flagged in the breakdown instead of
    // being raised so the reward can penalize them.
    StepResult step(const DecisionVector& d) {
        require(!done_, "environment: episode finished, call reset()");
        require(static_cast<int>(d.alpha.size()) == cfg_.user_count &&
                    static_cast<int>(d.gamma.size()) == cfg_.user_count &&
                    static_cast<int>(d.f_alloc_hz.size()) == cfg_.user_count,
                "environment: decision size must match user_count");

        StepResult r;
        const Vec3 planned_next = cfg_.region.clamp(state_.planned_pos + d.displacement_m);
        const Vec3 planned_disp = planned_next - state_.planned_pos;
        r.prob_violation =
            speed_violation_probability(planned_disp, cfg_.jitter, cfg_.region.max_step_m());

        const Vec3 realized_next = planned_next + sample_jitter(cfg_.jitter, rng_);
        const Vec3 realized_disp = realized_next - state_.realized_pos;
        const double v_h = realized_disp.horizontal_norm() / cfg_.region.slot_len_s;
        const double v_v = std::abs(realized_disp.z) / cfg_.region.slot_len_s;

        r.costs.users.resize(cfg_.user_count);
        r.costs.e_fly = cfg_.region.slot_len_s * propulsion_power(v_h, v_v, cfg_.flight);

        const double bw = cfg_.per_user_bandwidth_hz();
        const double uav_height = realized_next.z;
        for (int k = 0; k < cfg_.user_count; ++k) {
            UserCost& u = r.costs.users[k];
            u.t_max_s = state_.tasks[k].t_max_s;
            try {
                const double rate_up = link_rate(user_pos_[k], realized_next, cfg_.radio.p_user_w,
                                                 bw, uav_height, cfg_.radio);
                const double rate_down = link_rate(realized_next, cfg_.bs_pos, cfg_.radio.p_uav_w,
                                                   bw, uav_height, cfg_.radio);
                const UserSideCosts us = user_side_costs(state_.tasks[k], d.gamma[k], rate_up,
                                                         cfg_.compute, cfg_.radio);
                const UavSideCosts vs =
                    uav_side_costs(state_.tasks[k], d.gamma[k], d.alpha[k], d.f_alloc_hz[k],
                                   rate_down, cfg_.compute, cfg_.radio);
                u.t_lr = us.t_lr;
                u.e_lr = us.e_lr;
                u.t_off = us.t_off;
                u.e_off = us.e_off;
                u.t_relay = vs.t_relay;
                u.e_relay = vs.e_relay;
                u.t_uav_comp = vs.t_uav_comp;
                u.e_uav_comp = vs.e_uav_comp;
                u.t_bs_comp = vs.t_bs_comp;
            } catch (const InfeasibleLinkError&) {
                u.infeasible = true;
            } catch (const InfeasibleAllocationError&) {
                u.infeasible = true;
            }
        }
        finalize_breakdown(r.costs);

        r.next = state_;
        r.next.planned_pos = planned_next;
        r.next.realized_pos = realized_next;
        r.next.energy_spent_j = state_.energy_spent_j + r.costs.e_uav_slot;
        r.next.battery_j = std::max(0.0, cfg_.flight.e_uav_max_j - r.next.energy_spent_j);
        r.next.tasks = sample_tasks(rng_, cfg_);
        r.done = state_.slot_index >= cfg_.region.n_slots;
        r.next.slot_index = std::min(state_.slot_index + 1, cfg_.region.n_slots);

        state_ = r.next;
        done_ = r.done;
        return r;
    }

    const WorldConfig& config() const { return cfg_; }
    const std::vector<Vec3>& user_positions() const { return user_pos_; }
    const SlotState& state() const { return state_; }
    bool done() const { return done_; }

private:
    WorldConfig cfg_;
    std::vector<Vec3> user_pos_;
    Rng rng_;
    SlotState state_;
    bool done_ = false;
};

}  // namespace uavmec
