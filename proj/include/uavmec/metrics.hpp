#pragma once

#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

#include "uavmec/errors.hpp"
#include "uavmec/mdp.hpp"

namespace uavmec {

// %.17g: shortest exact round-trip for doubles, byte-stable across runs.
inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Append-only per-episode training metrics.
class MetricsWriter {
public:
    static constexpr const char* kHeader =
        "step,episode,reward,e_sum,outage_frac,p_t,p_e,p_dq,alpha_ent,critic_loss,actor_loss";

    explicit MetricsWriter(const std::string& path) : out_(path) {
        require(out_.good(), "metrics: cannot open '" + path + "' for writing");
        out_ << kHeader << "\n";
    }

    void row(long step, long episode, double reward, double e_sum, double outage_frac, double p_t,
             double p_e, double p_dq, double alpha_ent, double critic_loss, double actor_loss) {
        out_ << step << ',' << episode << ',' << fmt_double(reward) << ',' << fmt_double(e_sum)
             << ',' << fmt_double(outage_frac) << ',' << fmt_double(p_t) << ',' << fmt_double(p_e)
             << ',' << fmt_double(p_dq) << ',' << fmt_double(alpha_ent) << ','
             << fmt_double(critic_loss) << ',' << fmt_double(actor_loss) << "\n";
    }

    void flush() { out_.flush(); }

private:
    std::ofstream out_;
};

// One JSON object per line per slot; the plotting pipeline's input.
class TrajectoryWriter {
public:
    explicit TrajectoryWriter(const std::string& path) : out_(path) {
        require(out_.good(), "trajectory: cannot open '" + path + "' for writing");
    }

    void slot(int episode, const SlotRecord& r) {
        nlohmann::json j;
        j["episode"] = episode;
        j["slot"] = r.slot;
        j["planned"] = {r.state_after.planned_pos.x, r.state_after.planned_pos.y,
                        r.state_after.planned_pos.z};
        j["realized"] = {r.state_after.realized_pos.x, r.state_after.realized_pos.y,
                         r.state_after.realized_pos.z};
        j["displacement"] = {r.decision.displacement_m.x, r.decision.displacement_m.y,
                             r.decision.displacement_m.z};
        j["alpha"] = r.decision.alpha;
        j["gamma"] = r.decision.gamma;
        j["f_alloc_hz"] = r.decision.f_alloc_hz;
        nlohmann::json users = nlohmann::json::array();
        for (const UserCost& u : r.costs.users) {
            users.push_back({{"t_lr", u.t_lr},
                             {"e_lr", u.e_lr},
                             {"t_off", u.t_off},
                             {"e_off", u.e_off},
                             {"t_relay", u.t_relay},
                             {"e_relay", u.e_relay},
                             {"t_uav_comp", u.t_uav_comp},
                             {"e_uav_comp", u.e_uav_comp},
                             {"t_bs_comp", u.t_bs_comp},
                             {"t_total", u.t_total},
                             {"e_user", u.e_user},
                             {"infeasible", u.infeasible}});
        }
        j["users"] = std::move(users);
        j["e_fly"] = r.costs.e_fly;
        j["e_uav_slot"] = r.costs.e_uav_slot;
        j["battery"] = r.state_after.battery_j;
        j["prob_violation"] = r.prob_violation;
        j["e_sum"] = r.reward_terms.e_sum;
        j["p_t"] = r.reward_terms.p_t;
        j["p_e"] = r.reward_terms.p_e;
        j["p_dq"] = r.reward_terms.p_dq;
        j["reward"] = r.reward_terms.reward;
        out_ << j << "\n";
    }

private:
    std::ofstream out_;
};

}  // namespace uavmec
