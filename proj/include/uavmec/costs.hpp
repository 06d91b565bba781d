#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "uavmec/errors.hpp"
#include "uavmec/params.hpp"
#include "uavmec/tasks.hpp"

namespace uavmec {

// Extra CPU cycles per bit spent compressing down to ratio gamma:
// J(gamma) = exp(eps/gamma) - exp(eps). J(1) = 0, strictly decreasing in gamma.
inline double compression_density(double gamma, double epsilon_comp) {
    if (!(gamma > 0.0 && gamma <= 1.0)) {
        throw std::domain_error("compression_density: gamma must lie in (0, 1]");
    }
    return std::exp(epsilon_comp / gamma) - std::exp(epsilon_comp);
}

struct UserSideCosts {
    double t_lr = 0.0;   // local compression time
    double e_lr = 0.0;   // local compression energy
    double t_off = 0.0;  // user -> UAV upload time
    double e_off = 0.0;  // user -> UAV upload energy
};

// Compression happens on the user's CPU, then the compressed payload is
// uploaded at rate_up.
inline UserSideCosts user_side_costs(const TaskInstance& task, double gamma, double rate_up,
                                     const ComputeParams& compute, const RadioParams& radio) {
    if (rate_up <= 0.0) throw InfeasibleLinkError("user_side_costs: uplink rate must be > 0");
    const double j = compression_density(gamma, compute.epsilon_comp);
    UserSideCosts c;
    c.t_lr = task.data_bits * j / compute.f_user_hz;
    c.e_lr = task.data_bits * j * compute.f_user_hz * compute.f_user_hz * compute.tau_user;
    c.t_off = gamma * task.data_bits / rate_up;
    c.e_off = c.t_off * radio.p_user_w;
    return c;
}

struct UavSideCosts {
    double t_relay = 0.0;     // UAV -> BS forwarding time for the alpha share
    double e_relay = 0.0;
    double t_uav_comp = 0.0;  // on-board computation of the (1 - alpha) share
    double e_uav_comp = 0.0;
    double t_bs_comp = 0.0;   // BS computation of the alpha share
};

// Splits the received payload: alpha forwarded to the BS, the rest computed
// on board with the allocated frequency. Zero workload with zero allocation
// costs nothing; positive workload with zero allocation is infeasible.
inline UavSideCosts uav_side_costs(const TaskInstance& task, double gamma, double alpha_off,
                                   double f_alloc_hz, double rate_down,
                                   const ComputeParams& compute, const RadioParams& radio) {
    if (rate_down <= 0.0) throw InfeasibleLinkError("uav_side_costs: downlink rate must be > 0");
    if (!(alpha_off >= 0.0 && alpha_off <= 1.0)) {
        throw std::domain_error("uav_side_costs: alpha must lie in [0, 1]");
    }
    if (f_alloc_hz < 0.0) throw std::domain_error("uav_side_costs: negative CPU allocation");

    UavSideCosts c;
    c.t_relay = alpha_off * gamma * task.data_bits / rate_down;
    c.e_relay = c.t_relay * radio.p_uav_w;

    const double local_cycles = (1.0 - alpha_off) * task.density_cycles_per_bit * task.data_bits;
    if (local_cycles > 0.0 && f_alloc_hz <= 0.0) {
        throw InfeasibleAllocationError("uav_side_costs: zero CPU allocation with pending workload");
    }
    c.t_uav_comp = local_cycles > 0.0 ? local_cycles / f_alloc_hz : 0.0;
    c.e_uav_comp = local_cycles * compute.tau_uav * f_alloc_hz * f_alloc_hz;
    c.t_bs_comp = alpha_off * task.density_cycles_per_bit * task.data_bits / compute.f_bs_hz;
    return c;
}

// Completion latency of one task: compression and upload are sequential, then
// on-board compute overlaps the relay+BS branch.
inline double slot_latency(double t_lr, double t_off, double t_uav_comp, double t_relay,
                           double t_bs_comp) {
    return t_lr + t_off + std::max(t_uav_comp, t_relay + t_bs_comp);
}

// All time/energy components for one user in one slot.
struct UserCost {
    double t_lr = 0.0, e_lr = 0.0;
    double t_off = 0.0, e_off = 0.0;
    double t_relay = 0.0, e_relay = 0.0;
    double t_uav_comp = 0.0, e_uav_comp = 0.0;
    double t_bs_comp = 0.0;
    double t_total = 0.0;   // slot_latency of the five components
    double e_user = 0.0;    // e_lr + e_off
    double t_max_s = 0.0;   // deadline carried over from the task
    bool infeasible = false;  // link/allocation failure; penalized, not raised
};

// Per-slot cost ledger for the whole system.
struct CostBreakdown {
    std::vector<UserCost> users;
    double e_fly = 0.0;       // propulsion energy over the slot
    double e_uav_slot = 0.0;  // sum_k (e_relay + e_uav_comp) + e_fly

    double total_user_energy() const {
        double s = 0.0;
        for (const UserCost& u : users) s += u.e_user;
        return s;
    }

    bool any_infeasible() const {
        for (const UserCost& u : users)
            if (u.infeasible) return true;
        return false;
    }
};

// Fills the aggregate fields from the per-user components.
inline void finalize_breakdown(CostBreakdown& b) {
    double uav_energy = 0.0;
    for (UserCost& u : b.users) {
        u.t_total = slot_latency(u.t_lr, u.t_off, u.t_uav_comp, u.t_relay, u.t_bs_comp);
        u.e_user = u.e_lr + u.e_off;
        uav_energy += u.e_relay + u.e_uav_comp;
    }
    b.e_uav_slot = uav_energy + b.e_fly;
}

}  // namespace uavmec
