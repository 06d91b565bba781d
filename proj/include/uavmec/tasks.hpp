#pragma once

#include <vector>

#include "uavmec/params.hpp"
#include "uavmec/rng.hpp"

namespace uavmec {

// One computing task: raw size, cycles per bit, deadline.
struct TaskInstance {
    double data_bits = 0.0;
    double density_cycles_per_bit = 0.0;
    double t_max_s = 0.0;
};

// Fresh tasks for every user at the start of a slot. Sizes and densities are
// uniform draws; the deadline equals the slot length.
inline std::vector<TaskInstance> sample_tasks(Rng& rng, const WorldConfig& cfg) {
    std::vector<TaskInstance> tasks;
    tasks.reserve(cfg.user_count);
    for (int k = 0; k < cfg.user_count; ++k) {
        TaskInstance t;
        t.data_bits = uniform_in(rng, cfg.tasks.data_bits_min, cfg.tasks.data_bits_max);
        t.density_cycles_per_bit = uniform_in(rng, cfg.tasks.density_min, cfg.tasks.density_max);
        t.t_max_s = cfg.region.slot_len_s;
        tasks.push_back(t);
    }
    return tasks;
}

}  // namespace uavmec
