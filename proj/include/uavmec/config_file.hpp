#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "uavmec/errors.hpp"
#include "uavmec/params.hpp"
#include "uavmec/redq.hpp"

namespace uavmec {

enum class Scheme { Proposed, RandomMove, Untreated, NoCompression, Conventional };

inline std::string scheme_name(Scheme s) {
    switch (s) {
        case Scheme::Proposed: return "proposed";
        case Scheme::RandomMove: return "random_move";
        case Scheme::Untreated: return "untreated";
        case Scheme::NoCompression: return "no_compression";
        case Scheme::Conventional: return "conventional";
    }
    return "proposed";
}

inline Scheme scheme_from_name(const std::string& name) {
    if (name == "proposed") return Scheme::Proposed;
    if (name == "random_move") return Scheme::RandomMove;
    if (name == "untreated") return Scheme::Untreated;
    if (name == "no_compression") return Scheme::NoCompression;
    if (name == "conventional") return Scheme::Conventional;
    throw ValidationError("config: unknown scheme '" + name + "'");
}

// Everything one run needs: world physics, agent hyperparameters, budgets and
// the sweep axes. Defaults reproduce the full-scale simulation table.
struct RunConfig {
    std::uint64_t seed = 1;
    Scheme scheme = Scheme::Proposed;
    long total_steps = 50000;
    int eval_episodes = 20;
    double noise_psd_dbm_hz = -174.0;  // config-facing form of radio.noise_psd_w_hz
    WorldConfig world;
    AgentConfig agent;
    std::vector<double> sigma_sweep_m = {0.5, 1.0, 2.0, 3.0};
    std::vector<int> user_sweep = {5, 10, 15};
    std::vector<std::pair<double, double>> task_size_sweep_mbits = {
        {1.0, 1.25}, {1.5, 1.75}, {2.0, 2.25}};

    void sync_derived() {
        world.radio.noise_psd_w_hz = std::pow(10.0, noise_psd_dbm_hz / 10.0) / 1000.0;
    }

    void validate() const {
        require(total_steps >= 1, "config: total_steps must be >= 1");
        require(eval_episodes >= 1, "config: eval_episodes must be >= 1");
        world.validate();
        agent.validate();
    }
};

// Desk-scale profile: small user count and short episodes so a full training
// run finishes on a laptop-class CPU.
inline RunConfig desk_profile() {
    RunConfig rc;
    rc.world.user_count = 5;
    rc.world.region.n_slots = 20;
    rc.total_steps = 50000;
    rc.sync_derived();
    return rc;
}

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ValidationError("config: key '" + key + "' expects a number, got '" + v + "'");
    }
}

inline long parse_long(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long d = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ValidationError("config: key '" + key + "' expects an integer, got '" + v + "'");
    }
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(trim(item));
    return parts;
}

}  // namespace detail

// Applies "key = value" pairs onto a RunConfig. Unknown keys are rejected so a
// typo can never silently fall back to a default.
class ConfigSchema {
public:
    explicit ConfigSchema(RunConfig& rc) : rc_(rc) {
        using detail::parse_double;
        using detail::parse_long;
        auto num = [](double& slot) {
            return [&slot](const std::string& k, const std::string& v) {
                slot = detail::parse_double(k, v);
            };
        };
        auto integer = [](int& slot) {
            return [&slot](const std::string& k, const std::string& v) {
                slot = static_cast<int>(detail::parse_long(k, v));
            };
        };

        set_["seed"] = [this](const std::string& k, const std::string& v) {
            rc_.seed = static_cast<std::uint64_t>(parse_long(k, v));
        };
        set_["scheme"] = [this](const std::string&, const std::string& v) {
            rc_.scheme = scheme_from_name(v);
        };
        set_["total_steps"] = [this](const std::string& k, const std::string& v) {
            rc_.total_steps = parse_long(k, v);
        };
        set_["eval_episodes"] = integer(rc_.eval_episodes);

        set_["user_count"] = integer(rc_.world.user_count);
        set_["n_slots"] = integer(rc_.world.region.n_slots);
        set_["slot_len_s"] = num(rc_.world.region.slot_len_s);
        set_["x_min_m"] = num(rc_.world.region.x_min_m);
        set_["x_max_m"] = num(rc_.world.region.x_max_m);
        set_["y_min_m"] = num(rc_.world.region.y_min_m);
        set_["y_max_m"] = num(rc_.world.region.y_max_m);
        set_["h_min_m"] = num(rc_.world.region.h_min_m);
        set_["h_max_m"] = num(rc_.world.region.h_max_m);
        set_["v_max_mps"] = num(rc_.world.region.v_max_mps);
        set_["start_x_m"] = num(rc_.world.start_pos.x);
        set_["start_y_m"] = num(rc_.world.start_pos.y);
        set_["start_h_m"] = num(rc_.world.start_pos.z);
        set_["bs_x_m"] = num(rc_.world.bs_pos.x);
        set_["bs_y_m"] = num(rc_.world.bs_pos.y);

        set_["beta0"] = num(rc_.world.radio.beta0);
        set_["path_loss_exponent"] = num(rc_.world.radio.alpha);
        set_["total_bandwidth_hz"] = num(rc_.world.radio.total_bandwidth_hz);
        set_["noise_psd_dbm_hz"] = num(rc_.noise_psd_dbm_hz);
        set_["p_user_w"] = num(rc_.world.radio.p_user_w);
        set_["p_uav_w"] = num(rc_.world.radio.p_uav_w);
        set_["logistic_c1"] = num(rc_.world.radio.logistic.c1);
        set_["logistic_c2"] = num(rc_.world.radio.logistic.c2);
        set_["logistic_b1"] = num(rc_.world.radio.logistic.b1);
        set_["logistic_b2"] = num(rc_.world.radio.logistic.b2);

        set_["f_user_hz"] = num(rc_.world.compute.f_user_hz);
        set_["f_uav_max_hz"] = num(rc_.world.compute.f_uav_max_hz);
        set_["f_bs_hz"] = num(rc_.world.compute.f_bs_hz);
        set_["tau_user"] = num(rc_.world.compute.tau_user);
        set_["tau_uav"] = num(rc_.world.compute.tau_uav);
        set_["epsilon_comp"] = num(rc_.world.compute.epsilon_comp);
        set_["gamma_min"] = num(rc_.world.compute.gamma_min);

        set_["task_bits_min"] = num(rc_.world.tasks.data_bits_min);
        set_["task_bits_max"] = num(rc_.world.tasks.data_bits_max);
        set_["task_density_min"] = num(rc_.world.tasks.density_min);
        set_["task_density_max"] = num(rc_.world.tasks.density_max);

        set_["p0_w"] = num(rc_.world.flight.blade_profile_power_w);
        set_["p1_w"] = num(rc_.world.flight.induced_power_w);
        set_["p2_w_per_mps"] = num(rc_.world.flight.vertical_power_w_per_mps);
        set_["u_tip_mps"] = num(rc_.world.flight.tip_speed_mps);
        set_["v0_mps"] = num(rc_.world.flight.rotor_induced_speed_mps);
        set_["fuselage_drag_ratio"] = num(rc_.world.flight.fuselage_drag_ratio);
        set_["air_density"] = num(rc_.world.flight.air_density);
        set_["rotor_solidity"] = num(rc_.world.flight.rotor_solidity);
        set_["rotor_disc_area_m2"] = num(rc_.world.flight.rotor_disc_area_m2);
        set_["e_uav_max_j"] = num(rc_.world.flight.e_uav_max_j);

        set_["jitter_sigma_m"] = num(rc_.world.jitter.sigma_m);
        set_["rho_trj"] = num(rc_.world.chance.rho_trj);

        set_["ensemble_size"] = integer(rc_.agent.ensemble_size);
        set_["subset_size"] = integer(rc_.agent.subset_size);
        set_["utd_ratio"] = integer(rc_.agent.utd_ratio);
        set_["discount"] = num(rc_.agent.discount);
        set_["batch_size"] = integer(rc_.agent.batch_size);
        set_["replay_capacity"] = integer(rc_.agent.replay_capacity);
        set_["lr_actor"] = num(rc_.agent.lr_actor);
        set_["lr_critic"] = num(rc_.agent.lr_critic);
        set_["tau_target"] = num(rc_.agent.tau_target);
        set_["entropy_target"] = [this](const std::string& k, const std::string& v) {
            if (v == "auto") {
                rc_.agent.entropy_target = std::numeric_limits<double>::quiet_NaN();
            } else {
                rc_.agent.entropy_target = parse_double(k, v);
            }
        };
        set_["init_entropy_weight"] = num(rc_.agent.init_entropy_weight);
        set_["warmup_steps"] = integer(rc_.agent.warmup_steps);
        set_["hidden_layers"] = [this](const std::string& k, const std::string& v) {
            std::vector<int> h;
            for (const auto& part : detail::split(v, ','))
                h.push_back(static_cast<int>(parse_long(k, part)));
            require(!h.empty(), "config: hidden_layers must not be empty");
            rc_.agent.hidden = std::move(h);
        };

        set_["sigma_sweep_m"] = [this](const std::string& k, const std::string& v) {
            std::vector<double> xs;
            for (const auto& part : detail::split(v, ',')) xs.push_back(parse_double(k, part));
            rc_.sigma_sweep_m = std::move(xs);
        };
        set_["user_sweep"] = [this](const std::string& k, const std::string& v) {
            std::vector<int> xs;
            for (const auto& part : detail::split(v, ','))
                xs.push_back(static_cast<int>(parse_long(k, part)));
            rc_.user_sweep = std::move(xs);
        };
        set_["task_size_sweep_mbits"] = [this](const std::string& k, const std::string& v) {
            std::vector<std::pair<double, double>> xs;
            for (const auto& part : detail::split(v, ',')) {
                const auto bounds = detail::split(part, ':');
                require(bounds.size() == 2, "config: task sweep entries are lo:hi pairs");
                xs.emplace_back(parse_double(k, bounds[0]), parse_double(k, bounds[1]));
            }
            rc_.task_size_sweep_mbits = std::move(xs);
        };
    }

    void apply(const std::string& key, const std::string& value) {
        auto it = set_.find(key);
        if (it == set_.end()) throw ValidationError("config: unknown key '" + key + "'");
        it->second(key, value);
    }

private:
    RunConfig& rc_;
    std::map<std::string, std::function<void(const std::string&, const std::string&)>> set_;
};

// Parses "key = value" lines; '#' starts a comment. The result is validated.
inline RunConfig load_config(std::istream& in, RunConfig base = RunConfig{}) {
    ConfigSchema schema(base);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        require(eq != std::string::npos,
                "config: line " + std::to_string(line_no) + " is not 'key = value'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        schema.apply(key, value);
    }
    base.sync_derived();
    base.validate();
    return base;
}

inline RunConfig load_config_file(const std::string& path, RunConfig base = RunConfig{}) {
    std::ifstream in(path);
    require(in.good(), "config: cannot open '" + path + "'");
    return load_config(in, std::move(base));
}

// Every effective value in parseable form; re-running from a snapshot
// reproduces the run bit for bit.
inline std::string resolved_config_text(const RunConfig& rc) {
    std::ostringstream o;
    char buf[40];
    auto num = [&buf](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    o << "seed = " << rc.seed << "\n";
    o << "scheme = " << scheme_name(rc.scheme) << "\n";
    o << "total_steps = " << rc.total_steps << "\n";
    o << "eval_episodes = " << rc.eval_episodes << "\n";
    o << "user_count = " << rc.world.user_count << "\n";
    o << "n_slots = " << rc.world.region.n_slots << "\n";
    o << "slot_len_s = " << num(rc.world.region.slot_len_s) << "\n";
    o << "x_min_m = " << num(rc.world.region.x_min_m) << "\n";
    o << "x_max_m = " << num(rc.world.region.x_max_m) << "\n";
    o << "y_min_m = " << num(rc.world.region.y_min_m) << "\n";
    o << "y_max_m = " << num(rc.world.region.y_max_m) << "\n";
    o << "h_min_m = " << num(rc.world.region.h_min_m) << "\n";
    o << "h_max_m = " << num(rc.world.region.h_max_m) << "\n";
    o << "v_max_mps = " << num(rc.world.region.v_max_mps) << "\n";
    o << "start_x_m = " << num(rc.world.start_pos.x) << "\n";
    o << "start_y_m = " << num(rc.world.start_pos.y) << "\n";
    o << "start_h_m = " << num(rc.world.start_pos.z) << "\n";
    o << "bs_x_m = " << num(rc.world.bs_pos.x) << "\n";
    o << "bs_y_m = " << num(rc.world.bs_pos.y) << "\n";
    o << "beta0 = " << num(rc.world.radio.beta0) << "\n";
    o << "path_loss_exponent = " << num(rc.world.radio.alpha) << "\n";
    o << "total_bandwidth_hz = " << num(rc.world.radio.total_bandwidth_hz) << "\n";
    o << "noise_psd_dbm_hz = " << num(rc.noise_psd_dbm_hz) << "\n";
    o << "p_user_w = " << num(rc.world.radio.p_user_w) << "\n";
    o << "p_uav_w = " << num(rc.world.radio.p_uav_w) << "\n";
    o << "logistic_c1 = " << num(rc.world.radio.logistic.c1) << "\n";
    o << "logistic_c2 = " << num(rc.world.radio.logistic.c2) << "\n";
    o << "logistic_b1 = " << num(rc.world.radio.logistic.b1) << "\n";
    o << "logistic_b2 = " << num(rc.world.radio.logistic.b2) << "\n";
    o << "f_user_hz = " << num(rc.world.compute.f_user_hz) << "\n";
    o << "f_uav_max_hz = " << num(rc.world.compute.f_uav_max_hz) << "\n";
    o << "f_bs_hz = " << num(rc.world.compute.f_bs_hz) << "\n";
    o << "tau_user = " << num(rc.world.compute.tau_user) << "\n";
    o << "tau_uav = " << num(rc.world.compute.tau_uav) << "\n";
    o << "epsilon_comp = " << num(rc.world.compute.epsilon_comp) << "\n";
    o << "gamma_min = " << num(rc.world.compute.gamma_min) << "\n";
    o << "task_bits_min = " << num(rc.world.tasks.data_bits_min) << "\n";
    o << "task_bits_max = " << num(rc.world.tasks.data_bits_max) << "\n";
    o << "task_density_min = " << num(rc.world.tasks.density_min) << "\n";
    o << "task_density_max = " << num(rc.world.tasks.density_max) << "\n";
    o << "p0_w = " << num(rc.world.flight.blade_profile_power_w) << "\n";
    o << "p1_w = " << num(rc.world.flight.induced_power_w) << "\n";
    o << "p2_w_per_mps = " << num(rc.world.flight.vertical_power_w_per_mps) << "\n";
    o << "u_tip_mps = " << num(rc.world.flight.tip_speed_mps) << "\n";
    o << "v0_mps = " << num(rc.world.flight.rotor_induced_speed_mps) << "\n";
    o << "fuselage_drag_ratio = " << num(rc.world.flight.fuselage_drag_ratio) << "\n";
    o << "air_density = " << num(rc.world.flight.air_density) << "\n";
    o << "rotor_solidity = " << num(rc.world.flight.rotor_solidity) << "\n";
    o << "rotor_disc_area_m2 = " << num(rc.world.flight.rotor_disc_area_m2) << "\n";
    o << "e_uav_max_j = " << num(rc.world.flight.e_uav_max_j) << "\n";
    o << "jitter_sigma_m = " << num(rc.world.jitter.sigma_m) << "\n";
    o << "rho_trj = " << num(rc.world.chance.rho_trj) << "\n";
    o << "ensemble_size = " << rc.agent.ensemble_size << "\n";
    o << "subset_size = " << rc.agent.subset_size << "\n";
    o << "utd_ratio = " << rc.agent.utd_ratio << "\n";
    o << "discount = " << num(rc.agent.discount) << "\n";
    o << "batch_size = " << rc.agent.batch_size << "\n";
    o << "replay_capacity = " << rc.agent.replay_capacity << "\n";
    o << "lr_actor = " << num(rc.agent.lr_actor) << "\n";
    o << "lr_critic = " << num(rc.agent.lr_critic) << "\n";
    o << "tau_target = " << num(rc.agent.tau_target) << "\n";
    if (std::isnan(rc.agent.entropy_target)) {
        o << "entropy_target = auto\n";
    } else {
        o << "entropy_target = " << num(rc.agent.entropy_target) << "\n";
    }
    o << "init_entropy_weight = " << num(rc.agent.init_entropy_weight) << "\n";
    o << "warmup_steps = " << rc.agent.warmup_steps << "\n";
    o << "hidden_layers = ";
    for (std::size_t i = 0; i < rc.agent.hidden.size(); ++i) {
        o << (i ? "," : "") << rc.agent.hidden[i];
    }
    o << "\n";
    o << "sigma_sweep_m = ";
    for (std::size_t i = 0; i < rc.sigma_sweep_m.size(); ++i) {
        o << (i ? "," : "") << num(rc.sigma_sweep_m[i]);
    }
    o << "\n";
    o << "user_sweep = ";
    for (std::size_t i = 0; i < rc.user_sweep.size(); ++i) {
        o << (i ? "," : "") << rc.user_sweep[i];
    }
    o << "\n";
    o << "task_size_sweep_mbits = ";
    for (std::size_t i = 0; i < rc.task_size_sweep_mbits.size(); ++i) {
        o << (i ? "," : "") << num(rc.task_size_sweep_mbits[i].first) << ":"
          << num(rc.task_size_sweep_mbits[i].second);
    }
    o << "\n";
    return o.str();
}

}  // namespace uavmec
