#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "uavmec/errors.hpp"
#include "uavmec/nn.hpp"
#include "uavmec/redq.hpp"
#include "uavmec/vec3.hpp"

namespace uavmec {

// Versioned JSON checkpoint: actor, critic ensemble, targets, entropy weight,
// plus the user layout the policy was trained against.

inline constexpr int kCheckpointVersion = 1;

namespace detail {

inline nlohmann::json param_set_to_json(const nn::ParamSet& p) {
    nlohmann::json layers = nlohmann::json::array();
    for (std::size_t l = 0; l < p.w.size(); ++l) {
        nlohmann::json layer;
        layer["in"] = p.w[l].rows();
        layer["out"] = p.w[l].cols();
        std::vector<double> w(p.w[l].data(), p.w[l].data() + p.w[l].size());
        std::vector<double> b(p.b[l].data(), p.b[l].data() + p.b[l].size());
        layer["w"] = std::move(w);  // column-major
        layer["b"] = std::move(b);
        layers.push_back(std::move(layer));
    }
    return layers;
}

inline nn::ParamSet param_set_from_json(const nlohmann::json& layers) {
    nn::ParamSet p;
    for (const auto& layer : layers) {
        const Eigen::Index in = layer.at("in").get<Eigen::Index>();
        const Eigen::Index out = layer.at("out").get<Eigen::Index>();
        const auto w = layer.at("w").get<std::vector<double>>();
        const auto b = layer.at("b").get<std::vector<double>>();
        require(static_cast<Eigen::Index>(w.size()) == in * out &&
                    static_cast<Eigen::Index>(b.size()) == out,
                "checkpoint: layer payload size mismatch");
        nn::Mat wm(in, out);
        std::copy(w.begin(), w.end(), wm.data());
        nn::Vec bv(out);
        std::copy(b.begin(), b.end(), bv.data());
        p.w.push_back(std::move(wm));
        p.b.push_back(std::move(bv));
    }
    return p;
}

}  // namespace detail

inline nlohmann::json checkpoint_to_json(const RedqAgent& agent,
                                         const std::vector<Vec3>& user_positions) {
    nlohmann::json j;
    j["format_version"] = kCheckpointVersion;
    j["obs_dim"] = agent.obs_dim();
    j["act_dim"] = agent.act_dim();
    j["hidden"] = agent.config().hidden;
    j["log_alpha"] = agent.log_alpha();
    j["actor"] = detail::param_set_to_json(agent.actor_params());
    nlohmann::json critics = nlohmann::json::array();
    for (const auto& c : agent.critic_params()) critics.push_back(detail::param_set_to_json(c));
    j["critics"] = std::move(critics);
    nlohmann::json targets = nlohmann::json::array();
    for (const auto& t : agent.target_params()) targets.push_back(detail::param_set_to_json(t));
    j["targets"] = std::move(targets);
    nlohmann::json users = nlohmann::json::array();
    for (const Vec3& u : user_positions) users.push_back({u.x, u.y, u.z});
    j["user_positions"] = std::move(users);
    return j;
}

inline void save_checkpoint(const std::string& path, const RedqAgent& agent,
                            const std::vector<Vec3>& user_positions) {
    std::ofstream out(path);
    require(out.good(), "checkpoint: cannot open '" + path + "' for writing");
    out << checkpoint_to_json(agent, user_positions) << "\n";
}

struct LoadedCheckpoint {
    int obs_dim = 0;
    int act_dim = 0;
    std::vector<int> hidden;
    double log_alpha = 0.0;
    nn::ParamSet actor;
    std::vector<nn::ParamSet> critics;
    std::vector<nn::ParamSet> targets;
    std::vector<Vec3> user_positions;
};

inline LoadedCheckpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "checkpoint: cannot open '" + path + "'");
    nlohmann::json j;
    in >> j;
    require(j.at("format_version").get<int>() == kCheckpointVersion,
            "checkpoint: unsupported format version");
    LoadedCheckpoint c;
    c.obs_dim = j.at("obs_dim").get<int>();
    c.act_dim = j.at("act_dim").get<int>();
    c.hidden = j.at("hidden").get<std::vector<int>>();
    c.log_alpha = j.at("log_alpha").get<double>();
    c.actor = detail::param_set_from_json(j.at("actor"));
    for (const auto& cj : j.at("critics")) c.critics.push_back(detail::param_set_from_json(cj));
    for (const auto& tj : j.at("targets")) c.targets.push_back(detail::param_set_from_json(tj));
    for (const auto& uj : j.at("user_positions")) {
        c.user_positions.push_back({uj.at(0).get<double>(), uj.at(1).get<double>(),
                                    uj.at(2).get<double>()});
    }
    return c;
}

// Restores the stored parameters into a freshly constructed agent.
inline void apply_checkpoint(RedqAgent& agent, const LoadedCheckpoint& c) {
    require(agent.obs_dim() == c.obs_dim && agent.act_dim() == c.act_dim,
            "checkpoint: agent dimensions do not match the stored network");
    require(agent.critic_params().size() == c.critics.size(),
            "checkpoint: ensemble size does not match");
    agent.actor_params() = c.actor;
    agent.critic_params() = c.critics;
    agent.target_params() = c.targets;
    agent.set_log_alpha(c.log_alpha);
}

}  // namespace uavmec
