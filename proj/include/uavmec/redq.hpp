#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "uavmec/errors.hpp"
#include "uavmec/nn.hpp"
#include "uavmec/policy.hpp"
#include "uavmec/replay.hpp"
#include "uavmec/rng.hpp"

namespace uavmec {

// Randomized-ensemble double Q learner: X critics trained against a shared
// target built from the minimum over a random subset of the target nets,
// with utd_ratio critic rounds per environment step and auto-tuned entropy.
struct AgentConfig {
    int ensemble_size = 10;   // X
    int subset_size = 2;      // Y
    int utd_ratio = 20;       // critic update rounds per environment step
    double discount = 0.9;
    int batch_size = 256;
    int replay_capacity = 20000;
    double lr_actor = 1e-4;
    double lr_critic = 1e-3;
    double tau_target = 0.995;  // weight of the OLD target in the soft update
    // NaN means "resolve to -action_dim" when the agent is built.
    double entropy_target = std::numeric_limits<double>::quiet_NaN();
    double init_entropy_weight = 0.2;
    int warmup_steps = 1000;
    std::vector<int> hidden = {128, 128};

    void validate() const {
        require(ensemble_size >= 1, "agent: ensemble_size must be >= 1");
        require(subset_size >= 1 && subset_size <= ensemble_size,
                "agent: subset_size must lie in [1, ensemble_size]");
        require(utd_ratio >= 1, "agent: utd_ratio must be >= 1");
        require(discount >= 0.0 && discount <= 1.0, "agent: discount must lie in [0, 1]");
        require(batch_size >= 1 && replay_capacity >= 1, "agent: batch/capacity must be >= 1");
        require(lr_actor > 0.0 && lr_critic > 0.0, "agent: learning rates must be > 0");
        require(tau_target >= 0.0 && tau_target <= 1.0, "agent: tau must lie in [0, 1]");
        require(init_entropy_weight > 0.0, "agent: initial entropy weight must be > 0");
        require(warmup_steps >= 0, "agent: warmup must be >= 0");
        require(!hidden.empty(), "agent: need at least one hidden layer");
    }
};

class RedqAgent {
public:
    enum class Mode { Explore, Exploit };

    struct TargetInfo {
        Eigen::VectorXd y;
        std::vector<int> subset;
        Eigen::VectorXd min_subset;   // per-sample min over the subset
        Eigen::VectorXd min_all;      // per-sample min over all X targets (diagnostics only)
        Eigen::VectorXd next_log_pi;
    };

    struct UpdateStats {
        double critic_loss = 0.0;  // mean over rounds and ensemble members
        double actor_loss = 0.0;
        double alpha = 0.0;
        long skipped = 0;
    };

    RedqAgent(const AgentConfig& cfg, int obs_dim, int act_dim, std::uint64_t seed)
        : cfg_(cfg), obs_dim_(obs_dim), act_dim_(act_dim),
          buffer_(cfg.replay_capacity, obs_dim, act_dim), rng_(derive_seed(seed, 0xa9e27)) {
        cfg_.validate();
        if (std::isnan(cfg_.entropy_target)) cfg_.entropy_target = -static_cast<double>(act_dim);

        const nn::MlpSpec actor_spec{obs_dim_, cfg_.hidden, 2 * act_dim_};
        actor_ = nn::init_params(actor_spec, rng_);
        actor_opt_ = nn::make_adam(actor_, cfg_.lr_actor);

        const nn::MlpSpec critic_spec{obs_dim_ + act_dim_, cfg_.hidden, 1};
        critics_.reserve(cfg_.ensemble_size);
        for (int i = 0; i < cfg_.ensemble_size; ++i) {
            critics_.push_back(nn::init_params(critic_spec, rng_));
            critic_opts_.push_back(nn::make_adam(critics_.back(), cfg_.lr_critic));
        }
        targets_ = critics_;  // targets start as copies
        log_alpha_ = std::log(cfg_.init_entropy_weight);
        critic_ws_.resize(cfg_.ensemble_size);
        critic_grads_.resize(cfg_.ensemble_size);
    }

    // --- acting ---------------------------------------------------------

    // Raw action in [0,1]^act_dim. Exploration uses a squashed-Gaussian draw;
    // the first warmup_steps environment steps fall back to uniform noise.
    Eigen::VectorXd act(const Eigen::VectorXd& obs, Mode mode) {
        if (mode == Mode::Explore && env_steps_ < cfg_.warmup_steps) {
            Eigen::VectorXd a(act_dim_);
            for (int i = 0; i < act_dim_; ++i) a[i] = uniform01(rng_);
            return a;
        }
        const nn::Mat out = nn::forward(actor_, obs.transpose());
        const nn::ActorHead head = nn::split_actor_output(out);
        if (mode == Mode::Exploit) {
            return to_unit_box(nn::policy_mean_action(head.mean.row(0).transpose()));
        }
        nn::PolicySample s = nn::policy_sample(head.mean.row(0).transpose(),
                                               head.log_std.row(0).transpose(), rng_);
        return to_unit_box(s.action);
    }

    // Stores a transition and advances the environment-step counter.
    void observe(const Eigen::VectorXd& obs, const Eigen::VectorXd& action, double reward,
                 const Eigen::VectorXd& next_obs, bool done) {
        buffer_.add(obs, action, reward, next_obs, done);
        ++env_steps_;
    }

    bool ready_to_update() const {
        return env_steps_ > cfg_.warmup_steps && buffer_.size() >= cfg_.batch_size;
    }

    // --- learning (one environment step's worth of updates) --------------

    // utd_ratio critic rounds, each with a fresh mini-batch and a fresh
    // critic subset, then one actor update and one entropy update.
    UpdateStats update() {
        UpdateStats stats;
        for (int round = 0; round < cfg_.utd_ratio; ++round) {
            buffer_.sample(cfg_.batch_size, rng_, batch_);
            const TargetInfo ti = compute_target(batch_, sample_subset());
            stats.critic_loss += update_critics(batch_, ti.y);
        }
        stats.critic_loss /= static_cast<double>(cfg_.utd_ratio);
        stats.actor_loss = update_actor(batch_);
        update_entropy_weight(batch_);
        stats.alpha = alpha();
        stats.skipped = skipped_updates_;
        return stats;
    }

    std::vector<int> sample_subset() {
        std::vector<int> all(cfg_.ensemble_size);
        std::iota(all.begin(), all.end(), 0);
        // partial Fisher-Yates: the first subset_size entries, no replacement
        for (int i = 0; i < cfg_.subset_size; ++i) {
            std::uniform_int_distribution<int> pick(i, cfg_.ensemble_size - 1);
            std::swap(all[i], all[pick(rng_)]);
        }
        return {all.begin(), all.begin() + cfg_.subset_size};
    }

    // Shared TD target: y = r + discount * (1 - done) *
    //   (min over the subset of target critics at (s', a') - alpha * log pi(a'|s')).
    TargetInfo compute_target(const Batch& batch, const std::vector<int>& subset,
                              bool full_diagnostics = false) {
        if (subset.empty()) throw std::domain_error("compute_target: empty subset");
        const int B = static_cast<int>(batch.obs.rows());
        TargetInfo ti;
        ti.subset = subset;

        const nn::Mat actor_out = nn::forward(actor_, batch.next_obs);
        const nn::ActorHead head = nn::split_actor_output(actor_out);
        fill_noise(B);
        const nn::SquashedSample next = nn::squash(head.mean, head.log_std, noise_);
        ti.next_log_pi = next.log_prob;

        next_input_.resize(B, obs_dim_ + act_dim_);
        next_input_.leftCols(obs_dim_) = batch.next_obs;
        next_input_.rightCols(act_dim_) = 0.5 * (next.action.array() + 1.0);

        ti.min_subset = critic_min(targets_, subset, next_input_);
        if (full_diagnostics || diagnostics_) {
            std::vector<int> all(cfg_.ensemble_size);
            std::iota(all.begin(), all.end(), 0);
            ti.min_all = critic_min(targets_, all, next_input_);
            for (int i = 0; i < B; ++i) {
                if (ti.min_subset[i] < ti.min_all[i] - 0.0) ++subset_bound_violations_;
            }
            subset_checked_batches_ += 1;
        }

        ti.y = batch.rew.array() +
               cfg_.discount * (1.0 - batch.done.array()) *
                   (ti.min_subset.array() - alpha() * ti.next_log_pi.array());
        return ti;
    }

    // One optimizer step per critic on the shared target, then the soft
    // target-tracking update. Returns the mean squared-error loss.
    double update_critics(const Batch& batch, const Eigen::VectorXd& y) {
        const int B = static_cast<int>(batch.obs.rows());
        sa_input_.resize(B, obs_dim_ + act_dim_);
        sa_input_.leftCols(obs_dim_) = batch.obs;
        sa_input_.rightCols(act_dim_) = batch.act;

        std::vector<double> losses(cfg_.ensemble_size, 0.0);
        std::vector<int> failed(cfg_.ensemble_size, 0);
#pragma omp parallel for schedule(static)
        for (int i = 0; i < cfg_.ensemble_size; ++i) {
            nn::Mat q = nn::forward(critics_[i], sa_input_, &critic_ws_[i]);
            nn::Mat diff = q.col(0) - y;
            losses[i] = diff.squaredNorm() / static_cast<double>(B);
            nn::Mat out_grad = diff * (2.0 / static_cast<double>(B));
            nn::backward(critics_[i], critic_ws_[i], out_grad, critic_grads_[i]);
            if (!nn::adam_step(critic_opts_[i], critics_[i], critic_grads_[i])) failed[i] = 1;
            nn::soft_update(targets_[i], critics_[i], cfg_.tau_target);
        }
        for (int i = 0; i < cfg_.ensemble_size; ++i) skipped_updates_ += failed[i];
        ++critic_update_rounds_;
        double mean_loss = 0.0;
        for (double l : losses) mean_loss += l;
        return mean_loss / static_cast<double>(cfg_.ensemble_size);
    }

    // Ascends E[(1/X) sum_i Q_i(s, a~) - alpha * log pi(a~|s)] with
    // reparameterized samples; implemented as descent on the negated value.
    double update_actor(const Batch& batch) {
        fill_noise(static_cast<int>(batch.obs.rows()));
        nn::ParamSet grads;
        const double loss = actor_loss_and_grads(actor_, batch.obs, noise_, &grads);
        if (!nn::adam_step(actor_opt_, actor_, grads)) ++skipped_updates_;
        ++actor_updates_;
        return loss;
    }

    // L(alpha) = E[-alpha log pi - alpha * target]; one Adam step on log alpha.
    void update_entropy_weight(const Batch& batch) {
        const nn::Mat actor_out = nn::forward(actor_, batch.obs);
        const nn::ActorHead head = nn::split_actor_output(actor_out);
        fill_noise(static_cast<int>(batch.obs.rows()));
        const nn::SquashedSample s = nn::squash(head.mean, head.log_std, noise_);
        entropy_step(-s.log_prob.mean());
    }

    // Exposed so the single gradient step is hand-traceable: empirical
    // entropy above the target lowers alpha, below raises it.
    void entropy_step(double empirical_entropy) {
        const double grad = alpha() * (empirical_entropy - cfg_.entropy_target);
        ++alpha_t_;
        alpha_m_ = 0.9 * alpha_m_ + 0.1 * grad;
        alpha_v_ = 0.999 * alpha_v_ + 0.001 * grad * grad;
        const double mh = alpha_m_ / (1.0 - std::pow(0.9, static_cast<double>(alpha_t_)));
        const double vh = alpha_v_ / (1.0 - std::pow(0.999, static_cast<double>(alpha_t_)));
        log_alpha_ -= cfg_.lr_actor * mh / (std::sqrt(vh) + 1e-8);
        ++entropy_updates_;
    }

    // Actor objective value and its exact parameter gradients for a fixed
    // noise draw. The value-only path (grads == nullptr) backs the
    // finite-difference oracle.
    double actor_loss_and_grads(const nn::ParamSet& actor_params, const nn::Mat& obs,
                                const nn::Mat& z, nn::ParamSet* grads) const {
        const int B = static_cast<int>(obs.rows());
        nn::ForwardCache cache;
        const nn::Mat actor_out = nn::forward(actor_params, obs, grads ? &cache : nullptr);
        const nn::ActorHead head = nn::split_actor_output(actor_out);
        const nn::SquashedSample s = nn::squash(head.mean, head.log_std, z);

        nn::Mat input(B, obs_dim_ + act_dim_);
        input.leftCols(obs_dim_) = obs;
        input.rightCols(act_dim_) = 0.5 * (s.action.array() + 1.0);

        const double inv_x = 1.0 / static_cast<double>(cfg_.ensemble_size);
        std::vector<double> q_sums(cfg_.ensemble_size, 0.0);
        std::vector<nn::Mat> in_grads(cfg_.ensemble_size);
#pragma omp parallel for schedule(static)
        for (int i = 0; i < cfg_.ensemble_size; ++i) {
            nn::ForwardCache ws;
            nn::Mat q = nn::forward(critics_[i], input, &ws);
            q_sums[i] = q.col(0).sum();
            if (grads) {
                nn::Mat ones = nn::Mat::Ones(B, 1);
                nn::input_gradient(critics_[i], ws, ones, in_grads[i]);
            }
        }
        double q_mean_sum = 0.0;
        for (double qs : q_sums) q_mean_sum += qs * inv_x;

        const double a = alpha();
        const double loss = (a * s.log_prob.sum() - q_mean_sum) / static_cast<double>(B);
        if (!grads) return loss;

        // dQmean/d(action in [0,1]) summed over the ensemble, ordered reduction
        nn::Mat g01 = nn::Mat::Zero(B, act_dim_);
        for (int i = 0; i < cfg_.ensemble_size; ++i) {
            g01 += inv_x * in_grads[i].rightCols(act_dim_);
        }

        // route both the Q path and the log pi terms back to the actor head
        const nn::Mat sigma_z = head.log_std.array().exp() * z.array();
        const nn::Mat one_minus_a2 = 1.0 - s.action.array().square();
        const nn::Mat dlogpi_dpre = 2.0 * s.action.array();  // from -log(1 - a^2)
        const nn::Mat dq_dpre = g01.array() * 0.5 * one_minus_a2.array();

        const double inv_b = 1.0 / static_cast<double>(B);
        nn::Mat head_grad(B, 2 * act_dim_);
        head_grad.leftCols(act_dim_) =
            inv_b * (a * dlogpi_dpre.array() - dq_dpre.array());
        // log-std path: pre depends on log_std through sigma*z; the explicit
        // -log_std term in log pi adds -1; a clamped output blocks everything.
        const nn::Mat clamp_open = ((head.log_std_raw.array() > nn::kLogStdMin) &&
                                    (head.log_std_raw.array() < nn::kLogStdMax))
                                       .cast<double>();
        head_grad.rightCols(act_dim_) =
            inv_b * clamp_open.array() *
            (a * (dlogpi_dpre.array() * sigma_z.array() - 1.0) -
             dq_dpre.array() * sigma_z.array());

        nn::backward(actor_params, cache, head_grad, *grads);
        return loss;
    }

    // Mean-squared-error of one critic against fixed targets; used by the
    // finite-difference oracle.
    static double critic_loss(const nn::ParamSet& critic_params, const nn::Mat& sa_input,
                              const Eigen::VectorXd& y) {
        const nn::Mat q = nn::forward(critic_params, sa_input);
        return (q.col(0) - y).squaredNorm() / static_cast<double>(sa_input.rows());
    }

    // --- accessors --------------------------------------------------------

    double alpha() const { return std::exp(log_alpha_); }
    double log_alpha() const { return log_alpha_; }
    void set_log_alpha(double v) { log_alpha_ = v; }
    const AgentConfig& config() const { return cfg_; }
    int obs_dim() const { return obs_dim_; }
    int act_dim() const { return act_dim_; }
    long env_steps() const { return env_steps_; }
    long critic_update_rounds() const { return critic_update_rounds_; }
    long actor_updates() const { return actor_updates_; }
    long entropy_updates() const { return entropy_updates_; }
    long skipped_updates() const { return skipped_updates_; }

    // When enabled, every target computation also evaluates the full-ensemble
    // minimum and tallies any batch where the subset min undercuts it.
    void set_diagnostics(bool on) { diagnostics_ = on; }
    long subset_bound_violations() const { return subset_bound_violations_; }
    long subset_checked_batches() const { return subset_checked_batches_; }
    ReplayBuffer& buffer() { return buffer_; }
    Rng& rng() { return rng_; }

    nn::ParamSet& actor_params() { return actor_; }
    std::vector<nn::ParamSet>& critic_params() { return critics_; }
    std::vector<nn::ParamSet>& target_params() { return targets_; }
    const nn::ParamSet& actor_params() const { return actor_; }
    const std::vector<nn::ParamSet>& critic_params() const { return critics_; }
    const std::vector<nn::ParamSet>& target_params() const { return targets_; }

private:
    Eigen::VectorXd to_unit_box(const Eigen::VectorXd& a) const {
        return 0.5 * (a.array() + 1.0);
    }

    void fill_noise(int rows) {
        noise_.resize(rows, act_dim_);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < act_dim_; ++j) noise_(i, j) = standard_normal(rng_);
    }

    Eigen::VectorXd critic_min(const std::vector<nn::ParamSet>& nets,
                               const std::vector<int>& indices, const nn::Mat& input) {
        const int B = static_cast<int>(input.rows());
        nn::Mat qs(B, indices.size());
#pragma omp parallel for schedule(static)
        for (int j = 0; j < static_cast<int>(indices.size()); ++j) {
            qs.col(j) = nn::forward(nets[indices[j]], input).col(0);
        }
        return qs.rowwise().minCoeff();
    }

    AgentConfig cfg_;
    int obs_dim_;
    int act_dim_;
    ReplayBuffer buffer_;
    Rng rng_;

    nn::ParamSet actor_;
    nn::AdamState actor_opt_;
    std::vector<nn::ParamSet> critics_;
    std::vector<nn::AdamState> critic_opts_;
    std::vector<nn::ParamSet> targets_;

    double log_alpha_ = 0.0;
    double alpha_m_ = 0.0, alpha_v_ = 0.0;
    long alpha_t_ = 0;

    long env_steps_ = 0;
    long critic_update_rounds_ = 0;
    long actor_updates_ = 0;
    long entropy_updates_ = 0;
    long skipped_updates_ = 0;
    bool diagnostics_ = false;
    long subset_bound_violations_ = 0;
    long subset_checked_batches_ = 0;

    // reusable workspaces
    Batch batch_;
    nn::Mat noise_;
    nn::Mat sa_input_, next_input_;
    std::vector<nn::ForwardCache> critic_ws_;
    std::vector<nn::ParamSet> critic_grads_;
};

}  // namespace uavmec
