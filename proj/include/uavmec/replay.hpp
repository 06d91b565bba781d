#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "uavmec/rng.hpp"

namespace uavmec {

// Mini-batch views used by the learner, rows are samples.
struct Batch {
    Eigen::MatrixXd obs;
    Eigen::MatrixXd act;
    Eigen::VectorXd rew;
    Eigen::MatrixXd next_obs;
    Eigen::VectorXd done;
};

// Fixed-capacity ring of transitions with uniform sampling.
class ReplayBuffer {
public:
    ReplayBuffer(int capacity, int obs_dim, int act_dim)
        : capacity_(capacity), obs_(capacity, obs_dim), act_(capacity, act_dim),
          next_obs_(capacity, obs_dim), rew_(capacity), done_(capacity) {
        if (capacity < 1) throw std::domain_error("replay: capacity must be >= 1");
    }

    void add(const Eigen::VectorXd& obs, const Eigen::VectorXd& act, double reward,
             const Eigen::VectorXd& next_obs, bool done) {
        obs_.row(head_) = obs.transpose();
        act_.row(head_) = act.transpose();
        next_obs_.row(head_) = next_obs.transpose();
        rew_[head_] = reward;
        done_[head_] = done ? 1.0 : 0.0;
        head_ = (head_ + 1) % capacity_;
        if (size_ < capacity_) ++size_;
    }

    int size() const { return size_; }
    int capacity() const { return capacity_; }

    // Uniform over stored items, with replacement. Reuses the batch storage.
    void sample(int batch_size, Rng& rng, Batch& out) const {
        if (size_ == 0) throw std::domain_error("replay: cannot sample from an empty buffer");
        out.obs.resize(batch_size, obs_.cols());
        out.act.resize(batch_size, act_.cols());
        out.next_obs.resize(batch_size, next_obs_.cols());
        out.rew.resize(batch_size);
        out.done.resize(batch_size);
        std::uniform_int_distribution<int> pick(0, size_ - 1);
        for (int i = 0; i < batch_size; ++i) {
            const int idx = pick(rng);
            out.obs.row(i) = obs_.row(idx);
            out.act.row(i) = act_.row(idx);
            out.next_obs.row(i) = next_obs_.row(idx);
            out.rew[i] = rew_[idx];
            out.done[i] = done_[idx];
        }
    }

private:
    int capacity_;
    int size_ = 0;
    int head_ = 0;
    Eigen::MatrixXd obs_, act_, next_obs_;
    Eigen::VectorXd rew_, done_;
};

}  // namespace uavmec
