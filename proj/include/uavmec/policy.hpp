#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "uavmec/nn.hpp"
#include "uavmec/rng.hpp"

namespace uavmec {
namespace nn {

// Squashed-Gaussian policy head. The actor net emits [mean | log_std] per
// action dimension; samples are tanh(mean + std*z) in (-1, 1) with the exact
// change-of-variables term in the log-density.

constexpr double kLogStdMin = -20.0;
constexpr double kLogStdMax = 2.0;

constexpr double kHalfLog2Pi = 0.91893853320467274178;  // 0.5*log(2*pi)

inline double softplus(double x) {
    return x > 30.0 ? x : std::log1p(std::exp(x));
}

// log(1 - tanh(x)^2) evaluated without cancellation.
inline double log_one_minus_tanh_sq(double x) {
    return 2.0 * (std::numbers::ln2 - x - softplus(-2.0 * x));
}

struct ActorHead {
    Mat mean;          // batch x d
    Mat log_std_raw;   // batch x d, before clamping
    Mat log_std;       // clamped copy
};

inline ActorHead split_actor_output(const Mat& out) {
    const Eigen::Index d = out.cols() / 2;
    ActorHead h;
    h.mean = out.leftCols(d);
    h.log_std_raw = out.rightCols(d);
    h.log_std = h.log_std_raw.cwiseMax(kLogStdMin).cwiseMin(kLogStdMax);
    return h;
}

struct SquashedSample {
    Mat pre;      // mean + std .* z
    Mat action;   // tanh(pre), strictly inside (-1, 1)
    Vec log_prob; // per sample
};

// Reparameterized sample with externally supplied standard-normal noise so
// training steps and finite-difference probes can share the same draw.
inline SquashedSample squash(const Mat& mean, const Mat& log_std, const Mat& z) {
    SquashedSample s;
    s.pre = mean.array() + log_std.array().exp() * z.array();
    s.action = s.pre.array().tanh();
    s.log_prob = Vec::Zero(mean.rows());
    for (Eigen::Index i = 0; i < mean.rows(); ++i) {
        double lp = 0.0;
        for (Eigen::Index j = 0; j < mean.cols(); ++j) {
            lp += -0.5 * z(i, j) * z(i, j) - log_std(i, j) - kHalfLog2Pi -
                  log_one_minus_tanh_sq(s.pre(i, j));
        }
        s.log_prob[i] = lp;
    }
    return s;
}

struct PolicySample {
    Vec action;
    double log_prob = 0.0;
};

// Single-state stochastic draw.
inline PolicySample policy_sample(const Vec& mean, const Vec& log_std, Rng& rng) {
    Mat z(1, mean.size());
    for (Eigen::Index j = 0; j < mean.size(); ++j) z(0, j) = standard_normal(rng);
    Mat ls = log_std.transpose().cwiseMax(kLogStdMin).cwiseMin(kLogStdMax);
    SquashedSample s = squash(mean.transpose(), ls, z);
    return {s.action.row(0).transpose(), s.log_prob[0]};
}

// Deterministic mode: the squashed mean.
inline Vec policy_mean_action(const Vec& mean) { return mean.array().tanh(); }

}  // namespace nn
}  // namespace uavmec
