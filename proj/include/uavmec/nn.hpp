#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "uavmec/rng.hpp"

namespace uavmec {
namespace nn {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Fully connected net: rectifier on hidden layers, linear output.
struct MlpSpec {
    int input_dim = 1;
    std::vector<int> hidden;
    int output_dim = 1;

    std::vector<std::pair<int, int>> layer_shapes() const {
        std::vector<std::pair<int, int>> shapes;
        int in = input_dim;
        for (int h : hidden) {
            shapes.emplace_back(in, h);
            in = h;
        }
        shapes.emplace_back(in, output_dim);
        return shapes;
    }
};

// Weight matrices are stored input x output so a batched forward is X * W.
struct ParamSet {
    std::vector<Mat> w;
    std::vector<Vec> b;

    std::size_t layer_count() const { return w.size(); }

    bool same_shape(const ParamSet& o) const {
        if (w.size() != o.w.size()) return false;
        for (std::size_t l = 0; l < w.size(); ++l) {
            if (w[l].rows() != o.w[l].rows() || w[l].cols() != o.w[l].cols() ||
                b[l].size() != o.b[l].size())
                return false;
        }
        return true;
    }

    bool all_finite() const {
        for (std::size_t l = 0; l < w.size(); ++l) {
            if (!w[l].allFinite() || !b[l].allFinite()) return false;
        }
        return true;
    }

    void set_zero() {
        for (auto& m : w) m.setZero();
        for (auto& v : b) v.setZero();
    }
};

inline ParamSet zeros_like(const ParamSet& p) {
    ParamSet z;
    for (std::size_t l = 0; l < p.w.size(); ++l) {
        z.w.push_back(Mat::Zero(p.w[l].rows(), p.w[l].cols()));
        z.b.push_back(Vec::Zero(p.b[l].size()));
    }
    return z;
}

// Uniform(-sqrt(1/fan_in), sqrt(1/fan_in)) for weights and biases.
inline ParamSet init_params(const MlpSpec& spec, Rng& rng) {
    ParamSet p;
    for (auto [in, out] : spec.layer_shapes()) {
        const double bound = std::sqrt(1.0 / static_cast<double>(in));
        Mat w(in, out);
        for (Eigen::Index j = 0; j < w.cols(); ++j)
            for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, j) = uniform_in(rng, -bound, bound);
        Vec b(out);
        for (Eigen::Index i = 0; i < b.size(); ++i) b[i] = uniform_in(rng, -bound, bound);
        p.w.push_back(std::move(w));
        p.b.push_back(std::move(b));
    }
    return p;
}

// Activations captured during forward, sized once and reused across calls.
struct ForwardCache {
    std::vector<Mat> inputs;  // inputs[l]: batch x in_l, the input fed to layer l
    std::vector<Mat> pre;     // pre[l]: batch x out_l, pre-activation of layer l
};

// Batched forward pass; rows are samples. Returns the linear output of the
// last layer. When `cache` is given it records what backward needs.
inline Mat forward(const ParamSet& p, const Mat& x, ForwardCache* cache = nullptr) {
    if (x.cols() != p.w.front().rows()) throw std::domain_error("forward: input width mismatch");
    const std::size_t layers = p.layer_count();
    if (cache) {
        cache->inputs.resize(layers);
        cache->pre.resize(layers);
    }
    Mat act = x;
    for (std::size_t l = 0; l < layers; ++l) {
        if (cache) cache->inputs[l] = act;
        Mat z = act * p.w[l];
        z.rowwise() += p.b[l].transpose();
        if (cache) cache->pre[l] = z;
        if (l + 1 < layers) {
            act = z.cwiseMax(0.0);
        } else {
            act = std::move(z);
        }
    }
    return act;
}

// Reverse pass for the scalar loss whose dL/doutput is `out_grad`.
// Writes exact gradients into `grads` (shaped like `p`); optionally also the
// gradient with respect to the network input.
inline void backward(const ParamSet& p, const ForwardCache& cache, const Mat& out_grad,
                     ParamSet& grads, Mat* input_grad = nullptr) {
    const std::size_t layers = p.layer_count();
    if (cache.inputs.size() != layers || cache.pre.size() != layers) {
        throw std::domain_error("backward: cache does not match network depth");
    }
    if (out_grad.rows() != cache.inputs[0].rows() || out_grad.cols() != p.w.back().cols()) {
        throw std::domain_error("backward: gradient shape does not match cached forward");
    }
    grads.w.resize(layers);
    grads.b.resize(layers);

    Mat delta = out_grad;
    for (std::size_t li = layers; li-- > 0;) {
        grads.w[li].noalias() = cache.inputs[li].transpose() * delta;
        grads.b[li] = delta.colwise().sum().transpose();
        if (li > 0) {
            Mat back = delta * p.w[li].transpose();
            // rectifier gate of the previous layer
            delta = (cache.pre[li - 1].array() > 0.0).select(back, 0.0);
        } else if (input_grad) {
            input_grad->noalias() = delta * p.w[0].transpose();
        }
    }
}

inline ParamSet backward(const ParamSet& p, const ForwardCache& cache, const Mat& out_grad,
                         Mat* input_grad = nullptr) {
    ParamSet grads;
    backward(p, cache, out_grad, grads, input_grad);
    return grads;
}

// Gradient with respect to the input only; weight gradients are skipped.
inline void input_gradient(const ParamSet& p, const ForwardCache& cache, const Mat& out_grad,
                           Mat& input_grad) {
    const std::size_t layers = p.layer_count();
    Mat delta = out_grad;
    for (std::size_t li = layers; li-- > 0;) {
        Mat back = delta * p.w[li].transpose();
        if (li > 0) {
            delta = (cache.pre[li - 1].array() > 0.0).select(back, 0.0);
        } else {
            input_grad = std::move(back);
        }
    }
}

// Bias-corrected Adam.
struct AdamState {
    ParamSet m;
    ParamSet v;
    long step = 0;
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    long skipped = 0;  // updates dropped because of non-finite gradients
};

inline AdamState make_adam(const ParamSet& params, double lr) {
    AdamState s;
    s.m = zeros_like(params);
    s.v = zeros_like(params);
    s.lr = lr;
    return s;
}

// One optimizer step. A non-finite gradient skips the update and flags it.
inline bool adam_step(AdamState& s, ParamSet& params, const ParamSet& grads) {
    if (!params.same_shape(grads)) throw std::domain_error("adam_step: shape mismatch");
    if (!grads.all_finite()) {
        ++s.skipped;
        return false;
    }
    ++s.step;
    const double bc1 = 1.0 - std::pow(s.beta1, static_cast<double>(s.step));
    const double bc2 = 1.0 - std::pow(s.beta2, static_cast<double>(s.step));
    for (std::size_t l = 0; l < params.w.size(); ++l) {
        s.m.w[l] = s.beta1 * s.m.w[l] + (1.0 - s.beta1) * grads.w[l];
        s.v.w[l] = s.beta2 * s.v.w[l].array() + (1.0 - s.beta2) * grads.w[l].array().square();
        params.w[l].array() -=
            s.lr * (s.m.w[l].array() / bc1) / ((s.v.w[l].array() / bc2).sqrt() + s.eps);
        s.m.b[l] = s.beta1 * s.m.b[l] + (1.0 - s.beta1) * grads.b[l];
        s.v.b[l] = s.beta2 * s.v.b[l].array() + (1.0 - s.beta2) * grads.b[l].array().square();
        params.b[l].array() -=
            s.lr * (s.m.b[l].array() / bc1) / ((s.v.b[l].array() / bc2).sqrt() + s.eps);
    }
    return true;
}

// Exponential target tracking: target <- tau * target + (1 - tau) * online.
// tau weights the old target, so tau close to 1 means slow tracking.
inline void soft_update(ParamSet& target, const ParamSet& online, double tau) {
    if (!target.same_shape(online)) throw std::domain_error("soft_update: shape mismatch");
    if (!(tau >= 0.0 && tau <= 1.0)) throw std::domain_error("soft_update: tau must lie in [0, 1]");
    for (std::size_t l = 0; l < target.w.size(); ++l) {
        target.w[l] = tau * target.w[l] + (1.0 - tau) * online.w[l];
        target.b[l] = tau * target.b[l] + (1.0 - tau) * online.b[l];
    }
}

}  // namespace nn
}  // namespace uavmec
