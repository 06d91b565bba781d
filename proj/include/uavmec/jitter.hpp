#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

#include "uavmec/params.hpp"
#include "uavmec/rng.hpp"
#include "uavmec/vec3.hpp"

namespace uavmec {

// One position-error draw: three independent N(0, sigma^2) components.
inline Vec3 sample_jitter(const JitterModel& model, Rng& rng) {
    if (model.sigma_m == 0.0) return {0.0, 0.0, 0.0};
    return {model.sigma_m * standard_normal(rng), model.sigma_m * standard_normal(rng),
            model.sigma_m * standard_normal(rng)};
}

namespace detail {

inline double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

// P{ ||m + n|| <= r } for n ~ N(0, s^2 I_3) and ||m|| = mu. Exact closed form
// of the 3-dof noncentral chi distribution in terms of the normal CDF:
//   F(r) = Phi((r-mu)/s) + Phi((r+mu)/s) - 1
//          - s/(mu*sqrt(2*pi)) * (exp(-(r-mu)^2/(2 s^2)) - exp(-(r+mu)^2/(2 s^2)))
// with the Maxwell limit at mu -> 0.
inline double radial_cdf_3d(double mu, double s, double r) {
    if (r <= 0.0) return 0.0;
    if (mu < 1e-9 * s) {
        const double q = r / s;
        return std::erf(q / std::numbers::sqrt2) -
               std::sqrt(2.0 / std::numbers::pi) * q * std::exp(-0.5 * q * q);
    }
    const double lo = (r - mu) / s;
    const double hi = (r + mu) / s;
    const double gauss_part = std_normal_cdf(lo) + std_normal_cdf(hi) - 1.0;
    const double exp_part = (s / (mu * std::sqrt(2.0 * std::numbers::pi))) *
                            (std::exp(-0.5 * lo * lo) - std::exp(-0.5 * hi * hi));
    const double f = gauss_part - exp_part;
    return std::min(1.0, std::max(0.0, f));
}

}  // namespace detail

// Probability that the realized inter-slot displacement exceeds `limit` when
// the planned displacement is `planned_disp` and both slot endpoints jitter
// independently, i.e. the displacement noise has per-axis variance 2*sigma^2.
// sigma = 0 degenerates to the exact indicator.
inline double speed_violation_probability(const Vec3& planned_disp, const JitterModel& model,
                                          double limit_m) {
    if (!(limit_m > 0.0)) throw std::domain_error("speed_violation_probability: limit must be > 0");
    const double mu = planned_disp.norm();
    if (!std::isfinite(mu) || !std::isfinite(model.sigma_m)) {
        throw std::domain_error("speed_violation_probability: non-finite input");
    }
    if (model.sigma_m == 0.0) return mu > limit_m ? 1.0 : 0.0;
    const double s = std::numbers::sqrt2 * model.sigma_m;
    return 1.0 - detail::radial_cdf_3d(mu, s, limit_m);
}

// Monte-Carlo estimate of the same probability; the validation ground truth.
inline double mc_violation_probability(const Vec3& planned_disp, const JitterModel& model,
                                       double limit_m, std::int64_t n_samples, Rng& rng) {
    if (n_samples < 1) throw std::domain_error("mc_violation_probability: need n_samples >= 1");
    if (model.sigma_m == 0.0) return planned_disp.norm() > limit_m ? 1.0 : 0.0;
    const double s = std::numbers::sqrt2 * model.sigma_m;
    std::int64_t violations = 0;
    for (std::int64_t i = 0; i < n_samples; ++i) {
        const Vec3 d{planned_disp.x + s * standard_normal(rng),
                     planned_disp.y + s * standard_normal(rng),
                     planned_disp.z + s * standard_normal(rng)};
        if (d.norm() > limit_m) ++violations;
    }
    return static_cast<double>(violations) / static_cast<double>(n_samples);
}

// Chance constraint holds iff the violation probability stays within budget
// (boundary inclusive).
inline bool chance_satisfied(double prob_violation, const ChanceSpec& spec) {
    return prob_violation <= spec.rho_trj;
}

}  // namespace uavmec
