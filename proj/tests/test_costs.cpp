#include <gtest/gtest.h>

#include <cmath>

#include "uavmec/costs.hpp"
#include "uavmec/flight.hpp"
#include "uavmec/rng.hpp"

using namespace uavmec;

TEST(CompressionDensity, NoCompressionCostsNothing) {
    EXPECT_EQ(compression_density(1.0, 2.0), 0.0);
}

TEST(CompressionDensity, MatchesScalarOracle) {
    // e^4 - e^2, frozen from an independent evaluation
    EXPECT_NEAR(compression_density(0.5, 2.0), 47.209093934213584, 1e-11);
}

TEST(CompressionDensity, StrictlyDecreasingAndConvex) {
    double prev = compression_density(0.2, 2.0);
    double prev_slope = -1e300;
    for (double g = 0.25; g <= 1.0; g += 0.05) {
        const double j = compression_density(g, 2.0);
        EXPECT_LT(j, prev);
        const double slope = (j - prev) / 0.05;
        EXPECT_GT(slope, prev_slope);  // slopes increase: convex
        prev_slope = slope;
        prev = j;
    }
}

TEST(CompressionDensity, RejectsBadRatios) {
    EXPECT_THROW(compression_density(0.0, 2.0), std::domain_error);
    EXPECT_THROW(compression_density(-0.3, 2.0), std::domain_error);
    EXPECT_THROW(compression_density(1.01, 2.0), std::domain_error);
}

namespace {

TaskInstance task(double bits, double density = 800.0) {
    return {bits, density, 1.5};
}

}  // namespace

TEST(UserSideCosts, NoCompressionSkipsLocalWork) {
    ComputeParams c;
    RadioParams r;
    const auto costs = user_side_costs(task(2e6), 1.0, 1e7, c, r);
    EXPECT_EQ(costs.t_lr, 0.0);
    EXPECT_EQ(costs.e_lr, 0.0);
    EXPECT_DOUBLE_EQ(costs.t_off, 2e6 / 1e7);
}

TEST(UserSideCosts, ZeroDataCostsNothing) {
    ComputeParams c;
    RadioParams r;
    const auto costs = user_side_costs(task(0.0), 0.5, 1e7, c, r);
    EXPECT_EQ(costs.t_lr, 0.0);
    EXPECT_EQ(costs.e_lr, 0.0);
    EXPECT_EQ(costs.t_off, 0.0);
    EXPECT_EQ(costs.e_off, 0.0);
}

TEST(UserSideCosts, MatchesTermByTermOracle) {
    // D = 2 Mbit, gamma = 0.5, eps = 2, F_k = 1.5 GHz, tau = 1e-29 and the
    // uplink rate from the frozen link oracle.
    ComputeParams c;
    RadioParams r;
    const double rate_up = 21640411.366270896;
    const auto costs = user_side_costs(task(2e6), 0.5, rate_up, c, r);
    EXPECT_NEAR(costs.t_lr, 0.062945458578951452, 1e-12);
    EXPECT_NEAR(costs.e_lr, 0.0021244092270396109, 1e-15);
    EXPECT_NEAR(costs.t_off, 0.046209842459770271, 1e-12);
    EXPECT_NEAR(costs.e_off, 0.0046209842459770277, 1e-13);
}

TEST(UserSideCosts, RejectsDeadLink) {
    ComputeParams c;
    RadioParams r;
    EXPECT_THROW(user_side_costs(task(1e6), 0.5, 0.0, c, r), InfeasibleLinkError);
}

TEST(UavSideCosts, FullRelaySkipsOnBoardCompute) {
    ComputeParams c;
    RadioParams r;
    const auto costs = uav_side_costs(task(1e6), 0.6, 1.0, 0.0, 1e7, c, r);
    EXPECT_EQ(costs.t_uav_comp, 0.0);
    EXPECT_EQ(costs.e_uav_comp, 0.0);
    EXPECT_GT(costs.t_relay, 0.0);
    EXPECT_GT(costs.t_bs_comp, 0.0);
}

TEST(UavSideCosts, FullLocalSkipsRelay) {
    ComputeParams c;
    RadioParams r;
    const auto costs = uav_side_costs(task(1e6), 0.6, 0.0, 2e9, 1e7, c, r);
    EXPECT_EQ(costs.t_relay, 0.0);
    EXPECT_EQ(costs.e_relay, 0.0);
    EXPECT_EQ(costs.t_bs_comp, 0.0);
    EXPECT_GT(costs.t_uav_comp, 0.0);
}

TEST(UavSideCosts, MatchesTermByTermOracle) {
    // alpha = 0.4, gamma = 0.6, D = 1.5 Mbit, C = 800, f = 2 GHz, F_BS = 15 GHz
    ComputeParams c;
    RadioParams r;
    const double rate_down = 26282990.575883593;
    const auto costs = uav_side_costs(task(1.5e6, 800.0), 0.6, 0.4, 2e9, rate_down, c, r);
    EXPECT_NEAR(costs.t_relay, 0.013697071456180644, 1e-12);
    EXPECT_NEAR(costs.e_relay, 0.0068485357280903218, 1e-13);
    EXPECT_NEAR(costs.t_uav_comp, 0.36, 1e-12);
    EXPECT_NEAR(costs.e_uav_comp, 0.0288, 1e-13);
    EXPECT_NEAR(costs.t_bs_comp, 0.032, 1e-12);
}

TEST(UavSideCosts, ZeroWorkloadZeroAllocationIsFine) {
    ComputeParams c;
    RadioParams r;
    // alpha = 1 leaves no on-board workload, so zero allocation is legal
    const auto costs = uav_side_costs(task(1e6), 0.6, 1.0, 0.0, 1e7, c, r);
    EXPECT_EQ(costs.t_uav_comp, 0.0);
}

TEST(UavSideCosts, ZeroAllocationWithWorkloadIsInfeasible) {
    ComputeParams c;
    RadioParams r;
    EXPECT_THROW(uav_side_costs(task(1e6), 0.6, 0.5, 0.0, 1e7, c, r),
                 InfeasibleAllocationError);
}

TEST(SlotLatency, BranchesAndArithmetic) {
    EXPECT_DOUBLE_EQ(slot_latency(1.0, 2.0, 0.0, 4.0, 5.0), 1.0 + 2.0 + 9.0);
    EXPECT_DOUBLE_EQ(slot_latency(1.0, 2.0, 3.0, 0.0, 0.0), 1.0 + 2.0 + 3.0);
    EXPECT_DOUBLE_EQ(slot_latency(1.0, 2.0, 3.0, 4.0, 5.0), 12.0);
}

TEST(PropulsionPower, HoverIsProfilePlusInduced) {
    FlightParams f;
    EXPECT_NEAR(propulsion_power(0.0, 0.0, f),
                f.blade_profile_power_w + f.induced_power_w,
                1e-9 * (f.blade_profile_power_w + f.induced_power_w));
}

TEST(PropulsionPower, VerticalTermIsAdditive) {
    FlightParams f;
    const double base = propulsion_power(7.0, 0.0, f);
    EXPECT_DOUBLE_EQ(propulsion_power(7.0, 2.0, f), base + f.vertical_power_w_per_mps * 2.0);
}

TEST(PropulsionPower, MatchesScalarOracle) {
    FlightParams f;
    EXPECT_NEAR(propulsion_power(10.0, 0.0, f), 126.0336867737212, 1e-9);
}

TEST(PropulsionPower, RejectsNegativeSpeeds) {
    FlightParams f;
    EXPECT_THROW(propulsion_power(-1.0, 0.0, f), std::domain_error);
    EXPECT_THROW(propulsion_power(0.0, -1.0, f), std::domain_error);
}

TEST(CostBreakdown, AggregationIdentitiesOnRandomVectors) {
    Rng rng(99);
    for (int t = 0; t < 2000; ++t) {
        CostBreakdown b;
        b.users.resize(1 + (t % 6));
        for (UserCost& u : b.users) {
            u.t_lr = uniform01(rng);
            u.e_lr = uniform01(rng);
            u.t_off = uniform01(rng);
            u.e_off = uniform01(rng);
            u.t_relay = uniform01(rng);
            u.e_relay = uniform01(rng);
            u.t_uav_comp = uniform01(rng);
            u.e_uav_comp = uniform01(rng);
            u.t_bs_comp = uniform01(rng);
        }
        b.e_fly = uniform01(rng);
        finalize_breakdown(b);
        double uav = 0.0;
        for (const UserCost& u : b.users) {
            EXPECT_EQ(u.e_user, u.e_lr + u.e_off);
            EXPECT_EQ(u.t_total,
                      u.t_lr + u.t_off + std::max(u.t_uav_comp, u.t_relay + u.t_bs_comp));
            uav += u.e_relay + u.e_uav_comp;
        }
        EXPECT_EQ(b.e_uav_slot, uav + b.e_fly);
    }
}
