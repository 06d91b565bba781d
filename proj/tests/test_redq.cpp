#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "uavmec/redq.hpp"
#include "uavmec/validate.hpp"

using namespace uavmec;
using nn::Mat;
using nn::Vec;

namespace {

AgentConfig tiny_cfg() {
    AgentConfig cfg;
    cfg.hidden = {16, 16};
    cfg.ensemble_size = 2;
    cfg.subset_size = 2;
    cfg.batch_size = 16;
    cfg.replay_capacity = 500;
    cfg.warmup_steps = 10;
    return cfg;
}

// zero weights everywhere, then a chosen output bias
void make_constant_net(nn::ParamSet& p, double out_bias) {
    p.set_zero();
    p.b.back().setConstant(out_bias);
}

Batch random_batch(int b, int obs_dim, int act_dim, Rng& rng) {
    Batch batch;
    batch.obs.resize(b, obs_dim);
    batch.act.resize(b, act_dim);
    batch.next_obs.resize(b, obs_dim);
    batch.rew.resize(b);
    batch.done = Vec::Zero(b);
    for (int i = 0; i < b; ++i) {
        for (int j = 0; j < obs_dim; ++j) {
            batch.obs(i, j) = uniform01(rng);
            batch.next_obs(i, j) = uniform01(rng);
        }
        for (int j = 0; j < act_dim; ++j) batch.act(i, j) = uniform01(rng);
        batch.rew[i] = uniform_in(rng, -2.0, 0.0);
    }
    return batch;
}

}  // namespace

TEST(Act, WarmupDrawsAreUniform) {
    RedqAgent agent(tiny_cfg(), 6, 9, 123);
    std::vector<double> samples;
    const Eigen::VectorXd obs = Eigen::VectorXd::Constant(6, 0.5);
    while (samples.size() < 10000) {
        const Eigen::VectorXd a = agent.act(obs, RedqAgent::Mode::Explore);
        for (int i = 0; i < a.size(); ++i) samples.push_back(a[i]);
    }
    std::sort(samples.begin(), samples.end());
    double ks = 0.0;
    const double n = static_cast<double>(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double emp_hi = (i + 1) / n;
        const double emp_lo = i / n;
        ks = std::max({ks, std::abs(emp_hi - samples[i]), std::abs(samples[i] - emp_lo)});
    }
    EXPECT_LE(ks, 1.36 / std::sqrt(n));  // 5% KS band
    EXPECT_GE(*std::min_element(samples.begin(), samples.end()), 0.0);
    EXPECT_LE(*std::max_element(samples.begin(), samples.end()), 1.0);
}

TEST(Act, ExploitIsDeterministicAndCorrectlySized) {
    AgentConfig cfg = tiny_cfg();
    const int K = 5;
    RedqAgent agent(cfg, 2 * K + 4, 3 * K + 3, 7);
    const Eigen::VectorXd obs = Eigen::VectorXd::Constant(2 * K + 4, 0.3);
    const Eigen::VectorXd a1 = agent.act(obs, RedqAgent::Mode::Exploit);
    const Eigen::VectorXd a2 = agent.act(obs, RedqAgent::Mode::Exploit);
    EXPECT_EQ(a1.size(), 3 * K + 3);
    EXPECT_EQ((a1 - a2).norm(), 0.0);
    for (int i = 0; i < a1.size(); ++i) {
        EXPECT_GE(a1[i], 0.0);
        EXPECT_LE(a1[i], 1.0);
    }
}

TEST(ComputeTarget, HandTracedScalarCritics) {
    AgentConfig cfg = tiny_cfg();
    cfg.discount = 0.9;
    RedqAgent agent(cfg, 4, 3, 99);
    make_constant_net(agent.target_params()[0], 1.7);
    make_constant_net(agent.target_params()[1], 0.9);
    agent.set_log_alpha(-1e6);  // alpha == 0 exactly

    Rng rng(1);
    Batch batch = random_batch(8, 4, 3, rng);
    const auto ti = agent.compute_target(batch, {0, 1});
    for (int i = 0; i < 8; ++i) {
        EXPECT_DOUBLE_EQ(ti.min_subset[i], 0.9);
        // fused multiply-add contraction leaves a one-ulp-scale difference
        EXPECT_NEAR(ti.y[i], batch.rew[i] + 0.9 * 0.9, 1e-12);
    }
}

TEST(ComputeTarget, DiscountZeroMakesTargetsEqualRewardsExactly) {
    AgentConfig cfg = tiny_cfg();
    cfg.discount = 0.0;
    RedqAgent agent(cfg, 4, 3, 5);
    Rng rng(2);
    const Batch batch = random_batch(16, 4, 3, rng);
    const auto ti = agent.compute_target(batch, agent.sample_subset());
    for (int i = 0; i < 16; ++i) EXPECT_EQ(ti.y[i], batch.rew[i]);
}

TEST(ComputeTarget, DoneZeroesTheBootstrapTerm) {
    AgentConfig cfg = tiny_cfg();
    cfg.discount = 0.9;
    RedqAgent agent(cfg, 4, 3, 15);
    make_constant_net(agent.target_params()[0], 2.0);
    make_constant_net(agent.target_params()[1], 2.0);
    agent.set_log_alpha(-1e6);
    Rng rng(3);
    Batch batch = random_batch(4, 4, 3, rng);
    batch.done.setOnes();
    const auto ti = agent.compute_target(batch, {0, 1});
    for (int i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(ti.y[i], batch.rew[i]);
}

TEST(ComputeTarget, SingleElementSubsetUsesThatCritic) {
    AgentConfig cfg = tiny_cfg();
    cfg.subset_size = 1;
    RedqAgent agent(cfg, 4, 3, 25);
    make_constant_net(agent.target_params()[0], -3.0);
    make_constant_net(agent.target_params()[1], 5.0);
    agent.set_log_alpha(-1e6);
    Rng rng(4);
    const Batch batch = random_batch(4, 4, 3, rng);
    const auto hi = agent.compute_target(batch, {1});
    EXPECT_DOUBLE_EQ(hi.min_subset[0], 5.0);
    const auto lo = agent.compute_target(batch, {0});
    EXPECT_DOUBLE_EQ(lo.min_subset[0], -3.0);
}

TEST(ComputeTarget, EmptySubsetIsRejected) {
    RedqAgent agent(tiny_cfg(), 4, 3, 35);
    Rng rng(5);
    const Batch batch = random_batch(4, 4, 3, rng);
    EXPECT_THROW(agent.compute_target(batch, {}), std::domain_error);
}

TEST(UpdateCritics, ZeroErrorBatchLeavesParametersUnchanged) {
    RedqAgent agent(tiny_cfg(), 4, 3, 45);
    for (auto& c : agent.critic_params()) make_constant_net(c, 1.25);
    for (auto& t : agent.target_params()) make_constant_net(t, 1.25);
    Rng rng(6);
    const Batch batch = random_batch(16, 4, 3, rng);
    const Vec y = Vec::Constant(16, 1.25);
    agent.update_critics(batch, y);
    for (auto& c : agent.critic_params()) {
        EXPECT_EQ(c.w[0].norm(), 0.0);
        EXPECT_EQ(c.b.back()[0], 1.25);
    }
}

TEST(UpdateCritics, RepeatedUpdatesOnFixedBatchConverge) {
    AgentConfig cfg = tiny_cfg();
    cfg.lr_critic = 3e-3;
    RedqAgent agent(cfg, 4, 3, 55);
    Rng rng(7);
    const Batch batch = random_batch(16, 4, 3, rng);
    Vec y(16);
    for (int i = 0; i < 16; ++i) y[i] = uniform_in(rng, -1.0, 1.0);
    double loss = 0.0;
    for (int it = 0; it < 1500; ++it) loss = agent.update_critics(batch, y);
    EXPECT_LT(loss, 1e-3);
}

TEST(UpdateActor, ConstantCriticAndZeroAlphaGiveZeroGradient) {
    AgentConfig cfg = tiny_cfg();
    cfg.ensemble_size = 1;
    cfg.subset_size = 1;
    RedqAgent agent(cfg, 4, 3, 65);
    make_constant_net(agent.critic_params()[0], 0.7);
    agent.set_log_alpha(-1e6);
    Rng rng(8);
    const Batch batch = random_batch(8, 4, 3, rng);
    Mat z(8, 3);
    for (int i = 0; i < z.size(); ++i) z.data()[i] = standard_normal(rng);
    nn::ParamSet grads;
    agent.actor_loss_and_grads(agent.actor_params(), batch.obs, z, &grads);
    for (std::size_t l = 0; l < grads.w.size(); ++l) {
        EXPECT_EQ(grads.w[l].norm(), 0.0);
        EXPECT_EQ(grads.b[l].norm(), 0.0);
    }
}

TEST(UpdateActor, SingleCriticObjectiveMatchesManualComputation) {
    AgentConfig cfg = tiny_cfg();
    cfg.ensemble_size = 1;
    cfg.subset_size = 1;
    RedqAgent agent(cfg, 4, 3, 75);
    agent.set_log_alpha(std::log(0.37));
    Rng rng(9);
    const Batch batch = random_batch(8, 4, 3, rng);
    Mat z(8, 3);
    for (int i = 0; i < z.size(); ++i) z.data()[i] = standard_normal(rng);

    const double loss = agent.actor_loss_and_grads(agent.actor_params(), batch.obs, z, nullptr);

    const Mat actor_out = nn::forward(agent.actor_params(), batch.obs);
    const auto head = nn::split_actor_output(actor_out);
    const auto s = nn::squash(head.mean, head.log_std, z);
    Mat input(8, 7);
    input.leftCols(4) = batch.obs;
    input.rightCols(3) = (0.5 * (s.action.array() + 1.0)).matrix();
    const Mat q = nn::forward(agent.critic_params()[0], input);
    const double manual = (0.37 * s.log_prob.sum() - q.col(0).sum()) / 8.0;
    EXPECT_NEAR(loss, manual, 1e-12);
}

TEST(EntropyWeight, StationaryAtTargetEntropy) {
    AgentConfig cfg = tiny_cfg();
    cfg.entropy_target = -3.0;
    RedqAgent agent(cfg, 4, 3, 85);
    const double before = agent.alpha();
    agent.entropy_step(-3.0);  // empirical entropy exactly at target
    EXPECT_EQ(agent.alpha(), before);
}

TEST(EntropyWeight, LowEntropyRaisesAlphaHighEntropyLowersIt) {
    AgentConfig cfg = tiny_cfg();
    cfg.entropy_target = -3.0;
    {
        RedqAgent agent(cfg, 4, 3, 95);
        const double before = agent.alpha();
        agent.entropy_step(-5.0);  // entropy below target
        EXPECT_GT(agent.alpha(), before);
    }
    {
        RedqAgent agent(cfg, 4, 3, 95);
        const double before = agent.alpha();
        agent.entropy_step(2.0);  // entropy above target
        EXPECT_LT(agent.alpha(), before);
    }
}

TEST(EntropyWeight, SingleStepMatchesHandTrace) {
    AgentConfig cfg = tiny_cfg();
    cfg.entropy_target = -3.0;
    cfg.init_entropy_weight = 0.5;
    RedqAgent agent(cfg, 4, 3, 105);
    const double log_a0 = agent.log_alpha();
    const double grad = 0.5 * ((-5.0) - (-3.0));  // alpha * (H_emp - H_target)
    const double mh = (0.1 * grad) / 0.1;
    const double vh = (0.001 * grad * grad) / 0.001;
    const double expect = log_a0 - cfg.lr_actor * mh / (std::sqrt(vh) + 1e-8);
    agent.entropy_step(-5.0);
    EXPECT_NEAR(agent.log_alpha(), expect, 1e-15);
    EXPECT_GT(agent.alpha(), 0.0);
}

TEST(EntropyWeight, StaysPositiveUnderManyUpdates) {
    AgentConfig cfg = tiny_cfg();
    cfg.entropy_target = -3.0;
    RedqAgent agent(cfg, 4, 3, 115);
    Rng rng(10);
    for (int i = 0; i < 3000; ++i) {
        agent.entropy_step(uniform_in(rng, -30.0, 30.0));
        ASSERT_GT(agent.alpha(), 0.0);
    }
}

TEST(Replay, RingDropsOldestEntries) {
    ReplayBuffer buf(3, 2, 1);
    const Eigen::VectorXd o = Eigen::VectorXd::Zero(2);
    const Eigen::VectorXd a = Eigen::VectorXd::Zero(1);
    for (int i = 0; i < 5; ++i) buf.add(o, a, static_cast<double>(i), o, false);
    EXPECT_EQ(buf.size(), 3);
    Rng rng(11);
    Batch batch;
    buf.sample(256, rng, batch);
    for (int i = 0; i < 256; ++i) {
        EXPECT_GE(batch.rew[i], 2.0);  // rewards 0 and 1 were overwritten
        EXPECT_LE(batch.rew[i], 4.0);
    }
}

TEST(Replay, SamplingIsUniformWithinBinomialBounds) {
    const int items = 50;
    ReplayBuffer buf(items, 1, 1);
    Eigen::VectorXd o(1), a(1);
    a.setZero();
    for (int i = 0; i < items; ++i) {
        o[0] = i;
        buf.add(o, a, static_cast<double>(i), o, false);
    }
    Rng rng(2027);
    Batch batch;
    const int draws = 20000;
    buf.sample(draws, rng, batch);
    std::vector<int> counts(items, 0);
    for (int i = 0; i < draws; ++i) ++counts[static_cast<int>(batch.rew[i])];
    const double p = 1.0 / items;
    const double sd = std::sqrt(draws * p * (1.0 - p));
    for (int i = 0; i < items; ++i) {
        EXPECT_NEAR(counts[i], draws * p, 3.0 * sd) << "item " << i;
    }
}

TEST(Mechanics, AccountingSubsetBoundAndDegenerateSac) {
    // small-scale run of the full bookkeeping check
    const RedqMechanicsReport rep = check_redq_mechanics(40, 3, 424242);
    EXPECT_TRUE(rep.gamma_zero.pass) << rep.gamma_zero.detail;
    EXPECT_TRUE(rep.accounting.pass) << rep.accounting.detail;
    EXPECT_TRUE(rep.subset_bound.pass) << rep.subset_bound.detail;
}

TEST(Mechanics, TwinCriticUtdOneDegeneratesToSacCounts) {
    WorldConfig world;
    world.user_count = 2;
    world.region.n_slots = 10;
    AgentConfig cfg;
    cfg.hidden = {16, 16};
    cfg.ensemble_size = 2;
    cfg.subset_size = 2;
    cfg.utd_ratio = 1;
    cfg.batch_size = 32;
    cfg.warmup_steps = 50;
    cfg.replay_capacity = 1000;
    Environment env(world, 31337);
    RedqAgent agent(cfg, world.observation_dim(), world.action_dim(), 31337);
    train_agent(env, agent, SchemeToggles{}, 150);
    // one critic round and one actor update per step: the twin-critic loop
    EXPECT_EQ(agent.critic_update_rounds(), 100);
    EXPECT_EQ(agent.actor_updates(), 100);
    EXPECT_EQ(agent.entropy_updates(), 100);
}
