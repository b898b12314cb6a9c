#include <gtest/gtest.h>

#include <vector>

#include "memfreq/offload.hpp"
#include "test_support.hpp"

namespace memfreq {
namespace {

using testing::tx1_domain;
using testing::tx1_power;
using testing::vgg19_tx1;

// 0.57 MB image over a 20 Mbit/s uplink at 0.2 W, 10 ms edge inference.
Scenario coop(double deadline) { return {deadline, 20.0, 0.2, 0.57 * kMbitPerMegabyte, 0.01}; }

DeviceProfile tx1_profile() {
    DeviceProfile d;
    d.name = "tx1";
    d.power = tx1_power();
    d.domain = tx1_domain();
    d.models.emplace("vgg19", vgg19_tx1());
    d.models.emplace("densenet121", LatencyModel(0.010, 1.664, 0.172, 0.082));
    return d;
}

TEST(OffloadCost, CooperativeImage) {
    const auto c = offload_cost(coop(0.24));
    EXPECT_NEAR(c.latency, 0.228 + 0.01, 1e-15);
    EXPECT_NEAR(c.energy, 0.0456, 1e-15);
}

TEST(OffloadCost, UnitRatioAndFastLink) {
    const auto unit = offload_cost({1.0, 1.0, 1.0, 1.0, 0.5});
    EXPECT_DOUBLE_EQ(unit.latency, 1.5);
    EXPECT_DOUBLE_EQ(unit.energy, 1.0);
    auto fast = coop(0.24);
    fast.rate = 1e9;
    EXPECT_NEAR(offload_cost(fast).latency, 0.01, 1e-8);
    EXPECT_NEAR(offload_cost(fast).energy, 0.0, 1e-9);
}

TEST(OffloadCost, RejectsInvalidScenario) {
    auto s = coop(0.24);
    s.rate = 0.0;
    EXPECT_THROW(offload_cost(s), ValidationError);
    s = coop(-1.0);
    try {
        offload_cost(s);
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_EQ(e.field(), "deadline");
    }
}

TEST(PlanDevice, OffloadsWhenLinkMeetsDeadline) {
    const auto d = plan_device(vgg19_tx1(), tx1_power(), tx1_domain(), coop(0.24));
    EXPECT_EQ(d.x, 1);
    EXPECT_TRUE(d.feasible);
    EXPECT_NEAR(d.total_energy, 0.0456, 1e-15);
    EXPECT_LT(d.total_energy, d.local.energy);
}

TEST(PlanDevice, RunsLocallyWhenLinkTooSlow) {
    const auto d = plan_device(vgg19_tx1(), tx1_power(), tx1_domain(), coop(0.2));
    EXPECT_EQ(d.x, 0);
    EXPECT_TRUE(d.feasible);
    EXPECT_EQ(d.chosen_f, d.local.f);
    EXPECT_EQ(d.total_energy, d.local.energy);
    EXPECT_LE(d.total_latency, 0.2 * (1 + 1e-9));
}

TEST(PlanDevice, NeitherOptionFeasible) {
    const auto d = plan_device(vgg19_tx1(), tx1_power(), tx1_domain(), coop(0.01));
    EXPECT_FALSE(d.feasible);
    EXPECT_FALSE(d.local.feasible);
    // Local best case is ~0.159 s, the link takes 0.238 s.
    EXPECT_EQ(d.x, 0);
    EXPECT_NEAR(d.local.min_achievable_latency, 0.158920697367768706, 1e-12);
}

TEST(SweepDeadline, RegimeFlipAndEnergyOrdering) {
    const auto t = sweep_deadline(vgg19_tx1(), tx1_power(), tx1_domain(), coop(1.0), {0.16, 0.2, 0.24});
    ASSERT_EQ(t.size(), 3u);
    EXPECT_EQ(t[0].x, 0);
    EXPECT_EQ(t[1].x, 0);
    EXPECT_EQ(t[2].x, 1);
    for (const auto& d : t) EXPECT_TRUE(d.feasible);
    EXPECT_GE(t[0].total_energy, t[1].total_energy);
    EXPECT_GE(t[1].total_energy, t[2].total_energy);
}

TEST(SweepDeadline, SingleDeadlineMatchesPlan) {
    const auto t = sweep_deadline(vgg19_tx1(), tx1_power(), tx1_domain(), coop(9.0), {0.2});
    const auto p = plan_device(vgg19_tx1(), tx1_power(), tx1_domain(), coop(0.2));
    ASSERT_EQ(t.size(), 1u);
    EXPECT_EQ(t[0].x, p.x);
    EXPECT_EQ(t[0].total_energy, p.total_energy);
    EXPECT_EQ(t[0].chosen_f, p.chosen_f);
}

TEST(SweepDeadline, RejectsUnsortedOrNonPositive) {
    EXPECT_THROW(sweep_deadline(vgg19_tx1(), tx1_power(), tx1_domain(), coop(1.0), {0.2, 0.1}), ValidationError);
    EXPECT_THROW(sweep_deadline(vgg19_tx1(), tx1_power(), tx1_domain(), coop(1.0), {0.0, 0.1}), ValidationError);
}

TEST(SweepDeadline, FeasibleEnergyNeverRises) {
    testing::InstanceGenerator gen(61);
    for (int i = 0; i < 100; ++i) {
        const auto in = gen.continuous();
        Scenario s{1.0, gen.uniform(1.0, 100.0), gen.uniform(0.05, 1.0), gen.uniform(0.5, 20.0), gen.uniform(0.001, 0.05)};
        std::vector<double> ds;
        for (int k = 1; k <= 8; ++k) ds.push_back(gen.deadline_for(in.lat, in.dom, 0.1 * k));
        const auto t = sweep_deadline(in.lat, in.pow, in.dom, s, ds);
        double prev = INFINITY;
        for (const auto& d : t) {
            if (!d.feasible) continue;
            EXPECT_LE(d.total_energy, prev * (1 + 1e-9));
            prev = d.total_energy;
        }
    }
}

TEST(PlanDevice, FasterLinkNeverCostsMore) {
    testing::InstanceGenerator gen(73);
    for (int i = 0; i < 100; ++i) {
        const auto in = gen.continuous();
        Scenario s{in.deadline, gen.uniform(1.0, 50.0), gen.uniform(0.05, 1.0), gen.uniform(0.5, 20.0), 0.005};
        const auto slow = plan_device(in.lat, in.pow, in.dom, s);
        s.rate *= gen.uniform(1.0, 4.0);
        const auto fast = plan_device(in.lat, in.pow, in.dom, s);
        if (slow.feasible) {
            ASSERT_TRUE(fast.feasible);
            EXPECT_LE(fast.total_energy, slow.total_energy);
        }
    }
}

TEST(PlanDevice, OffloadIgnoresLocalDomain) {
    const auto a = plan_device(vgg19_tx1(), tx1_power(), tx1_domain(), coop(0.24));
    const FrequencyDomain narrow(FrequencyRange{0.8, 1.6}, FrequencyRange{0.5, 0.9984});
    const auto b = plan_device(vgg19_tx1(), tx1_power(), narrow, coop(0.24));
    ASSERT_EQ(a.x, 1);
    ASSERT_EQ(b.x, 1);
    EXPECT_EQ(a.total_energy, b.total_energy);
    EXPECT_EQ(a.total_latency, b.total_latency);
}

TEST(SimulateFleet, SingletonMatchesPlan) {
    const Fleet fleet{{tx1_profile(), "vgg19", coop(0.2)}};
    const auto r = simulate_fleet(fleet);
    const auto p = plan_device(vgg19_tx1(), tx1_power(), tx1_domain(), coop(0.2));
    ASSERT_EQ(r.decisions.size(), 1u);
    EXPECT_EQ(r.total_energy, p.total_energy);
    EXPECT_EQ(r.feasible_count, 1u);
}

TEST(SimulateFleet, IdenticalDevicesScaleLinearly) {
    const auto one = simulate_fleet({{tx1_profile(), "densenet121", coop(0.2)}});
    for (std::size_t k : {2u, 5u, 16u}) {
        const Fleet fleet(k, {tx1_profile(), "densenet121", coop(0.2)});
        const auto r = simulate_fleet(fleet);
        EXPECT_NEAR(r.total_energy, static_cast<double>(k) * one.total_energy, 1e-12 * k);
        EXPECT_EQ(r.feasible_count, k);
    }
}

TEST(SimulateFleet, MixedFleetSumsIndependentPlans) {
    auto orin = DeviceProfile{};
    orin.name = "orin";
    orin.power = PowerModel(0.04, 6.0, 3.0);
    orin.domain = testing::orin_domain();
    orin.models.emplace("vit_b16", LatencyModel(0.012, 1.638, 0.043, 0.241));
    const Fleet fleet{{tx1_profile(), "vgg19", coop(0.2)},
                      {tx1_profile(), "densenet121", coop(0.24)},
                      {orin, "vit_b16", coop(0.2)}};
    const auto r = simulate_fleet(fleet);
    double sum = 0.0;
    for (const auto& m : fleet)
        sum += plan_device(m.device.model(m.dnn), *m.device.power, m.device.domain, m.scenario).total_energy;
    EXPECT_DOUBLE_EQ(r.total_energy, sum);
    EXPECT_EQ(r.decisions[1].x, 1);
    EXPECT_EQ(r.decisions[0].x, 0);
}

TEST(SimulateFleet, Errors) {
    EXPECT_THROW(simulate_fleet({}), ValidationError);
    auto bare = tx1_profile();
    bare.power.reset();
    EXPECT_THROW(simulate_fleet({{bare, "vgg19", coop(0.2)}}), MissingPowerModel);
    EXPECT_THROW(simulate_fleet({{tx1_profile(), "alexnet", coop(0.2)}}), ValidationError);
}

} // namespace
} // namespace memfreq
