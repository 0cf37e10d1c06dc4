#include "sara/aloha_analytic.hpp"
#include "sara/mac_schemes.hpp"
#include "sara/random.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace sara;

namespace {

const double kBeta = 1.9952623149688795;

PolicyContext context(double density = 0.02)
{
    PolicyContext c;
    c.density = density;
    return c;
}

} // namespace

TEST(SaraUpdate, ClampExamples)
{
    const ProbBounds b{0.01, 1.0};
    EXPECT_DOUBLE_EQ(sara_update(0.3, 2 * kBeta, kBeta, b), 1.0);
    EXPECT_DOUBLE_EQ(sara_update(0.3, 0.5 * kBeta, kBeta, b), 0.5);
    EXPECT_DOUBLE_EQ(sara_update(0.3, 0.001 * kBeta, kBeta, b), 0.01);
    EXPECT_DOUBLE_EQ(sara_update(0.3, std::nullopt, kBeta, b), 0.3);
    EXPECT_THROW(sara_update(0.3, -1.0, kBeta, b), std::invalid_argument);
}

TEST(NeighborCountPhi, Examples)
{
    const Topology lone = reference::line_topology(3, 50.0, 5.0, Region{200, 100});
    EXPECT_DOUBLE_EQ(neighbor_count_phi(lone, 1, 10.0), 1.0);

    // Ten transmitters 1 m apart: all within 10 m of the first.
    const Topology row = reference::line_topology(10, 1.0, 5.0);
    EXPECT_DOUBLE_EQ(neighbor_count_phi(row, 0, 10.0), 0.1);
    // The radius is inclusive: the transmitter exactly 9 m away counts.
    EXPECT_DOUBLE_EQ(neighbor_count_phi(row, 0, 9.0), 0.1);
    EXPECT_THROW(neighbor_count_phi(row, 0, 0.0), std::invalid_argument);
}

TEST(NeighborCountPhi, CountGrowsWithRadius)
{
    reference::PropertyRng rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        const Topology t = generate_topology(0.02, Region{}, 5.0, rng.next());
        for (std::size_t i = 0; i < std::min<std::size_t>(t.size(), 10); ++i) {
            double prev = 2.0;
            for (double r : {1.0, 5.0, 10.0, 20.0, 40.0}) {
                const double phi = neighbor_count_phi(t, i, r);
                EXPECT_LE(phi, prev);
                prev = phi;
            }
        }
    }
}

TEST(AdaptiveSensingRange, Examples)
{
    EXPECT_DOUBLE_EQ(adaptive_sensing_range(1, 10.0, 4.0), 10.0);
    EXPECT_NEAR(adaptive_sensing_range(16, 10.0, 4.0), 20.0, 1e-12);
    EXPECT_DOUBLE_EQ(adaptive_sensing_range(0, 10.0, 4.0), 0.0);
}

TEST(PolicyNames, RoundTrip)
{
    for (const char* n : {"fixed_aloha", "optimal_aloha", "neighbor_aloha", "sara", "csma_fixed", "csma_adaptive"})
        EXPECT_EQ(policy_name(policy_from_name(n)), n);
    EXPECT_THROW(policy_from_name("tdma"), std::invalid_argument);
    EXPECT_TRUE(is_adaptive(Sara{}));
    EXPECT_TRUE(is_adaptive(CsmaAdaptive{}));
    EXPECT_FALSE(is_adaptive(CsmaFixed{}));
}

TEST(ValidatePolicy, RejectsBadParameters)
{
    EXPECT_THROW(validate_policy(FixedAloha{0.0, {}}), std::invalid_argument);
    EXPECT_THROW(validate_policy(FixedAloha{1.5, {}}), std::invalid_argument);
    EXPECT_THROW(validate_policy(Sara{ProbBounds{0.5, 0.2}, 100}), std::invalid_argument);
    EXPECT_THROW(validate_policy(Sara{ProbBounds{}, 0}), std::invalid_argument);
    EXPECT_THROW(validate_policy(NeighborCountAloha{-1.0}), std::invalid_argument);
    EXPECT_THROW(validate_policy(CsmaAdaptive{0.0, 100, 1.0}), std::invalid_argument);
    EXPECT_NO_THROW(validate_policy(CsmaFixed{}));
}

TEST(Initialize, SaraStartsAtUpperBound)
{
    const Topology t = generate_topology_with_count(15, Region{}, 5.0, 1);
    const auto p = make_policy(Sara{ProbBounds{0.05, 0.7}, 50}, t, context());
    ASSERT_EQ(p->probabilities().size(), 15u);
    for (double v : p->probabilities())
        EXPECT_DOUBLE_EQ(v, 0.7);
    EXPECT_EQ(p->window(), 50u);
}

TEST(Initialize, OptimalAlohaUsesAnalyticOptimum)
{
    const Topology t = generate_topology_with_count(8, Region{}, 5.0, 1);
    const auto p = make_policy(OptimalAloha{}, t, context());
    for (double v : p->probabilities())
        EXPECT_NEAR(v, 0.28693, 2e-5);
    const auto low = make_policy(OptimalAloha{}, t, context(0.001));
    EXPECT_DOUBLE_EQ(low->probabilities()[0], 1.0);
}

TEST(Initialize, CsmaFixedRangeIsTwiceLinkDistance)
{
    const Topology t = generate_topology_with_count(4, Region{}, 5.0, 1);
    const auto p = make_policy(CsmaFixed{}, t, context());
    for (double r : p->sensing_ranges())
        EXPECT_DOUBLE_EQ(r, 10.0);
    const auto q = make_policy(CsmaFixed{25.0, 1.0}, t, context());
    EXPECT_DOUBLE_EQ(q->sensing_ranges()[2], 25.0);
    const auto a = make_policy(CsmaAdaptive{}, t, context());
    EXPECT_DOUBLE_EQ(a->sensing_ranges()[0], 10.0);
}

TEST(FixedAloha, TransmitFrequencyMatchesPhi)
{
    const Topology t = generate_topology_with_count(10, Region{}, 5.0, 1);
    const auto p = make_policy(FixedAloha{0.5, {}}, t, context());
    Rng rng(3);
    std::vector<std::uint8_t> tx(10);
    std::size_t count = 0;
    const std::size_t slots = 100000;
    for (std::size_t s = 0; s < slots; ++s) {
        p->decide(rng, tx);
        count += tx[0];
    }
    const double rate = static_cast<double>(count) / slots;
    EXPECT_GE(rate, 0.495);
    EXPECT_LE(rate, 0.505);
}

TEST(FixedAloha, PerPairVectorSizeChecked)
{
    const Topology t = generate_topology_with_count(3, Region{}, 5.0, 1);
    EXPECT_THROW(make_policy(FixedAloha{0.5, {0.1, 0.2}}, t, context()), std::invalid_argument);
    const auto p = make_policy(FixedAloha{0.5, {0.1, 0.2, 0.3}}, t, context());
    EXPECT_DOUBLE_EQ(p->probabilities()[2], 0.3);
}

TEST(SaraPolicy, UpdatesOnlyAtWindowEnds)
{
    const Topology t = reference::line_topology(2, 50.0, 5.0, Region{200, 100});
    const auto p = make_policy(Sara{ProbBounds{}, 4}, t, context());
    Feedback fb;
    fb.transmitted = true;
    fb.measured_sir = 0.5 * kBeta;
    for (std::uint64_t slot = 0; slot < 3; ++slot) {
        p->feedback(0, fb);
        p->end_slot(slot);
        EXPECT_DOUBLE_EQ(p->probabilities()[0], 1.0);
    }
    p->feedback(0, fb);
    p->end_slot(3);
    EXPECT_NEAR(p->probabilities()[0], 0.5, 1e-12);
    // Pair 1 never reported, so it keeps its value.
    EXPECT_DOUBLE_EQ(p->probabilities()[1], 1.0);
}

TEST(Csma, MutualExclusionWithinSensingRange)
{
    reference::PropertyRng seeds(6);
    for (int trial = 0; trial < 10; ++trial) {
        const Topology t = generate_topology(0.03, Region{}, 5.0, seeds.next());
        for (const PolicySpec& spec : {PolicySpec{CsmaFixed{}}, PolicySpec{CsmaAdaptive{10.0, 5, 1.0}}}) {
            const auto p = make_policy(spec, t, context(0.03));
            Rng rng(trial);
            std::vector<std::uint8_t> tx(t.size());
            for (std::uint64_t slot = 0; slot < 200; ++slot) {
                p->decide(rng, tx);
                const auto r = p->sensing_ranges();
                for (std::size_t i = 0; i < t.size(); ++i)
                    for (std::size_t j = i + 1; j < t.size(); ++j)
                        if (tx[i] && tx[j]) {
                            EXPECT_GE(t.region.distance(t.tx[i], t.tx[j]), std::min(r[i], r[j]));
                        }
                p->end_slot(slot);
            }
        }
    }
}

TEST(Csma, IsolatedNodeAlwaysTransmitsWithPersistentAccess)
{
    const Topology t = reference::line_topology(3, 50.0, 5.0, Region{200, 100});
    const auto p = make_policy(CsmaFixed{}, t, context());
    Rng rng(1);
    std::vector<std::uint8_t> tx(3);
    for (int s = 0; s < 100; ++s) {
        p->decide(rng, tx);
        EXPECT_EQ(tx[0] + tx[1] + tx[2], 3);
    }
}

TEST(Csma, AdaptiveRangeFollowsReceiverNeighbourCount)
{
    // Receivers sit 5 m above transmitters spaced 3 m apart; with the 10 m
    // starting range the receiver of pair 0 can hear transmitters 1 and 2.
    // Only those that actually transmitted during the window are counted.
    const Topology t = reference::line_topology(6, 3.0, 5.0);
    std::size_t near = 0;
    for (std::size_t j = 1; j < 6; ++j)
        if (t.region.distance(t.rx[0], t.tx[j]) < 10.0)
            ++near;
    EXPECT_EQ(near, 2u);

    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto p = make_policy(CsmaAdaptive{10.0, 1, 1.0}, t, context());
        Rng rng(seed);
        std::vector<std::uint8_t> tx(6);
        p->decide(rng, tx);
        p->end_slot(0);
        std::size_t n0 = 0;
        for (std::size_t j = 1; j < 6; ++j)
            if (tx[j] && t.region.distance(t.rx[0], t.tx[j]) < 10.0)
                ++n0;
        EXPECT_NEAR(p->sensing_ranges()[0], adaptive_sensing_range(n0, 10.0, 4.0), 1e-12) << "seed " << seed;
    }
}
