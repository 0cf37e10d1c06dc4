#include "sara/geometry.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

using namespace sara;

TEST(Region, EuclideanAndTorusDistance)
{
    Region plain{100, 100, false};
    Region torus{100, 100, true};
    EXPECT_DOUBLE_EQ(plain.distance({0, 0}, {3, 4}), 5.0);
    EXPECT_DOUBLE_EQ(torus.distance({1, 0}, {99, 0}), 2.0);
    EXPECT_DOUBLE_EQ(plain.distance({1, 0}, {99, 0}), 98.0);
    EXPECT_DOUBLE_EQ(torus.distance({0, 1}, {0, 99}), 2.0);
}

TEST(Region, RejectsNonPositiveSides)
{
    EXPECT_THROW((Region{0, 10}).validate(), std::invalid_argument);
    EXPECT_THROW((Region{10, -1}).validate(), std::invalid_argument);
    EXPECT_THROW(generate_topology(0.02, Region{0, 10}, 1.0, 1), std::invalid_argument);
}

TEST(Region, WrapPointMapsIntoWindow)
{
    Region torus{100, 50, true};
    const Point p = torus.wrap_point({-3, 52});
    EXPECT_NEAR(p.x, 97.0, 1e-12);
    EXPECT_NEAR(p.y, 2.0, 1e-12);
    Region plain{100, 50, false};
    EXPECT_EQ(plain.wrap_point({-3, 52}), (Point{-3, 52}));
}

TEST(GenerateTopology, PreconditionsOnLinkDistance)
{
    EXPECT_THROW(generate_topology(0.02, Region{}, 0.0, 1), std::invalid_argument);
    EXPECT_THROW(generate_topology(0.02, Region{}, 50.0, 1), std::invalid_argument);
    EXPECT_THROW(generate_topology(0.0, Region{}, 5.0, 1), std::invalid_argument);
}

TEST(GenerateTopology, EveryLinkHasTheConfiguredLength)
{
    for (bool wrap : {false, true}) {
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            const Topology t = generate_topology(0.02, Region{100, 100, wrap}, 5.0, seed);
            ASSERT_EQ(t.tx.size(), t.rx.size());
            for (std::size_t i = 0; i < t.size(); ++i) {
                EXPECT_NEAR(pair_distance(t, t.tx[i], t.rx[i]), 5.0, 5.0 * 1e-9);
                EXPECT_TRUE(t.region.contains(t.tx[i]));
                if (wrap) {
                    EXPECT_TRUE(t.region.contains(t.rx[i]));
                }
            }
        }
    }
}

TEST(GenerateTopology, DeterministicPerSeed)
{
    EXPECT_EQ(generate_topology(0.02, Region{}, 5.0, 42), generate_topology(0.02, Region{}, 5.0, 42));
    EXPECT_NE(generate_topology(0.02, Region{}, 5.0, 42), generate_topology(0.02, Region{}, 5.0, 43));
}

TEST(GenerateTopology, PoissonCountMeanAndVariance)
{
    // lambda * area = 200; over 1000 drops the sample mean is within 3 sigma
    // of 200 (sigma of the mean = sqrt(200/1000)) and the variance is near 200.
    double sum = 0.0, sq = 0.0;
    const int drops = 1000;
    for (int s = 1; s <= drops; ++s) {
        const double n = static_cast<double>(generate_topology(0.02, Region{}, 5.0, s).size());
        sum += n;
        sq += n * n;
    }
    const double mean = sum / drops;
    const double var = (sq - drops * mean * mean) / (drops - 1);
    EXPECT_NEAR(mean, 200.0, 3.0 * std::sqrt(200.0 / drops));
    // Var of a sample variance of Poisson(200) ~ 2*200^2/(n-1); allow 4 sigma.
    EXPECT_NEAR(var, 200.0, 4.0 * std::sqrt(2.0 * 200.0 * 200.0 / (drops - 1)));
}

TEST(GenerateTopology, ZeroDrawGivesEmptyTopology)
{
    // Tiny density: nearly every draw is empty.
    bool saw_empty = false;
    for (std::uint64_t s = 1; s < 50 && !saw_empty; ++s)
        saw_empty = generate_topology(1e-6, Region{10, 10}, 1.0, s).empty();
    EXPECT_TRUE(saw_empty);
}

TEST(GenerateTopology, ReceiverAnglesAreUniform)
{
    // Chi-square over 16 bins, 15 degrees of freedom: 1% critical value 30.58.
    constexpr int bins = 16;
    std::vector<double> counts(bins, 0.0);
    std::size_t total = 0;
    for (std::uint64_t s = 1; total < 20000; ++s) {
        const Topology t = generate_topology_with_count(500, Region{}, 5.0, s);
        for (std::size_t i = 0; i < t.size(); ++i) {
            const double a = std::atan2(t.rx[i].y - t.tx[i].y, t.rx[i].x - t.tx[i].x) + std::numbers::pi;
            counts[std::min(bins - 1, static_cast<int>(a / (2 * std::numbers::pi) * bins))] += 1;
            ++total;
        }
    }
    const double expected = static_cast<double>(total) / bins;
    double chi2 = 0.0;
    for (double c : counts)
        chi2 += (c - expected) * (c - expected) / expected;
    EXPECT_LT(chi2, 30.58);
}

TEST(GenerateTopology, ConditionalCountGivesElevenPairLayout)
{
    const Topology t = generate_topology_with_count(11, Region{30, 30}, 5.0, 7);
    EXPECT_EQ(t.size(), 11u);
    EXPECT_DOUBLE_EQ(t.region.width, 30.0);
}

TEST(TopologyFromPoints, ValidatesInput)
{
    Region r{50, 50};
    EXPECT_NO_THROW(topology_from_points({{10, 10}, {20, 20}}, {{13, 14}, {20, 25}}, r));
    EXPECT_THROW(topology_from_points({{10, 10}}, {{13, 14}, {20, 25}}, r), std::invalid_argument);
    EXPECT_THROW(topology_from_points({{10, 10}, {20, 20}}, {{13, 14}, {20, 26}}, r), std::invalid_argument);
    EXPECT_THROW(topology_from_points({{60, 10}}, {{63, 14}}, r), std::invalid_argument);
    const Topology t = topology_from_points({{10, 10}}, {{13, 14}}, r);
    EXPECT_DOUBLE_EQ(t.link_distance, 5.0);
}

TEST(TopologyFile, RoundTripAtSixDecimals)
{
    const Topology t = generate_topology_with_count(12, Region{40, 30, true}, 4.0, 3);
    std::stringstream ss;
    write_topology(ss, t);
    const Topology back = read_topology(ss);
    ASSERT_EQ(back.size(), t.size());
    EXPECT_EQ(back.region, t.region);
    EXPECT_DOUBLE_EQ(back.link_distance, t.link_distance);
    for (std::size_t i = 0; i < t.size(); ++i) {
        EXPECT_NEAR(back.tx[i].x, t.tx[i].x, 5e-7);
        EXPECT_NEAR(back.rx[i].y, t.rx[i].y, 5e-7);
    }
}

TEST(TopologyFile, RejectsMalformedRows)
{
    std::stringstream ss("# sara-topology v1\n# width=10 height=10 wrap=0 link_distance=1\n"
                         "index,tx_x,tx_y,rx_x,rx_y\n0,1,1,oops,1\n");
    EXPECT_THROW(read_topology(ss), std::invalid_argument);
}

TEST(LineTopology, HelperPlacesPairsAsDocumented)
{
    const Topology t = reference::line_topology(3, 20.0, 5.0);
    EXPECT_DOUBLE_EQ(pair_distance(t, t.tx[2], t.rx[2]), 5.0);
    EXPECT_DOUBLE_EQ(pair_distance(t, t.tx[0], t.tx[2]), 40.0);
}
