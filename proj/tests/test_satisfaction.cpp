#include <gtest/gtest.h>

#include <random>

#include "hsmcast/satisfaction.hpp"

namespace hsmcast {
namespace {

const CqiTable& table() { return bundled_table(); }

TEST(Udi, Branches)
{
    EXPECT_EQ(udi(631.0, 631.0), Dissatisfaction::finite(0.0));
    EXPECT_EQ(udi(1782.5, 631.0), Dissatisfaction::finite(1151.5));
    EXPECT_TRUE(udi(631.0, 0.0).is_infinite());
    EXPECT_TRUE(udi(68.5, 86.5).is_infinite());
}

TEST(Dissatisfaction, SaturatesAndOrders)
{
    const auto inf = Dissatisfaction::infinity();
    const auto one = Dissatisfaction::finite(1.0);
    EXPECT_TRUE((one + inf).is_infinite());
    EXPECT_EQ((one + one).value(), 2.0);
    EXPECT_LT(one, inf);
    EXPECT_EQ(inf, inf);
    EXPECT_THROW(inf.value(), std::domain_error);
    EXPECT_TRUE(std::isinf(inf.as_double()));
    EXPECT_EQ(to_string(inf, 2), "inf");
    EXPECT_EQ(to_string(Dissatisfaction::finite(24.0), 2), "24.00");
}

TEST(AssignedRate, HighestEnabledLevelAtOrBelow)
{
    const SubgroupConfig a(30, {1, 3});
    EXPECT_DOUBLE_EQ(assigned_rate(a, 2, table()), 68.5);
    EXPECT_DOUBLE_EQ(assigned_rate(a, 3, table()), 116.5);
    EXPECT_DOUBLE_EQ(assigned_rate(a, 30, table()), 116.5);
    EXPECT_DOUBLE_EQ(assigned_rate(SubgroupConfig(30, {3}), 2, table()), 0.0);
    EXPECT_THROW(assigned_rate(a, 31, table()), std::out_of_range);
}

TEST(CodesUsed, SumsEnabledLevels)
{
    EXPECT_EQ(codes_used(SubgroupConfig(30, {1, 3}), table()), 2);
    EXPECT_EQ(codes_used(SubgroupConfig(30, {16}), table()), 5);
    EXPECT_EQ(codes_used(SubgroupConfig(30), table()), 0);
    EXPECT_THROW(codes_used(SubgroupConfig(12), table()), std::invalid_argument);
}

TEST(Gdi, Examples)
{
    const auto users = make_users({1, 3}, table());
    const auto r = gdi(users, SubgroupConfig(30, {1}), table());
    EXPECT_EQ(r.gdi, Dissatisfaction::finite(24.0));
    EXPECT_EQ(r.total_deficit_bps, 48000);
    EXPECT_EQ(r.codes_used, 1);
    EXPECT_EQ(r.users_per_level[0], 1);
    EXPECT_EQ(r.users_per_level[2], 1);

    EXPECT_EQ(gdi(users, SubgroupConfig(30, {1, 3}), table()).gdi, Dissatisfaction::finite(0.0));
    EXPECT_TRUE(gdi(make_users({3}, table()), SubgroupConfig(30), table()).gdi.is_infinite());
    EXPECT_THROW(gdi({}, SubgroupConfig(30), table()), std::domain_error);
}

TEST(Gdi, RejectsInconsistentUser)
{
    auto users = make_users({5}, table());
    users[0].b_kbps = 100.0;
    EXPECT_THROW(gdi(users, SubgroupConfig(30, {1}), table()), std::invalid_argument);
}

TEST(Gdi, AssignWritesBackRates)
{
    auto users = make_users({1, 3, 16}, table());
    assign_and_evaluate(users, SubgroupConfig(30, {1, 3}), table());
    EXPECT_DOUBLE_EQ(*users[0].c_kbps, 68.5);
    EXPECT_DOUBLE_EQ(*users[1].c_kbps, 116.5);
    EXPECT_DOUBLE_EQ(*users[2].c_kbps, 116.5);
}

TEST(NormalizedGdi, Examples)
{
    const auto users = make_users({1, 3}, table());
    const auto r = gdi(users, SubgroupConfig(30, {1}), table());
    EXPECT_NEAR(normalized_gdi(r, users).value(), 24.0 / 92.5, 1e-12);
    EXPECT_NEAR(normalized_gdi(r, users, GdiNormalizer::MaxSupportedRate).value(), 24.0 / 116.5, 1e-12);

    EXPECT_EQ(normalized_gdi(gdi(users, SubgroupConfig(30, {1, 3}), table()), users).value(), 0.0);

    // No bundled level is exactly half another, so check proportionality on a
    // synthetic two-level table.
    CqiTable half({{1, Modulation::Qpsk, 100, 1, 0.1, 50.0}, {2, Modulation::Qpsk, 200, 1, 0.2, 100.0}});
    const auto single = make_users({2}, half);
    EXPECT_DOUBLE_EQ(normalized_gdi(gdi(single, SubgroupConfig(2, {1}), half), single).value(), 0.5);

    const auto outage = make_users({3}, table());
    EXPECT_TRUE(normalized_gdi(gdi(outage, SubgroupConfig(30), table()), outage).is_infinite());
}

// Random groups and configurations covering the lowest occupied level.
class SatisfactionProperties : public ::testing::Test {
protected:
    std::mt19937_64 rng{2024};

    std::vector<UserRecord> random_users()
    {
        std::uniform_int_distribution<int> n(1, 120), level(1, 30);
        std::vector<int> cqis(static_cast<std::size_t>(n(rng)));
        for (auto& c : cqis) c = level(rng);
        return make_users(cqis, table());
    }

    SubgroupConfig random_config()
    {
        std::uniform_int_distribution<std::uint64_t> mask(0, (std::uint64_t{1} << 30) - 1);
        return SubgroupConfig::from_mask(30, mask(rng));
    }
};

TEST_F(SatisfactionProperties, GdiIsMeanOfPerUserUdi)
{
    for (int trial = 0; trial < 300; ++trial) {
        const auto users = random_users();
        auto config = random_config();
        config.set(1);
        const auto r = gdi(users, config, table());
        double sum = 0.0;
        for (const auto& u : users) sum += udi(u.b_kbps, assigned_rate(config, u.cqi, table())).value();
        const double brute = sum / static_cast<double>(users.size());
        ASSERT_TRUE(r.gdi.is_finite());
        EXPECT_NEAR(r.gdi.value(), brute, 1e-9 * std::max(1.0, brute));
    }
}

TEST_F(SatisfactionProperties, CoveredGroupsAreFiniteAndNormalizedInUnitInterval)
{
    for (int trial = 0; trial < 300; ++trial) {
        const auto users = random_users();
        auto config = random_config();
        int lowest = 30;
        for (const auto& u : users) lowest = std::min(lowest, u.cqi);
        config.set(std::uniform_int_distribution<int>(1, lowest)(rng));
        const auto r = gdi(users, config, table());
        ASSERT_TRUE(r.gdi.is_finite());
        for (std::size_t i = 0; i < users.size(); ++i) EXPECT_LE(r.assigned_kbps[i], users[i].b_kbps);
        const double n = normalized_gdi(r, users).value();
        EXPECT_GE(n, 0.0);
        EXPECT_LE(n, 1.0);
    }
}

TEST_F(SatisfactionProperties, EnablingALevelNeverIncreasesDissatisfaction)
{
    for (int trial = 0; trial < 300; ++trial) {
        const auto users = random_users();
        const auto config = random_config();
        auto more = config;
        more.set(std::uniform_int_distribution<int>(1, 30)(rng));
        const auto before = gdi(users, config, table());
        const auto after = gdi(users, more, table());
        EXPECT_LE(after.gdi, before.gdi);
        for (std::size_t i = 0; i < users.size(); ++i) {
            EXPECT_LE(after.per_user_udi[i].second, before.per_user_udi[i].second);
        }
    }
}

TEST(SubgroupConfig, LexicographicOrderStartsAtLevelOne)
{
    EXPECT_LT(SubgroupConfig(3, {1, 3}), SubgroupConfig(3, {1, 2}));
    EXPECT_LT(SubgroupConfig(3, {2}), SubgroupConfig(3, {1}));
    EXPECT_LT(SubgroupConfig(3), SubgroupConfig(3, {3}));
    EXPECT_EQ(to_string(SubgroupConfig(30, {1, 10})), "{1,10}");
    EXPECT_EQ(SubgroupConfig::from_mask(4, 0b1010), SubgroupConfig(4, {2, 4}));
}

}  // namespace
}  // namespace hsmcast
