#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hsmcast/errors.hpp"
#include "hsmcast/link_model.hpp"

namespace hsmcast {
namespace {

// Regression constants from tests/oracles/link_oracle.py (closed-form
// COST-231 Hata and the own/other-cell power sum over 18 sites).
constexpr double kPathLoss550m = 128.5983215951;
constexpr double kDoublingStep = 10.6037381832;

LinkModel deterministic_model(int bler = 10)
{
    PropagationConfig prop;
    prop.shadowing_sigma_db = 0.0;
    prop.fading = FadingMode::Off;
    return LinkModel(CellLayout::hexagonal(550.0, 18), RadioParams{}, prop, SinrToCqiMap::affine(), bler, 30);
}

TEST(PathLoss, MatchesClosedForm)
{
    EXPECT_NEAR(path_loss_db(550.0, PropagationConfig{}), kPathLoss550m, 1e-9);
}

TEST(PathLoss, DoublingDistanceAddsSlopeTimesLog2)
{
    const PropagationConfig cfg;
    for (double d : {20.0, 100.0, 275.0, 700.0}) {
        EXPECT_NEAR(path_loss_db(2 * d, cfg) - path_loss_db(d, cfg), kDoublingStep, 1e-9);
    }
}

TEST(PathLoss, RejectsInvalidDistance)
{
    const PropagationConfig cfg;
    EXPECT_THROW(path_loss_db(0.0, cfg), std::out_of_range);
    EXPECT_THROW(path_loss_db(-5.0, cfg), std::out_of_range);
    EXPECT_THROW(path_loss_db(9.9, cfg), std::out_of_range);
    EXPECT_NO_THROW(path_loss_db(10.0, cfg));
}

TEST(GeometryFactor, SpotValues)
{
    EXPECT_DOUBLE_EQ(geometry_factor(10, 9, 1), 1.0);
    EXPECT_DOUBLE_EQ(geometry_factor(20, 4, 1), 4.0);
    EXPECT_DOUBLE_EQ(geometry_factor(0, 4, 1), 0.0);
    EXPECT_THROW(geometry_factor(1, 0, 0), std::domain_error);
}

TEST(Sinr, SpotValues)
{
    LinkBudget b{12.0, 20.0, 0.0, 1.0, 0.5};
    EXPECT_NEAR(sinr(b, std::numeric_limits<double>::infinity()), 19.2, 1e-12);
    EXPECT_NEAR(sinr(b, 1.0), 6.4, 6.4e-12);
    b.orthogonality = 0.0;
    EXPECT_NEAR(sinr(b, 1.0), 9.6, 9.6e-12);
    EXPECT_EQ(sinr(b, 0.0), 0.0);  // G = 0: no usable signal
    b.p_own_w = 0.0;
    EXPECT_THROW(sinr(b, 1.0), std::domain_error);
}

TEST(Sinr, MonotoneInOrthogonalityGeometryAndPower)
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.01, 0.99);
    for (int i = 0; i < 500; ++i) {
        LinkBudget b{12.0 * u(rng), 20.0, 0.0, 1.0, u(rng)};
        const double g = 10.0 * u(rng);
        const double s = sinr(b, g);
        auto worse = b;
        worse.orthogonality += 0.01;
        EXPECT_LT(sinr(worse, g), s);
        EXPECT_GT(sinr(b, g * 1.01), s);
        auto stronger = b;
        stronger.p_hsdsch_w *= 1.01;
        EXPECT_GT(sinr(stronger, g), s);
    }
}

TEST(SinrToCqi, ClampsAtBothEnds)
{
    const auto map = SinrToCqiMap::affine();
    EXPECT_EQ(sinr_to_cqi(-std::numeric_limits<double>::infinity(), 10, map, 30), 1);
    EXPECT_EQ(sinr_to_cqi(-200.0, 5, map, 30), 1);
    EXPECT_EQ(sinr_to_cqi(60.0, 10, map, 30), 30);
    EXPECT_EQ(sinr_to_cqi(std::numeric_limits<double>::infinity(), 20, map, 30), 30);
}

TEST(SinrToCqi, OneStepPerSlope)
{
    const auto map = SinrToCqiMap::affine();
    // 0 dB -> 16.62 -> 17; 1.02 dB -> 17.62 -> 18.
    EXPECT_EQ(map.cqi(0.0, 10, 30), 17);
    EXPECT_EQ(map.cqi(1.02, 10, 30), 18);
    for (double s = -10.0; s < 5.0; s += 0.37) {
        EXPECT_EQ(map.cqi(s + 1.02, 10, 30) - map.cqi(s, 10, 30), 1) << s;
    }
}

TEST(SinrToCqi, UnknownTargetIsConfigError)
{
    EXPECT_THROW(SinrToCqiMap::affine().cqi(0.0, 7, 30), ConfigError);
}

TEST(SinrToCqi, MonotoneInSinrAndBlerTarget)
{
    const auto map = SinrToCqiMap::affine();
    const int targets[] = {5, 10, 15, 20};
    int prev_by_target[4] = {0, 0, 0, 0};
    for (double s = -30.0; s <= 30.0; s += 0.01) {
        int prev_target_cqi = 0;
        for (int i = 0; i < 4; ++i) {
            const int c = map.cqi(s, targets[i], 30);
            EXPECT_GE(c, prev_by_target[i]);
            EXPECT_GE(c, prev_target_cqi);
            prev_by_target[i] = c;
            prev_target_cqi = c;
        }
    }
}

TEST(SinrToCqi, AffineOffsetsMustNotDecrease)
{
    EXPECT_THROW(SinrToCqiMap::affine(1.02, 16.62, {{5, 1.0}, {10, 0.0}}), ConfigError);
}

TEST(SinrToCqi, BreakpointFile)
{
    const auto map = SinrToCqiMap::parse(
        "bler_target,sinr_db,cqi\n"
        "10,-5,3\n10,0,10\n10,5,20\n"
        "20,-6,3\n20,-1,10\n20,4,20\n");
    EXPECT_FALSE(map.is_affine());
    EXPECT_EQ(map.cqi(-10.0, 10, 30), 1);
    EXPECT_EQ(map.cqi(-5.0, 10, 30), 3);
    EXPECT_EQ(map.cqi(-0.01, 10, 30), 3);
    EXPECT_EQ(map.cqi(0.0, 10, 30), 10);
    EXPECT_EQ(map.cqi(100.0, 10, 30), 20);
    EXPECT_EQ(map.cqi(-0.5, 20, 30), 10);
    EXPECT_THROW(map.cqi(0.0, 5, 30), ConfigError);
}

TEST(SinrToCqi, BreakpointFileRejectsCrossTargetInversion)
{
    EXPECT_THROW(SinrToCqiMap::parse("bler_target,sinr_db,cqi\n10,0,10\n20,1,10\n"), ConfigError);
    EXPECT_THROW(SinrToCqiMap::parse("bler_target,sinr_db,cqi\n10,0,10\n10,1,8\n"), ConfigError);
    EXPECT_THROW(SinrToCqiMap::parse("bler,sinr,cqi\n"), ParseError);
}

TEST(Layout, HexagonalRings)
{
    const auto layout = CellLayout::hexagonal(550.0, 18);
    ASSERT_EQ(layout.sites().size(), 19u);
    const double d = std::sqrt(3.0) * 550.0;
    int ring1 = 0, ring2_near = 0, ring2_far = 0;
    for (std::size_t i = 1; i < layout.sites().size(); ++i) {
        const double r = distance(layout.sites()[i], {0, 0});
        if (std::abs(r - d) < 1e-6) ++ring1;
        else if (std::abs(r - 3.0 * 550.0) < 1e-6) ++ring2_near;
        else if (std::abs(r - 2.0 * d) < 1e-6) ++ring2_far;
    }
    EXPECT_EQ(ring1, 6);
    EXPECT_EQ(ring2_near, 6);
    EXPECT_EQ(ring2_far, 6);
    // The hexagon vertex at (R, 0) is equidistant from three sites.
    int touching = 0;
    for (const auto& s : layout.sites()) touching += std::abs(distance(s, {550.0, 0.0}) - 550.0) < 1e-6;
    EXPECT_EQ(touching, 3);
}

TEST(Channel, DeterministicPipelineMatchesOracle)
{
    const auto model = deterministic_model();
    const std::vector<double> no_shadowing(19, 0.0);
    struct Case {
        Point p;
        double g;
        double sinr_db;
        int cqi;
    };
    // From tests/oracles/link_oracle.py.
    const Case cases[] = {
        {{50.0, 0.0}, 17169.440193, 12.832506, 29},
        {{275.0, 0.0}, 33.967979, 12.584549, 29},
        {{550.0, 0.0}, 1.581898, 9.283665, 26},
        {{0.0, 476.0}, 2.616937, 10.367405, 27},
    };
    for (const auto& c : cases) {
        const auto s = model.evaluate(model.attach(c.p, no_shadowing), 0.0);
        EXPECT_NEAR(s.geometry / c.g, 1.0, 1e-6);
        EXPECT_NEAR(s.sinr_db, c.sinr_db, 1e-5);
        EXPECT_EQ(s.cqi, c.cqi);
        EXPECT_NEAR(s.budget.p_hsdsch_w / s.budget.p_own_w, 0.6, 1e-12);
    }
}

TEST(Channel, SameSeedSameReports)
{
    PropagationConfig prop;  // shadowing and fading on
    const LinkModel model(CellLayout::hexagonal(550.0, 18), RadioParams{}, prop, SinrToCqiMap::affine(), 10, 30);
    auto run = [&](std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        std::vector<int> out;
        const auto ue = model.attach({300.0, 100.0}, rng);
        for (int i = 0; i < 50; ++i) out.push_back(model.sample(ue, rng).cqi);
        return out;
    };
    EXPECT_EQ(run(42), run(42));
    EXPECT_NE(run(42), run(43));
}

TEST(Channel, CqiNonIncreasingWithDistanceWithoutRandomness)
{
    const auto model = deterministic_model();
    const std::vector<double> zeros(19, 0.0);
    for (double angle : {0.0, 0.4, 1.0, 2.5}) {
        int prev = 31;
        for (double r = 10.0; r <= 470.0; r += 5.0) {
            const Point p{r * std::cos(angle), r * std::sin(angle)};
            const int c = model.evaluate(model.attach(p, zeros), 0.0).cqi;
            EXPECT_LE(c, prev) << "r=" << r << " angle=" << angle;
            prev = c;
        }
    }
    std::mt19937_64 rng(1);
    const auto centre = sample_channel({30.0, 0.0}, model, rng).cqi;
    const auto edge = sample_channel({545.0, 0.0}, model, rng).cqi;
    EXPECT_LE(edge, centre);
}

TEST(Channel, OutsideCellRejected)
{
    const auto model = deterministic_model();
    std::mt19937_64 rng(1);
    EXPECT_THROW(sample_channel({600.0, 0.0}, model, rng), std::out_of_range);
}

TEST(Channel, PedestrianAFadingHasUnitMeanGain)
{
    std::mt19937_64 rng(99);
    double sum = 0.0;
    constexpr int n = 200000;
    for (int i = 0; i < n; ++i) sum += from_db(draw_pedestrian_a_fading_db(rng));
    EXPECT_NEAR(sum / n, 1.0, 0.01);
}

TEST(Channel, FadingLowersGeometryOnly)
{
    const auto model = deterministic_model();
    const auto ue = model.attach({300.0, 0.0}, std::vector<double>(19, 0.0));
    const auto flat = model.evaluate(ue, 0.0);
    const auto faded = model.evaluate(ue, -10.0);
    EXPECT_NEAR(faded.geometry / flat.geometry, 0.1, 1e-3);
    EXPECT_LT(faded.sinr_db, flat.sinr_db);
    EXPECT_LE(faded.cqi, flat.cqi);
}

TEST(PropagationConfig, Validation)
{
    PropagationConfig c;
    EXPECT_NO_THROW(c.validate());
    c.shadowing_sigma_db = -1.0;
    EXPECT_THROW(c.validate(), ConfigError);
    c = {};
    c.carrier_frequency_mhz = 0.0;
    EXPECT_THROW(c.validate(), ConfigError);
    EXPECT_THROW(parse_fading_mode("rayleigh"), ConfigError);
}

}  // namespace
}  // namespace hsmcast
