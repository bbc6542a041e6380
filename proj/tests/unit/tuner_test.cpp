#include <gtest/gtest.h>

#include "jpi/errors.hpp"
#include "jpi/netlist_builder.hpp"
#include "jpi/tuner.hpp"
#include "support.hpp"

using namespace jpi;
using namespace jpi::tuner;
namespace sn = jpi::spectral_network;

namespace {

TuneObjective small_objective() {
    TuneObjective o;
    o.band = {hz_to_rad(7.3e9), hz_to_rad(200e6), hz_to_rad(800e6)};
    o.band_points = 5;
    return o;
}

sn::IsolatorNetlist pumped_net() {
    auto d = testing_support::three_pole_design();
    return build_isolator(d, PumpPlan::uniform(3, 0.064 * kPi, hz_to_rad(691e6),
                                               {0.0, deg_to_rad(45.0), deg_to_rad(90.0)}));
}

}  // namespace

TEST(NelderMead, FindsQuadraticMinimum) {
    auto f = [](const std::vector<double>& x) {
        return (x[0] - 1.0) * (x[0] - 1.0) + 4.0 * (x[1] + 0.5) * (x[1] + 0.5);
    };
    SimplexOptions opt;
    opt.max_evals = 400;
    opt.tol = 1e-12;
    int calls = 0;
    const auto r = nelder_mead(f, {0.0, 0.0}, {-3, -3}, {3, 3}, {false, false}, opt,
                               [&](double) { ++calls; });
    EXPECT_NEAR(r.x[0], 1.0, 1e-3);
    EXPECT_NEAR(r.x[1], -0.5, 1e-3);
    EXPECT_LE(r.evals, 400);
    EXPECT_EQ(calls, r.evals);
}

TEST(NelderMead, RespectsBoxAndWrapsPeriodic) {
    auto f = [](const std::vector<double>& x) { return (x[0] - 5.0) * (x[0] - 5.0) - std::cos(x[1] - 6.0); };
    SimplexOptions opt;
    opt.max_evals = 500;
    const auto r = nelder_mead(f, {0.5, 0.5}, {0.0, 0.0}, {2.0, kTwoPi}, {false, true}, opt);
    EXPECT_NEAR(r.x[0], 2.0, 1e-3);
    EXPECT_NEAR(std::remainder(r.x[1] - 6.0, kTwoPi), 0.0, 1e-2);
    EXPECT_GE(r.x[1], 0.0);
    EXPECT_LT(r.x[1], kTwoPi);
}

TEST(Objective, ScoreAndFeasibility) {
    const auto o = small_objective();
    BandMetrics good{20.0, 2.0, 15.0};
    EXPECT_TRUE(feasible(good, o));
    EXPECT_DOUBLE_EQ(score(good, o), 20.0);
    BandMetrics lossy{20.0, 7.0, 8.0};
    EXPECT_FALSE(feasible(lossy, o));
    EXPECT_DOUBLE_EQ(score(lossy, o), 20.0 - 2.0 * 2.0 - 2.0 * 2.0);
    auto bad = o;
    bad.band_points = 1;
    EXPECT_THROW(bad.validate(), InvalidParameter);
}

TEST(Sweep, AxesAndShape) {
    TwoSquidTarget t;
    t.s1 = {5e-6, 0.3 * kPi, 0.1 * kPi, hz_to_rad(500e6), 0.0};
    t.s2 = t.s1;
    t.coupling_c = 4e-12;
    t.omega = hz_to_rad(7e9);
    const SweepTarget target = t;
    const auto r = sweep({{"coupling_c", 1e-12, 8e-12, 4}, {"dphase_deg", 0.0, 360.0, 5}}, target);
    ASSERT_EQ(r.points.size(), 20u);
    EXPECT_DOUBLE_EQ(r.points[0].x, 1e-12);
    EXPECT_DOUBLE_EQ(r.points[4].y, 360.0);
    EXPECT_DOUBLE_EQ(r.points[5].x, r.axes[0].values()[1]);
    // dphase 0 and 360 are the same circuit.
    for (std::size_t row = 0; row < 4; ++row)
        EXPECT_NEAR(r.points[row * 5].metrics.min_d_db, r.points[row * 5 + 4].metrics.min_d_db, 1e-9);
    try {
        sweep({{"bogus", 0, 1, 2}}, target);
        FAIL();
    } catch (const InvalidParameter& e) {
        EXPECT_NE(std::string(e.what()).find("coupling_c"), std::string::npos);
    }
}

TEST(Sweep, NetworkAxisMatchesDirectEvaluation) {
    NetworkTarget t{pumped_net(), {hz_to_rad(7.3e9)}};
    const auto r = sweep({{"alpha_pi", 0.0, 0.064, 2}}, SweepTarget{t});
    EXPECT_NEAR(r.points[0].metrics.min_d_db, 0.0, 1e-9);
    const auto direct = evaluate_band(t.netlist, t.omegas);
    EXPECT_NEAR(r.points[1].metrics.min_d_db, direct.min_d_db, 1e-9);
}

TEST(Optimize, DeterministicAndNoWorseThanSeed) {
    const auto net = pumped_net();
    const auto obj = small_objective();
    OptimizerOptions opt;
    opt.restarts = 2;
    opt.evals_per_restart = 25;
    opt.seed = 7;
    const auto seed_plan = pump_plan_of(net);
    const auto a = optimize(seed_plan, obj, net, opt);
    const auto b = optimize(seed_plan, obj, net, opt);
    EXPECT_EQ(a.score, b.score);
    ASSERT_EQ(a.best.tones.size(), b.best.tones.size());
    for (std::size_t k = 0; k < a.best.tones.size(); ++k) EXPECT_EQ(a.best.tones[k].phase, b.best.tones[k].phase);
    EXPECT_GE(a.score, score(evaluate_band(net, obj.band_omegas()), obj) - 1e-12);
    EXPECT_FALSE(a.trace.empty());
    EXPECT_EQ(a.trace.back().best_score, a.score);
    EXPECT_FALSE(a.optima.empty());
    for (std::size_t k = 1; k < a.optima.size(); ++k) EXPECT_GE(a.optima[k - 1].score, a.optima[k].score);
}

TEST(CompliantBand, LongestRun) {
    const auto obj = small_objective();
    std::vector<double> f{1, 2, 3, 4, 5, 6, 7};
    std::vector<sn::PointMetrics> m(7, sn::PointMetrics{0, -30, -20, -20, 20, 1, 20});
    m[2].d_db = 5.0;
    const auto band = longest_compliant_band(f, m, obj);
    EXPECT_DOUBLE_EQ(band.start_hz, 4.0);
    EXPECT_DOUBLE_EQ(band.stop_hz, 7.0);
    m[5].rl_db = 3.0;
    const auto band2 = longest_compliant_band(f, m, obj);
    EXPECT_DOUBLE_EQ(band2.width_hz(), 1.0);
}

TEST(AmplificationPreset, DoublesCenterAndStaggersPhases) {
    const auto plan = amplification_preset(pumped_net(), hz_to_rad(7.3e9));
    ASSERT_EQ(plan.tones.size(), 3u);
    EXPECT_DOUBLE_EQ(plan.tones[0].pump_freq, hz_to_rad(14.6e9));
    EXPECT_NEAR(plan.tones[2].phase, 2.0 * kTwoPi / 3.0, 1e-12);
    EXPECT_THROW(amplification_preset(sn::IsolatorNetlist{}, 1.0), InvalidParameter);
}
