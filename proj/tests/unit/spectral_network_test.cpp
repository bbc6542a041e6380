#include <gtest/gtest.h>

#include <random>

#include "jpi/errors.hpp"
#include "jpi/netlist_builder.hpp"
#include "jpi/pump_plan.hpp"
#include "jpi/spectral_network.hpp"
#include "support.hpp"

using namespace jpi;
using namespace jpi::spectral_network;
using testing_support::three_pole_design;
using Eigen::MatrixXcd;

namespace {

IsolatorNetlist pumped_three_pole(int n_sidebands, std::vector<double> phases_deg = {0.0, 45.0, 90.0}) {
    auto d = three_pole_design();
    d.n_sidebands = n_sidebands;
    for (auto& p : phases_deg) p = deg_to_rad(p);
    return build_isolator(d, PumpPlan::uniform(3, 0.064 * kPi, hz_to_rad(691e6), phases_deg));
}

MatrixXcd full_s(const SpectralSParams& s) {
    const int d = s.s11.dim();
    MatrixXcd m(2 * d, 2 * d);
    m << s.s11.matrix(), s.s12.matrix(), s.s21.matrix(), s.s22.matrix();
    return m;
}

}  // namespace

TEST(SpectralNetwork, SeriesResistorMatchesTextbook) {
    IsolatorNetlist net;
    net.elements = {SeriesResistor{30.0}};
    net.n_sidebands = 0;
    const auto s = network_sparams(net, hz_to_rad(1e9));
    EXPECT_NEAR(std::abs(s.s21.at(0, 0) - 100.0 / 130.0), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(s.s11.at(0, 0) - 30.0 / 130.0), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(s.s12.at(0, 0) - s.s21.at(0, 0)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(s.s22.at(0, 0) - s.s11.at(0, 0)), 0.0, 1e-14);
}

TEST(SpectralNetwork, ShuntCapacitorMatchesTextbook) {
    IsolatorNetlist net;
    const double c = 1e-12, w = hz_to_rad(5e9);
    net.elements = {ShuntCapacitor{c}};
    net.n_sidebands = 0;
    const auto s = network_sparams(net, w);
    const Complex y(0.0, w * c * 50.0);
    EXPECT_NEAR(std::abs(s.s21.at(0, 0) - 2.0 / (2.0 + y)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(s.s11.at(0, 0) + y / (2.0 + y)), 0.0, 1e-14);
}

TEST(SpectralNetwork, UnpumpedLosslessIsUnitary) {
    auto net = build_isolator(three_pole_design());
    for (double f : {6.5e9, 7.1e9, 7.3e9, 7.8e9}) {
        const MatrixXcd s = full_s(network_sparams(net, hz_to_rad(f)));
        EXPECT_LT((s.adjoint() * s - MatrixXcd::Identity(s.rows(), s.cols())).norm(), 1e-10) << f;
    }
}

TEST(SpectralNetwork, UnpumpedIsReciprocalAndDiagonal) {
    auto net = build_isolator(three_pole_design(InverterRealization::CapacitivePi));
    const auto s = network_sparams(net, hz_to_rad(7.2e9));
    EXPECT_LT((s.s21.matrix() - s.s12.matrix()).norm(), 1e-12);
    EXPECT_NEAR(std::abs(s.s21.at(1, 0)), 0.0, 1e-15);
    EXPECT_NEAR(directionality(s).db, 0.0, 1e-9);
}

TEST(SpectralNetwork, ThreePoleClosedFormAbcd) {
    const auto net = pumped_three_pole(2);
    const double w = hz_to_rad(7.25e9), wm = net.pump_freq();
    const auto& e = net.elements;
    const double j01 = std::get<IdealInverter>(e[0]).j, j12 = std::get<IdealInverter>(e[2]).j;
    const double j23 = std::get<IdealInverter>(e[4]).j, j34 = std::get<IdealInverter>(e[6]).j;
    const MatrixXcd y1 = pole_admittance(std::get<ShuntPole>(e[1]), net.squids, w, wm, 2).matrix();
    const MatrixXcd y2 = pole_admittance(std::get<ShuntPole>(e[3]), net.squids, w, wm, 2).matrix();
    const MatrixXcd y3 = pole_admittance(std::get<ShuntPole>(e[5]), net.squids, w, wm, 2).matrix();
    const MatrixXcd id = MatrixXcd::Identity(5, 5);

    const MatrixXcd a = j34 * (j12 * j12 * id + y1 * y2) / (j01 * j12 * j23);
    const MatrixXcd b = (j12 * j12 * y3 + j23 * j23 * y1 + y1 * y2 * y3) / (j01 * j12 * j23 * j34);
    const MatrixXcd c = j01 * j34 * y2 / (j12 * j23);
    const MatrixXcd d = j01 * (j23 * j23 * id + y2 * y3) / (j12 * j23 * j34);

    const auto t = network_abcd(net, w);
    EXPECT_LT((t.a.matrix() - a).norm() / a.norm(), 1e-12);
    EXPECT_LT((t.b.matrix() - b).norm() / b.norm(), 1e-12);
    EXPECT_LT((t.c.matrix() - c).norm() / c.norm(), 1e-12);
    EXPECT_LT((t.d.matrix() - d).norm() / d.norm(), 1e-12);
}

TEST(SpectralNetwork, PumpedThreePoleIsDirectional) {
    const auto net = pumped_three_pole(2);
    const auto s = network_sparams(net, hz_to_rad(7.3e9));
    EXPECT_GT(directionality(s).db, 3.0);
    EXPECT_GT(std::abs(s.s21.at(1, 0)), 1e-3);
}

TEST(SpectralNetwork, ReversedChainSwapsTransmission) {
    auto net = pumped_three_pole(2);
    auto rev = net;
    std::reverse(rev.elements.begin(), rev.elements.end());
    for (double f : {7.0e9, 7.3e9, 7.6e9}) {
        const auto s = network_sparams(net, hz_to_rad(f));
        const auto r = network_sparams(rev, hz_to_rad(f));
        EXPECT_LT((s.s21.matrix() - r.s12.matrix()).norm(), 1e-9);
        EXPECT_LT((s.s11.matrix() - r.s22.matrix()).norm(), 1e-9);
    }
}

TEST(SpectralNetwork, CommonPhaseOffsetOnlyRotatesConversionTerms) {
    const auto net = pumped_three_pole(2);
    auto shifted = net;
    apply_pump_plan(pump_plan_of(net).with_phase_offset(1.1), shifted);
    const auto s = network_sparams(net, hz_to_rad(7.2e9));
    const auto t = network_sparams(shifted, hz_to_rad(7.2e9));
    EXPECT_NEAR(std::abs(s.s21.at(0, 0) - t.s21.at(0, 0)), 0.0, 1e-10);
    EXPECT_NEAR(std::abs(s.s12.at(0, 0) - t.s12.at(0, 0)), 0.0, 1e-10);
    for (int n = -2; n <= 2; ++n)
        EXPECT_NEAR(std::abs(s.s21.at(n, 0)), std::abs(t.s21.at(n, 0)), 1e-10);
}

TEST(SpectralNetwork, TruncationConverges) {
    const double w = hz_to_rad(7.3e9);
    std::vector<double> d;
    for (int n : {1, 2, 4, 6, 8}) d.push_back(directionality(network_sparams(pumped_three_pole(n), w)).db);
    for (std::size_t k = 2; k < d.size(); ++k) EXPECT_LT(std::abs(d[k] - d[k - 1]), std::abs(d[k - 1] - d[k - 2]));
    EXPECT_LT(std::abs(d[4] - d[3]), 0.05);
}

TEST(SpectralNetwork, UnmodulatedSquidIsAnInductor) {
    squid::SquidParams s;
    s.beta = 0.3 * kPi;
    const double l0 = squid::squid_inductance(s.ic0, s.beta);
    IsolatorNetlist a, b;
    a.squids = {s};
    a.n_sidebands = b.n_sidebands = 1;
    a.elements = {ShuntPole{0.0, 0.0, 0}};
    b.elements = {ShuntInductor{l0}};
    const auto sa = network_sparams(a, hz_to_rad(7e9));
    const auto sb = network_sparams(b, hz_to_rad(7e9));
    EXPECT_LT((full_s(sa) - full_s(sb)).norm(), 1e-12);
}

TEST(SpectralNetwork, SingleShuntSquidIsNotDirectional) {
    squid::SquidParams s{5e-6, 0.3 * kPi, 0.1 * kPi, hz_to_rad(500e6), 0.7};
    IsolatorNetlist net;
    net.squids = {s};
    net.elements = {ShuntPole{0.0, 0.0, 0}};
    for (double f : {6e9, 7e9, 8e9})
        EXPECT_NEAR(directionality(network_sparams(net, hz_to_rad(f))).db, 0.0, 1e-9);
}

TEST(SpectralNetwork, TwoSquidsWithPhaseOffsetAreDirectional) {
    squid::SquidParams s1{5e-6, 0.3 * kPi, 0.1 * kPi, hz_to_rad(500e6), 0.0};
    double best = 0.0;
    for (double dp = 0.0; dp < 360.0; dp += 10.0) {
        auto s2 = s1;
        s2.pump_phase = deg_to_rad(dp);
        const auto sp = two_squid_circuit(s1, s2, 4.2e-12, hz_to_rad(7e9), 50.0, 2);
        best = std::max(best, std::abs(directionality(sp).db));
    }
    EXPECT_GT(best, 3.0);
    const auto same = two_squid_circuit(s1, s1, 4.2e-12, hz_to_rad(7e9), 50.0, 2);
    EXPECT_NEAR(directionality(same).db, 0.0, 1e-6);
}

TEST(SpectralNetwork, ConnectWithThruIsIdentity) {
    const auto net = pumped_three_pole(2);
    const auto s = network_sparams(net, hz_to_rad(7.3e9));
    SpectralSParams thru;
    thru.s11 = thru.s22 = SpectralMatrix(2);
    thru.s21 = thru.s12 = SpectralMatrix::identity(2);
    thru.omega = s.omega;
    const auto c = connect(s, thru);
    EXPECT_LT((full_s(c) - full_s(s)).norm(), 1e-12);
    const auto c2 = connect(thru, s);
    EXPECT_LT((full_s(c2) - full_s(s)).norm(), 1e-12);
}

TEST(SpectralNetwork, DiplexerPassesOnlyTheSignal) {
    const auto d = ideal_diplexer(2, 50.0, 1.0);
    EXPECT_EQ(d.s21.at(0, 0), Complex(1.0));
    EXPECT_EQ(d.s21.at(1, 1), Complex(0.0));
    EXPECT_EQ(d.s11.max_abs(), 0.0);
}

TEST(SpectralNetwork, CascadeAtDifferentPumpsIsAdditive) {
    auto a = pumped_three_pole(2);
    auto b = pumped_three_pole(2, {0.0, 90.0, 45.0});
    apply_pump_plan(PumpPlan::uniform(3, 0.05 * kPi, hz_to_rad(720e6), {0.0, 1.0, 2.0}), b);
    const std::vector<double> w{hz_to_rad(7.1e9), hz_to_rad(7.3e9), hz_to_rad(7.5e9)};
    const auto c = cascade_isolators(a, b, w);
    for (std::size_t k = 0; k < w.size(); ++k) {
        const double da = directionality(network_sparams(a, w[k])).db;
        const double db = directionality(network_sparams(b, w[k])).db;
        EXPECT_EQ(c[k].sidebands(), 0);
        EXPECT_NEAR(directionality(c[k]).db, da + db, 1e-9);
    }
}

TEST(SpectralNetwork, CascadeOnSharedGridKeepsSidebands) {
    auto a = pumped_three_pole(2);
    const std::vector<double> w{hz_to_rad(7.3e9)};
    const auto c = cascade_isolators(a, a, w);
    EXPECT_EQ(c[0].sidebands(), 2);
}

TEST(SpectralNetwork, ValidationRejectsBadNetlists) {
    IsolatorNetlist net;
    EXPECT_THROW(net.validate(), InvalidParameter);
    net.elements = {ShuntPole{1e-12, 0.0, 3}};
    EXPECT_THROW(net.validate(), InvalidParameter);
    net.elements = {SeriesCapacitor{-1e-12}};
    EXPECT_THROW(net.validate(), InvalidParameter);
    net.elements = {IdealInverter{0.02}, ShuntPole{0.0, 0.0, 0}, ShuntPole{0.0, 0.0, 1}};
    net.squids = {{5e-6, 0.1, 0.1, hz_to_rad(5e8), 0.0}, {5e-6, 0.1, 0.1, hz_to_rad(6e8), 0.0}};
    EXPECT_THROW(net.validate(), InvalidParameter);
}

TEST(SpectralNetwork, SideBandCountMismatchOnConnect) {
    EXPECT_THROW(connect(ideal_diplexer(1, 50, 1), ideal_diplexer(2, 50, 1)), DimensionMismatch);
}

TEST(SpectralNetwork, LinspaceEndpoints) {
    const auto v = linspace(1.0, 2.0, 5);
    EXPECT_DOUBLE_EQ(v.front(), 1.0);
    EXPECT_DOUBLE_EQ(v.back(), 2.0);
    EXPECT_DOUBLE_EQ(v[2], 1.5);
    EXPECT_THROW(linspace(0, 1, 0), InvalidParameter);
}
