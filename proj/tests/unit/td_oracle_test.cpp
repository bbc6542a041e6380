#include <gtest/gtest.h>

#include "jpi/errors.hpp"
#include "jpi/netlist_builder.hpp"
#include "jpi/td_oracle.hpp"
#include "support.hpp"

using namespace jpi;
using namespace jpi::td_oracle;
namespace sn = jpi::spectral_network;

namespace {

std::vector<double> sampled_tone(double amp, double f_hz, double phase, double dt, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t k = 0; k < n; ++k) v[k] = amp * std::cos(hz_to_rad(f_hz) * k * dt + phase);
    return v;
}

TransientRun lumped_run(const sn::IsolatorNetlist& net, double f_hz, int port) {
    TransientRun run;
    run.netlist = net;
    run.drive = {port, hz_to_rad(f_hz), 1e-3};
    run.inductance = squid::InductanceModel::Expansion;
    run.auto_timing(net.pumped() ? 220.0 : 600.0);
    return run;
}

}  // namespace

TEST(ToneAmplitude, RecoversAmplitudeAndPhase) {
    const double dt = 1e-12;
    const auto v = sampled_tone(0.37, 7.1e9, 0.8, dt, 40000);
    const Complex a = tone_amplitude(v, dt, hz_to_rad(7.1e9));
    EXPECT_NEAR(std::abs(a), 0.37, 1e-4);
    EXPECT_NEAR(std::arg(a), 0.8, 1e-3);
    const Complex r = tone_amplitude(v, dt, hz_to_rad(7.1e9), Window::Rectangular);
    EXPECT_NEAR(std::abs(r), 0.37, 1e-3);
}

TEST(ToneAmplitude, RejectsEmpty) {
    std::vector<double> v;
    EXPECT_THROW(tone_amplitude(v, 1e-12, 1.0), NumericalError);
}

TEST(PowerSpectrum, ParsevalAndPeak) {
    const double dt = 2e-12;
    auto v = sampled_tone(1.0, 5e9, 0.0, dt, 8192);
    const auto w = sampled_tone(0.1, 8e9, 0.3, dt, 8192);
    for (std::size_t k = 0; k < v.size(); ++k) v[k] += w[k];
    const auto ps = power_spectrum(v, dt, 1.0);
    EXPECT_LT(ps.parseval_error, 1e-10);
    const auto peak = std::max_element(ps.power.begin(), ps.power.end()) - ps.power.begin();
    EXPECT_NEAR(ps.freqs[peak], 5e9, ps.resolution_bw);
    EXPECT_NEAR(band_power(ps, 5e9, 0.3e9), 1.0 / 1.01, 1e-3);
    EXPECT_THROW(power_spectrum(std::span<const double>(v.data(), 100), dt, 1.0), NumericalError);
}

TEST(HannWindow, Endpoints) {
    const auto w = window_coefficients(Window::Hann, 9);
    EXPECT_NEAR(w.front(), 0.0, 1e-15);
    EXPECT_NEAR(w[4], 1.0, 1e-15);
    EXPECT_NEAR(w.back(), 0.0, 1e-15);
}

TEST(TransientRun, TimingInvariants) {
    auto net = sn::IsolatorNetlist{};
    net = build_isolator(testing_support::three_pole_design(InverterRealization::CapacitivePi));
    apply_pump_plan(PumpPlan::uniform(3, 0.064 * kPi, hz_to_rad(691e6), {0, 1, 2}), net);
    auto run = lumped_run(net, 7.2e9, 1);
    EXPECT_NEAR(run.max_frequency_hz(), 7.2e9 + 2 * 691e6, 1.0);
    EXPECT_NEAR(run.step * 64.0 * run.max_frequency_hz(), 1.0, 1e-12);
    EXPECT_NO_THROW(run.validate());
    run.step *= 1.5;
    EXPECT_THROW(run.validate(), InvalidParameter);
    run.auto_timing(100.0);
    EXPECT_THROW(run.validate(), InvalidParameter);
}

TEST(TransientRun, RejectsIdealInverters) {
    auto run = lumped_run(build_isolator(testing_support::three_pole_design()), 7.2e9, 1);
    EXPECT_THROW(simulate(run), InvalidParameter);
}

TEST(TransientRun, UnpumpedAgreesWithSpectralModel) {
    const auto net = build_isolator(testing_support::three_pole_design(InverterRealization::CapacitivePi));
    for (double f : {7.0e9, 7.4e9}) {
        const auto fwd = simulate(lumped_run(net, f, 1));
        const auto rev = simulate(lumped_run(net, f, 2));
        const auto est = extract_sideband_sparams(fwd, rev, 0.0, 0);
        const auto sp = sn::network_sparams(net, hz_to_rad(f));
        EXPECT_NEAR(std::abs(est.s21_00()), std::abs(sp.s21.at(0, 0)), 5e-3) << f;
        EXPECT_NEAR(std::abs(est.s11_00()), std::abs(sp.s11.at(0, 0)), 5e-3) << f;
        EXPECT_NEAR(std::abs(est.s12_00()), std::abs(sp.s12.at(0, 0)), 5e-3) << f;

        const auto pb = power_balance(fwd);
        EXPECT_NEAR((pb.reflected + pb.transmitted) / pb.incident, 1.0, 1e-2) << f;
    }
}

TEST(TransientRun, PumpedCenterToneTracksSpectralModel) {
    auto net = build_isolator(testing_support::three_pole_design(InverterRealization::CapacitivePi));
    net.n_sidebands = 3;
    apply_pump_plan(PumpPlan::uniform(3, 0.064 * kPi, hz_to_rad(691e6),
                                      {0.0, deg_to_rad(45.0), deg_to_rad(90.0)}), net);
    const double f = 7.15e9;
    const auto fwd = simulate(lumped_run(net, f, 1));
    const auto rev = simulate(lumped_run(net, f, 2));
    const auto est = extract_sideband_sparams(fwd, rev, net.pump_freq(), 2, 0.05);
    const auto sp = sn::network_sparams(net, hz_to_rad(f));
    EXPECT_NEAR(to_db(est.s21_00()), to_db(sp.s21.at(0, 0)), 0.5);
    EXPECT_NEAR(to_db(est.s12_00()), to_db(sp.s12.at(0, 0)), 0.5);
}
