#pragma once

#include <complex>
#include <span>
#include <vector>

#include "jpi/spectral_network.hpp"
#include "jpi/squid.hpp"

namespace jpi::td_oracle {

/// How the SQUID branch relates voltage and current.
enum class VoltageRelation {
    Flux,   // V = d(L(t) i)/dt, flux linkage carried as state
    LdIdt,  // V = L(t) di/dt, the high-signal-frequency approximation
};

struct Drive {
    int port = 1;            // 1 or 2
    double omega = 0.0;      // [rad/s]
    double amplitude = 1.0;  // open-circuit source amplitude [V]
};

/// Time-domain run of a lumped netlist. Only capacitors, inductors,
/// resistors, and SQUID-loaded poles are realizable; ideal inverters and
/// transmission lines are rejected.
struct TransientRun {
    spectral_network::IsolatorNetlist netlist;
    Drive drive;
    double duration = 0.0;  // [s]
    double step = 0.0;      // [s]
    squid::InductanceModel inductance = squid::InductanceModel::Exact;
    VoltageRelation relation = VoltageRelation::Flux;
    double discard_fraction = 0.25;

    /// Highest frequency the run must resolve: drive plus two pump harmonics.
    double max_frequency_hz() const;
    /// Fills `step` and `duration` from the invariants: step = 1/(64 f_max),
    /// duration covering `pump_periods` periods of the pump (or signal when unpumped).
    void auto_timing(double pump_periods = 400.0);
    void validate() const;
};

struct Traces {
    double dt = 0.0;
    std::vector<double> v_port1;  // port node voltages
    std::vector<double> v_port2;
    std::vector<double> source;   // open-circuit drive waveform
    std::size_t discard = 0;      // first retained sample
    int driven_port = 1;
    double drive_omega = 0.0;
    double drive_amplitude = 0.0;
    double z0 = 50.0;

    /// Outgoing voltage wave at `port`: the node voltage minus the incident
    /// half of the source on the driven port.
    std::vector<double> outgoing_wave(int port) const;
};

Traces simulate(const TransientRun& run);

enum class Window { Rectangular, Hann };

std::vector<double> window_coefficients(Window w, std::size_t n);

/// Complex amplitude X of the component Re{X e^{i omega t}} in `trace`,
/// from a windowed single-frequency DFT (t = k dt).
Complex tone_amplitude(std::span<const double> trace, double dt, double omega,
                       Window w = Window::Hann, double t0 = 0.0);

struct PowerSpectrum {
    std::vector<double> freqs;     // [Hz]
    std::vector<double> power;     // linear, normalized to drive power
    std::vector<double> power_db;
    double resolution_bw = 0.0;    // [Hz]
    double parseval_error = 0.0;   // relative mismatch of time vs frequency energy
};

/// One-sided |FFT|^2 of the windowed trace normalized to (ref_amplitude)^2.
/// Throws NumericalError when fewer than `min_samples` samples remain.
PowerSpectrum power_spectrum(std::span<const double> trace, double dt, double ref_amplitude,
                             Window w = Window::Hann, std::size_t min_samples = 256);

/// Fraction of spectral power within `half_width_hz` of each frequency.
double band_power(const PowerSpectrum& ps, double center_hz, double half_width_hz);

struct SidebandEstimate {
    int n_sidebands = 0;
    double omega = 0.0;
    double omega_m = 0.0;
    std::vector<Complex> s21;  // S21^{n0}, n = -N..N (forward drive)
    std::vector<Complex> s11;  // S11^{n0}
    std::vector<Complex> s12;  // S12^{n0} (reverse drive)
    std::vector<Complex> s22;  // S22^{n0}

    Complex s21_00() const { return s21[n_sidebands]; }
    Complex s12_00() const { return s12[n_sidebands]; }
    Complex s11_00() const { return s11[n_sidebands]; }
    Complex s22_00() const { return s22[n_sidebands]; }
};

/// Ratios of outgoing to incident tone amplitudes at omega + n w_m over the
/// retained part of each trace. Throws NumericalError when the two halves of
/// the retained window disagree by more than `steady_tol` (relative).
SidebandEstimate extract_sideband_sparams(const Traces& forward, const Traces& reverse,
                                          double omega_m, int n_sidebands,
                                          double steady_tol = 0.01);

/// Time-averaged powers over the retained window: available from the
/// source, leaving the driven port, and absorbed by the opposite termination.
struct PowerBalance {
    double incident;
    double reflected;
    double transmitted;
};

PowerBalance power_balance(const Traces& tr);

}  // namespace jpi::td_oracle
