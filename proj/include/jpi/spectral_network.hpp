#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "jpi/spectral_matrix.hpp"
#include "jpi/squid.hpp"

namespace jpi::spectral_network {

/// Block ABCD matrix over sideband space, evaluated at one signal frequency.
struct SpectralABCD {
    SpectralMatrix a, b, c, d;
    double omega = 0.0;  // signal angular frequency the blocks belong to

    int sidebands() const { return a.sidebands(); }
    static SpectralABCD identity(int n_sidebands, double omega);
};

/// Ordered product lhs * rhs (lhs nearer port 1).
SpectralABCD operator*(const SpectralABCD& lhs, const SpectralABCD& rhs);

/// S_ij^{np}: wave leaving port i at omega + n w_m per wave entering port j at
/// omega + p w_m. All sidebands see the same real reference impedance.
struct SpectralSParams {
    SpectralMatrix s11, s21, s12, s22;
    double z0 = 50.0;
    double omega = 0.0;

    int sidebands() const { return s11.sidebands(); }
    double max_abs() const;
};

// ---------------------------------------------------------------------------
// Elements

struct SeriesCapacitor { double c; };
struct SeriesInductor { double l; };
struct SeriesResistor { double r; };
struct ShuntCapacitor { double c; };
struct ShuntInductor { double l; };
struct ShuntResistor { double r; };

/// Lossless line; `electrical_length` [rad] is kl at `ref_omega` and scales
/// linearly with each sideband's signed frequency.
struct TransmissionLine {
    double z_line;
    double electrical_length;
    double ref_omega;
};

/// Frequency-independent admittance inverter, ABCD [[0, i/J], [iJ, 0]].
struct IdealInverter { double j; };

/// Shunt pole: capacitor c_g in parallel with (l_g in series with SQUID
/// `squid`). `squid` < 0 leaves a plain inductor l_g.
struct ShuntPole {
    double c_g = 0.0;
    double l_g = 0.0;
    int squid = -1;
};

using Element = std::variant<SeriesCapacitor, SeriesInductor, SeriesResistor, ShuntCapacitor,
                             ShuntInductor, ShuntResistor, TransmissionLine, IdealInverter,
                             ShuntPole>;

std::string element_name(const Element& e);

/// Ordered two-port chain between port 1 and port 2 plus the SQUIDs the
/// poles refer to.
struct IsolatorNetlist {
    std::vector<Element> elements;
    std::vector<squid::SquidParams> squids;
    double z0 = 50.0;
    int n_sidebands = 2;

    /// Throws on an empty chain, dangling SQUID references, non-physical
    /// element values, or modulated SQUIDs that disagree on pump frequency.
    void validate() const;

    /// Common pump frequency defining the sideband grid (0 when nothing is pumped).
    double pump_freq() const;
    bool pumped() const;
};

SpectralABCD shunt_abcd(const SpectralMatrix& z, double omega = 0.0);

/// Two-port block for one element at signal omega. Sideband-preserving
/// elements give diagonal blocks.
SpectralABCD element_abcd(const Element& e, std::span<const squid::SquidParams> squids,
                          double omega, double omega_m, int n_sidebands);

/// Shunt admittance of a pole over sideband space.
SpectralMatrix pole_admittance(const ShuntPole& pole, std::span<const squid::SquidParams> squids,
                               double omega, double omega_m, int n_sidebands);

SpectralABCD cascade(std::span<const SpectralABCD> chain);

SpectralSParams to_sparams(const SpectralABCD& abcd, double z0);

struct Directionality {
    double linear;
    double db;
    bool complete_suppression;
};

/// |S21^00| / |S12^00|.
Directionality directionality(const SpectralSParams& sp);

SpectralABCD network_abcd(const IsolatorNetlist& net, double omega);
SpectralSParams network_sparams(const IsolatorNetlist& net, double omega);

/// Evaluates every grid point (angular frequencies); parallel over the grid,
/// results in grid order.
std::vector<SpectralSParams> isolator_sparams(const IsolatorNetlist& net,
                                              std::span<const double> omegas);

/// Shunt SQUID, series capacitor, shunt SQUID between z0 ports.
SpectralSParams two_squid_circuit(const squid::SquidParams& s1, const squid::SquidParams& s2,
                                  double coupling_c, double omega, double z0, int n_sidebands);

/// Ideal interstage diplexer: passes n = 0 unchanged between its ports and
/// terminates every other sideband in a matched load.
SpectralSParams ideal_diplexer(int n_sidebands, double z0, double omega);

/// Redheffer star product: port 2 of `first` joined to port 1 of `second`.
SpectralSParams connect(const SpectralSParams& first, const SpectralSParams& second);

/// netA -> diplexer -> netB over a common grid. When the two stages share
/// sideband grid and pump frequency the full sideband structure is kept;
/// otherwise the composite is returned at N = 0 (the diplexer removes all
/// other sidebands between stages).
std::vector<SpectralSParams> cascade_isolators(const IsolatorNetlist& net_a,
                                               const IsolatorNetlist& net_b,
                                               std::span<const double> omegas);

SpectralSParams cascade_with_diplexer(const SpectralSParams& a, const SpectralSParams& b,
                                      bool same_grid);

/// Center-sideband figures at one frequency.
struct PointMetrics {
    double s21_db, s12_db, s11_db, s22_db;
    double d_db;   // s21_db - s12_db (capped)
    double il_db;  // -s21_db
    double rl_db;  // -max(s11_db, s22_db)
};

PointMetrics point_metrics(const SpectralSParams& sp);

std::vector<double> linspace(double start, double stop, int points);

}  // namespace jpi::spectral_network
