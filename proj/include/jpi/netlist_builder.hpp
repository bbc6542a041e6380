#pragma once

#include "jpi/filter_synthesis.hpp"
#include "jpi/pump_plan.hpp"
#include "jpi/spectral_network.hpp"

namespace jpi {

enum class InverterRealization {
    Ideal,         // frequency-independent J inverters
    QuarterWave,   // 1/J lines, 90 degrees at the center frequency
    CapacitivePi,  // series capacitors, negative shunt parts absorbed in the poles
};

struct IsolatorDesign {
    FilterSpec filter;
    std::vector<double> pole_impedances;  // empty: direct-Z0-coupled synthesis
    InverterRealization realization = InverterRealization::Ideal;
    double squid_fraction = 1.0;
    double beta = 0.3 * 3.14159265358979323846;  // DC flux phase at every SQUID
    int n_sidebands = 2;
};

/// Synthesizes the filter and lays out inverter / SQUID-loaded pole chain.
/// SQUIDs are sized so each pole resonates at the center frequency at DC
/// bias; the netlist starts unpumped.
spectral_network::IsolatorNetlist build_isolator(const IsolatorDesign& design);

spectral_network::IsolatorNetlist build_isolator(const IsolatorDesign& design, const PumpPlan& plan);

}  // namespace jpi
