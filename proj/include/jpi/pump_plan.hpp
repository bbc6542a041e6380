#pragma once

#include <vector>

#include "jpi/spectral_network.hpp"

namespace jpi {

struct PumpTone {
    double alpha = 0.0;      // RF flux amplitude [rad]
    double pump_freq = 0.0;  // [rad/s]
    double phase = 0.0;      // [rad]
};

/// One tone per SQUID, in netlist order.
struct PumpPlan {
    std::vector<PumpTone> tones;
    bool shared_freq = true;

    /// Throws InvalidParameter when `shared_freq` is set but the tones disagree.
    void validate() const;

    static PumpPlan uniform(int count, double alpha, double pump_freq,
                            const std::vector<double>& phases);

    PumpPlan with_phase_offset(double offset) const;
    PumpPlan mirrored() const;  // every phase negated
};

/// Copies alpha / frequency / phase of each tone onto the netlist SQUIDs.
void apply_pump_plan(const PumpPlan& plan, spectral_network::IsolatorNetlist& net);

PumpPlan pump_plan_of(const spectral_network::IsolatorNetlist& net);

}  // namespace jpi
