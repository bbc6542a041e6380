#include "jpi/pump_plan.hpp"

#include <cmath>

#include "jpi/errors.hpp"

namespace jpi {

void PumpPlan::validate() const {
    for (std::size_t k = 0; k < tones.size(); ++k) {
        const auto& t = tones[k];
        const std::string where = "pump " + std::to_string(k);
        if (!std::isfinite(t.alpha) || t.alpha < 0.0)
            throw InvalidParameter(where + ": alpha must be finite and non-negative");
        if (!std::isfinite(t.pump_freq) || t.pump_freq < 0.0)
            throw InvalidParameter(where + ": pump frequency must be finite and non-negative");
        if (!std::isfinite(t.phase)) throw InvalidParameter(where + ": phase must be finite");
    }
    if (shared_freq && !tones.empty()) {
        const double f = tones.front().pump_freq;
        for (const auto& t : tones)
            if (std::abs(t.pump_freq - f) > 1e-9 * std::max(f, 1.0))
                throw InvalidParameter("shared pump frequency requested but tones disagree");
    }
}

PumpPlan PumpPlan::uniform(int count, double alpha, double pump_freq,
                           const std::vector<double>& phases) {
    if (count < 0 || static_cast<int>(phases.size()) != count)
        throw InvalidParameter("need one phase per pump");
    PumpPlan p;
    for (int k = 0; k < count; ++k) p.tones.push_back({alpha, pump_freq, phases[k]});
    return p;
}

PumpPlan PumpPlan::with_phase_offset(double offset) const {
    PumpPlan p = *this;
    for (auto& t : p.tones) t.phase += offset;
    return p;
}

PumpPlan PumpPlan::mirrored() const {
    PumpPlan p = *this;
    for (auto& t : p.tones) t.phase = -t.phase;
    return p;
}

void apply_pump_plan(const PumpPlan& plan, spectral_network::IsolatorNetlist& net) {
    plan.validate();
    if (plan.tones.size() != net.squids.size())
        throw DimensionMismatch("pump plan has " + std::to_string(plan.tones.size()) +
                                " tones for " + std::to_string(net.squids.size()) + " SQUIDs");
    for (std::size_t k = 0; k < plan.tones.size(); ++k) {
        net.squids[k].alpha = plan.tones[k].alpha;
        net.squids[k].pump_freq = plan.tones[k].pump_freq;
        net.squids[k].pump_phase = plan.tones[k].phase;
    }
}

PumpPlan pump_plan_of(const spectral_network::IsolatorNetlist& net) {
    PumpPlan p;
    for (const auto& s : net.squids) p.tones.push_back({s.alpha, s.pump_freq, s.pump_phase});
    return p;
}

}  // namespace jpi
