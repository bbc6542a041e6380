#include "jpi/netlist_builder.hpp"

#include <cmath>

#include "jpi/errors.hpp"
#include "jpi/units.hpp"

namespace jpi {

namespace sn = spectral_network;

sn::IsolatorNetlist build_isolator(const IsolatorDesign& design) {
    const FilterSpec& f = design.filter;
    const auto syn = filter_synthesis::synthesize(f, design.pole_impedances);
    const int n = f.order;
    const double w0 = hz_to_rad(f.center_freq);

    sn::IsolatorNetlist net;
    net.z0 = f.z0;
    net.n_sidebands = design.n_sidebands;

    std::vector<sn::ShuntPole> poles;
    for (int k = 0; k < n; ++k) {
        squid::SquidParams s;
        s.beta = design.beta;
        const auto r = filter_synthesis::realize_pole(syn.pole_impedances[k], f.center_freq, s,
                                                      design.squid_fraction);
        poles.push_back({r.c_g, r.l_g, k});
        net.squids.push_back(r.squid);
    }

    const auto& j = syn.inverters;
    switch (design.realization) {
        case InverterRealization::Ideal:
            for (int k = 0; k < n; ++k) {
                net.elements.push_back(sn::IdealInverter{j[k]});
                net.elements.push_back(poles[k]);
            }
            net.elements.push_back(sn::IdealInverter{j[n]});
            break;
        case InverterRealization::QuarterWave:
            for (int k = 0; k < n; ++k) {
                net.elements.push_back(sn::TransmissionLine{1.0 / j[k], kPi / 2, w0});
                net.elements.push_back(poles[k]);
            }
            net.elements.push_back(sn::TransmissionLine{1.0 / j[n], kPi / 2, w0});
            break;
        case InverterRealization::CapacitivePi: {
            // End couplings see the resistive port, so their series capacitor is
            // enlarged and the effective shunt loading is C / (1 + (w0 C Z0)^2).
            auto end_coupling = [&](double jj, double& c_series, double& c_load) {
                const double x = jj * f.z0;
                if (x >= 1.0)
                    throw Infeasible("end inverter J*Z0 >= 1 cannot be realized with a series capacitor");
                c_series = jj / (w0 * std::sqrt(1.0 - x * x));
                const double y = w0 * c_series * f.z0;
                c_load = c_series / (1.0 + y * y);
            };
            std::vector<double> series(n + 1);
            double load_in = 0.0, load_out = 0.0;
            end_coupling(j[0], series[0], load_in);
            end_coupling(j[n], series[n], load_out);
            for (int k = 1; k < n; ++k) series[k] = j[k] / w0;
            for (int k = 0; k < n; ++k) {
                double c = poles[k].c_g - series[k] * (k == 0 ? 0.0 : 1.0) -
                           series[k + 1] * (k == n - 1 ? 0.0 : 1.0);
                if (k == 0) c -= load_in;
                if (k == n - 1) c -= load_out;
                if (c <= 0.0)
                    throw Infeasible("coupling capacitance exceeds pole " + std::to_string(k + 1) +
                                     " capacitance");
                poles[k].c_g = c;
            }
            for (int k = 0; k < n; ++k) {
                net.elements.push_back(sn::SeriesCapacitor{series[k]});
                net.elements.push_back(poles[k]);
            }
            net.elements.push_back(sn::SeriesCapacitor{series[n]});
            break;
        }
    }
    net.validate();
    return net;
}

sn::IsolatorNetlist build_isolator(const IsolatorDesign& design, const PumpPlan& plan) {
    auto net = build_isolator(design);
    apply_pump_plan(plan, net);
    net.validate();
    return net;
}

}  // namespace jpi
