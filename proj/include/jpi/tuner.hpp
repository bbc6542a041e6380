#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "jpi/coupled_mode.hpp"
#include "jpi/pump_plan.hpp"
#include "jpi/spectral_network.hpp"

namespace jpi::tuner {

struct TuneObjective {
    coupled_mode::IsolationBand band{};  // rad/s; iso_bw is the evaluated span
    double min_directionality_db = 15.0;
    double max_insertion_loss_db = 5.0;
    double min_return_loss_db = 10.0;
    int band_points = 17;
    double il_weight = 2.0;  // hinge penalty weights per dB of violation
    double rl_weight = 2.0;

    void validate() const;
    std::vector<double> band_omegas() const;
};

/// Worst-case center-sideband figures over a set of frequencies.
struct BandMetrics {
    double min_d_db = 0.0;
    double max_il_db = 0.0;
    double min_rl_db = 0.0;
};

BandMetrics evaluate_band(const spectral_network::IsolatorNetlist& net,
                          std::span<const double> omegas);

/// Scalar objective (larger is better): min D minus hinge penalties.
double score(const BandMetrics& m, const TuneObjective& obj);
bool feasible(const BandMetrics& m, const TuneObjective& obj);

// ---------------------------------------------------------------------------
// Sweeps

struct SweepAxis {
    std::string name;
    double start = 0.0;
    double stop = 0.0;
    int points = 31;
    std::vector<double> values() const;
};

struct CoupledModeTarget {
    coupled_mode::ModeGraph graph;
    double signal_freq;  // rad/s
};

struct NetworkTarget {
    spectral_network::IsolatorNetlist netlist;
    std::vector<double> omegas;  // band evaluated per point
};

struct TwoSquidTarget {
    squid::SquidParams s1, s2;
    double coupling_c;
    double omega;
    double z0 = 50.0;
    int n_sidebands = 2;
};

using SweepTarget = std::variant<CoupledModeTarget, NetworkTarget, TwoSquidTarget>;

/// Axis names accepted by the given target kind.
std::vector<std::string> valid_axes(const SweepTarget& target);

/// Copy of `target` with one axis set. Throws InvalidParameter listing the
/// valid axes for unknown names.
SweepTarget apply_axis(const SweepTarget& target, const std::string& axis, double value);

BandMetrics evaluate(const SweepTarget& target);

struct SweepPoint {
    double x = 0.0;
    double y = 0.0;  // 0 for one-axis sweeps
    BandMetrics metrics;
};

struct SweepResult {
    std::vector<SweepAxis> axes;
    std::vector<SweepPoint> points;  // row-major: first axis outer
};

SweepResult sweep(const std::vector<SweepAxis>& axes, const SweepTarget& target);

// ---------------------------------------------------------------------------
// Optimizer

struct OptimizerOptions {
    int restarts = 8;
    int evals_per_restart = 200;
    std::uint64_t seed = 1;
    bool tune_amplitude = true;
    bool tune_frequency = true;
    double alpha_min = 0.0;
    double alpha_max = 0.15 * 3.14159265358979323846;
    double freq_min = 0.0;  // rad/s; 0 selects the pump window of the objective band
    double freq_max = 0.0;
};

struct TraceEntry {
    int evaluation;
    double score;
    double best_score;
};

struct LocalOptimum {
    PumpPlan plan;
    double score;
    BandMetrics metrics;
};

struct OptimizeResult {
    PumpPlan best;
    BandMetrics metrics;
    double score = 0.0;
    bool feasible = false;
    int evaluations = 0;
    std::vector<TraceEntry> trace;
    std::vector<LocalOptimum> optima;  // distinct restart results, best first
};

/// Phases first, then amplitude and frequency: Nelder-Mead on a phase torus
/// with bounded amplitude/frequency, from the seed and from seeded random
/// restarts. Deterministic for a given seed.
OptimizeResult optimize(const PumpPlan& seed, const TuneObjective& objective,
                        const spectral_network::IsolatorNetlist& netlist,
                        const OptimizerOptions& options = {});

/// Common pump at twice `center_freq` [rad/s] with phases staggered by
/// 360/n degrees.
PumpPlan amplification_preset(const spectral_network::IsolatorNetlist& netlist, double center_freq,
                              double alpha = 0.099 * 3.14159265358979323846);

/// Minimizes f over a box with Nelder-Mead. Coordinates flagged periodic wrap
/// onto [0, 2 pi); others are clamped to [lo, hi].
struct SimplexOptions {
    int max_evals = 200;
    double initial_step = 0.3;  // fraction of each box width
    double tol = 1e-7;
};

struct SimplexResult {
    std::vector<double> x;
    double value;
    int evals;
};

SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> x0, const std::vector<double>& lo,
                          const std::vector<double>& hi, const std::vector<bool>& periodic,
                          const SimplexOptions& opt,
                          const std::function<void(double)>& on_eval = {});

/// Longest run of consecutive grid points where all three targets hold, in Hz.
struct CompliantBand {
    double start_hz = 0.0;
    double stop_hz = 0.0;
    double width_hz() const { return stop_hz - start_hz; }
};

CompliantBand longest_compliant_band(std::span<const double> freqs_hz,
                                     std::span<const spectral_network::PointMetrics> metrics,
                                     const TuneObjective& obj);

}  // namespace jpi::tuner
