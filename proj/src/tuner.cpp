#include "jpi/tuner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "jpi/errors.hpp"
#include "jpi/units.hpp"
#include "parallel.hpp"

namespace jpi::tuner {

namespace sn = spectral_network;

void TuneObjective::validate() const {
    require_finite(band.center, "objective.band.center");
    require_finite(band.iso_bw, "objective.band.iso_bw");
    require_finite(min_directionality_db, "objective.min_directionality_db");
    require_finite(max_insertion_loss_db, "objective.max_insertion_loss_db");
    require_finite(min_return_loss_db, "objective.min_return_loss_db");
    require_finite(il_weight, "objective.il_weight");
    require_finite(rl_weight, "objective.rl_weight");
    if (band.center <= 0.0 || band.iso_bw <= 0.0)
        throw InvalidParameter("objective band needs a positive center and width");
    if (band.iso_bw >= 2.0 * band.center) throw InvalidParameter("objective band reaches zero frequency");
    if (band_points < 2) throw InvalidParameter("objective needs at least two band points");
    if (il_weight < 0.0 || rl_weight < 0.0) throw InvalidParameter("penalty weights must be non-negative");
}

std::vector<double> TuneObjective::band_omegas() const {
    return sn::linspace(band.center - band.iso_bw / 2.0, band.center + band.iso_bw / 2.0, band_points);
}

BandMetrics evaluate_band(const sn::IsolatorNetlist& net, std::span<const double> omegas) {
    if (omegas.empty()) throw InvalidParameter("no frequencies to evaluate");
    BandMetrics m{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
                  std::numeric_limits<double>::infinity()};
    for (double w : omegas) {
        const auto p = sn::point_metrics(sn::network_sparams(net, w));
        m.min_d_db = std::min(m.min_d_db, p.d_db);
        m.max_il_db = std::max(m.max_il_db, p.il_db);
        m.min_rl_db = std::min(m.min_rl_db, p.rl_db);
    }
    return m;
}

double score(const BandMetrics& m, const TuneObjective& obj) {
    return m.min_d_db - obj.il_weight * std::max(0.0, m.max_il_db - obj.max_insertion_loss_db) -
           obj.rl_weight * std::max(0.0, obj.min_return_loss_db - m.min_rl_db);
}

bool feasible(const BandMetrics& m, const TuneObjective& obj) {
    return m.min_d_db >= obj.min_directionality_db && m.max_il_db <= obj.max_insertion_loss_db &&
           m.min_rl_db >= obj.min_return_loss_db;
}

// ---------------------------------------------------------------------------
// Sweeps

std::vector<double> SweepAxis::values() const {
    if (points < 1) throw InvalidParameter("axis '" + name + "' needs at least one point");
    require_finite(start, "axis start");
    require_finite(stop, "axis stop");
    return sn::linspace(start, stop, points);
}

std::vector<std::string> valid_axes(const SweepTarget& target) {
    struct V {
        std::vector<std::string> operator()(const CoupledModeTarget&) const {
            return {"beta_p", "beta_c", "pump_freq_hz", "phi_deg", "signal_freq_hz"};
        }
        std::vector<std::string> operator()(const NetworkTarget& t) const {
            std::vector<std::string> v{"alpha_pi", "pump_freq_hz", "dphase_deg", "beta_pi"};
            for (std::size_t k = 1; k <= t.netlist.squids.size(); ++k)
                v.push_back("phase_deg:" + std::to_string(k));
            return v;
        }
        std::vector<std::string> operator()(const TwoSquidTarget&) const {
            return {"coupling_c", "dphase_deg", "alpha_pi", "beta_pi", "pump_freq_hz", "signal_freq_hz"};
        }
    };
    return std::visit(V{}, target);
}

namespace {

[[noreturn]] void unknown_axis(const SweepTarget& target, const std::string& axis) {
    std::string list;
    for (const auto& a : valid_axes(target)) list += (list.empty() ? "" : ", ") + a;
    throw InvalidParameter("unknown sweep axis '" + axis + "'; valid axes: " + list);
}

}  // namespace

SweepTarget apply_axis(const SweepTarget& target, const std::string& axis, double v) {
    require_finite(v, axis.c_str());
    if (auto* cm = std::get_if<CoupledModeTarget>(&target)) {
        CoupledModeTarget t = *cm;
        const auto& g = t.graph;
        if (axis == "beta_p") {
            t.graph = g.with_pump(v, g.phi(), g.pump_freq());
        } else if (axis == "pump_freq_hz") {
            t.graph = g.with_pump(g.beta_p(), g.phi(), hz_to_rad(v));
        } else if (axis == "phi_deg") {
            t.graph = g.with_pump(g.beta_p(), deg_to_rad(v), g.pump_freq());
        } else if (axis == "beta_c") {
            t.graph = coupled_mode::ModeGraph(g.resonance(), g.port_rates(), v, g.beta_p(), g.phi(),
                                              g.pump_freq());
        } else if (axis == "signal_freq_hz") {
            t.signal_freq = hz_to_rad(v);
        } else {
            unknown_axis(target, axis);
        }
        return t;
    }
    if (auto* nt = std::get_if<NetworkTarget>(&target)) {
        NetworkTarget t = *nt;
        auto& sq = t.netlist.squids;
        if (axis == "alpha_pi") {
            for (auto& s : sq) s.alpha = v * kPi;
        } else if (axis == "pump_freq_hz") {
            for (auto& s : sq) s.pump_freq = hz_to_rad(v);
        } else if (axis == "beta_pi") {
            for (auto& s : sq) s.beta = v * kPi;
        } else if (axis == "dphase_deg") {
            for (std::size_t k = 0; k < sq.size(); ++k) sq[k].pump_phase = deg_to_rad(v) * k;
        } else if (axis.rfind("phase_deg:", 0) == 0) {
            int idx = 0;
            try {
                idx = std::stoi(axis.substr(10));
            } catch (...) {
                unknown_axis(target, axis);
            }
            if (idx < 1 || idx > static_cast<int>(sq.size())) unknown_axis(target, axis);
            sq[idx - 1].pump_phase = deg_to_rad(v);
        } else {
            unknown_axis(target, axis);
        }
        return t;
    }
    TwoSquidTarget t = std::get<TwoSquidTarget>(target);
    if (axis == "coupling_c") {
        t.coupling_c = v;
    } else if (axis == "dphase_deg") {
        t.s2.pump_phase = t.s1.pump_phase + deg_to_rad(v);
    } else if (axis == "alpha_pi") {
        t.s1.alpha = t.s2.alpha = v * kPi;
    } else if (axis == "beta_pi") {
        t.s1.beta = t.s2.beta = v * kPi;
    } else if (axis == "pump_freq_hz") {
        t.s1.pump_freq = t.s2.pump_freq = hz_to_rad(v);
    } else if (axis == "signal_freq_hz") {
        t.omega = hz_to_rad(v);
    } else {
        unknown_axis(target, axis);
    }
    return t;
}

BandMetrics evaluate(const SweepTarget& target) {
    auto from_point = [](const sn::PointMetrics& p) {
        return BandMetrics{p.d_db, p.il_db, p.rl_db};
    };
    if (auto* cm = std::get_if<CoupledModeTarget>(&target)) {
        const auto s = coupled_mode::mode_sparams(cm->graph, cm->signal_freq);
        auto db = [](Complex z) { return std::max(to_db(z), -coupled_mode::kDirectionalityCapDb); };
        const double s21 = db(s.forward());
        const double s12 = db(s.reverse());
        const double refl = std::max(db(s.S(0, 0)), db(s.S(1, 1)));
        return {std::clamp(s21 - s12, -coupled_mode::kDirectionalityCapDb,
                           coupled_mode::kDirectionalityCapDb),
                -s21, -refl};
    }
    if (auto* nt = std::get_if<NetworkTarget>(&target)) {
        nt->netlist.validate();
        return evaluate_band(nt->netlist, nt->omegas);
    }
    const auto& t = std::get<TwoSquidTarget>(target);
    return from_point(sn::point_metrics(
        sn::two_squid_circuit(t.s1, t.s2, t.coupling_c, t.omega, t.z0, t.n_sidebands)));
}

SweepResult sweep(const std::vector<SweepAxis>& axes, const SweepTarget& target) {
    if (axes.empty() || axes.size() > 2) throw InvalidParameter("sweeps take one or two axes");
    const auto valid = valid_axes(target);
    for (const auto& a : axes)
        if (std::find(valid.begin(), valid.end(), a.name) == valid.end()) unknown_axis(target, a.name);
    const auto xs = axes[0].values();
    const auto ys = axes.size() == 2 ? axes[1].values() : std::vector<double>{0.0};
    SweepResult r;
    r.axes = axes;
    r.points.resize(xs.size() * ys.size());
    detail::parallel_for(r.points.size(), [&](std::size_t k) {
        const double x = xs[k / ys.size()];
        const double y = ys[k % ys.size()];
        SweepTarget t = apply_axis(target, axes[0].name, x);
        if (axes.size() == 2) t = apply_axis(t, axes[1].name, y);
        r.points[k] = {x, y, evaluate(t)};
    });
    return r;
}

// ---------------------------------------------------------------------------
// Nelder-Mead

SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> x0, const std::vector<double>& lo,
                          const std::vector<double>& hi, const std::vector<bool>& periodic,
                          const SimplexOptions& opt, const std::function<void(double)>& on_eval) {
    const std::size_t n = x0.size();
    if (lo.size() != n || hi.size() != n || periodic.size() != n)
        throw DimensionMismatch("simplex bounds do not match the start point");
    // Periodic coordinates stay unwrapped in the simplex so centroids are
    // taken on the covering line; they are wrapped only when evaluated.
    auto clamp = [&](std::vector<double>& x) {
        for (std::size_t k = 0; k < n; ++k)
            if (!periodic[k]) x[k] = std::clamp(x[k], lo[k], hi[k]);
    };
    auto wrapped = [&](std::vector<double> x) {
        for (std::size_t k = 0; k < n; ++k) {
            if (!periodic[k]) continue;
            const double w = hi[k] - lo[k];
            x[k] = lo[k] + std::fmod(std::fmod(x[k] - lo[k], w) + w, w);
        }
        return x;
    };
    int evals = 0;
    auto eval = [&](std::vector<double>& x) {
        clamp(x);
        const double v = f(wrapped(x));
        ++evals;
        if (on_eval) on_eval(v);
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    };
    clamp(x0);
    if (opt.max_evals <= 0) return {wrapped(x0), std::numeric_limits<double>::quiet_NaN(), 0};
    if (n == 0) return {x0, eval(x0), evals};

    std::vector<std::vector<double>> pts(n + 1, x0);
    std::vector<double> vals(n + 1);
    vals[0] = eval(pts[0]);
    for (std::size_t k = 0; k < n && evals < opt.max_evals; ++k) {
        const double step = opt.initial_step * (hi[k] - lo[k]);
        pts[k + 1][k] += (pts[k + 1][k] + step > hi[k] && !periodic[k]) ? -step : step;
        vals[k + 1] = eval(pts[k + 1]);
    }
    auto order = [&] {
        std::vector<std::size_t> idx(n + 1);
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return vals[a] < vals[b]; });
        std::vector<std::vector<double>> p2;
        std::vector<double> v2;
        for (auto i : idx) {
            p2.push_back(pts[i]);
            v2.push_back(vals[i]);
        }
        pts = std::move(p2);
        vals = std::move(v2);
    };
    while (evals < opt.max_evals) {
        order();
        if (std::abs(vals[n] - vals[0]) <= opt.tol * (1.0 + std::abs(vals[0]))) break;
        std::vector<double> c(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) c[k] += pts[i][k] / n;
        auto along = [&](double t) {
            std::vector<double> x(n);
            for (std::size_t k = 0; k < n; ++k) x[k] = c[k] + t * (pts[n][k] - c[k]);
            return x;
        };
        auto xr = along(-1.0);
        const double fr = eval(xr);
        if (fr < vals[0]) {
            if (evals >= opt.max_evals) {
                pts[n] = xr;
                vals[n] = fr;
                break;
            }
            auto xe = along(-2.0);
            const double fe = eval(xe);
            if (fe < fr) {
                pts[n] = xe;
                vals[n] = fe;
            } else {
                pts[n] = xr;
                vals[n] = fr;
            }
        } else if (fr < vals[n - 1]) {
            pts[n] = xr;
            vals[n] = fr;
        } else {
            if (evals >= opt.max_evals) break;
            const bool outside = fr < vals[n];
            auto xc = along(outside ? -0.5 : 0.5);
            const double fc = eval(xc);
            if (fc < std::min(fr, vals[n])) {
                pts[n] = xc;
                vals[n] = fc;
            } else {
                for (std::size_t i = 1; i <= n && evals < opt.max_evals; ++i) {
                    for (std::size_t k = 0; k < n; ++k) pts[i][k] = pts[0][k] + 0.5 * (pts[i][k] - pts[0][k]);
                    vals[i] = eval(pts[i]);
                }
            }
        }
    }
    order();
    return {wrapped(pts[0]), vals[0], evals};
}

// ---------------------------------------------------------------------------
// Optimizer

namespace {

struct RestartOutcome {
    PumpPlan plan;
    BandMetrics metrics;
    double score = -std::numeric_limits<double>::infinity();
    std::vector<double> scores;  // every evaluation in order
};

double wrap_phase(double p) {
    p = std::fmod(p, kTwoPi);
    return p < 0.0 ? p + kTwoPi : p;
}

}  // namespace

OptimizeResult optimize(const PumpPlan& seed, const TuneObjective& objective,
                        const sn::IsolatorNetlist& netlist, const OptimizerOptions& options) {
    objective.validate();
    seed.validate();
    if (seed.tones.size() != netlist.squids.size())
        throw DimensionMismatch("seed plan needs one tone per SQUID");
    if (seed.tones.empty()) throw InvalidParameter("netlist has no SQUIDs to pump");
    if (options.restarts < 1) throw InvalidParameter("optimizer needs at least one restart");
    if (options.evals_per_restart < 0) throw InvalidParameter("evaluation budget must be non-negative");
    if (!(options.alpha_max > options.alpha_min) || options.alpha_min < 0.0)
        throw InvalidParameter("alpha bounds must satisfy 0 <= min < max");

    double fmin = options.freq_min, fmax = options.freq_max;
    if (fmin <= 0.0 || fmax <= 0.0) {
        const auto w = coupled_mode::pump_window(objective.band);
        fmin = w.min_pump;
        fmax = w.max_pump;
    }
    if (!(fmax >= fmin)) throw InvalidParameter("pump frequency bounds are inverted");
    const bool tune_f = options.tune_frequency && fmax > fmin;
    const bool tune_a = options.tune_amplitude;
    const auto omegas = objective.band_omegas();
    const int np = static_cast<int>(seed.tones.size()) - 1;  // first phase is the reference

    auto plan_from = [&](const std::vector<double>& x, const PumpPlan& base) {
        PumpPlan p = base;
        for (int k = 0; k < np; ++k) p.tones[k + 1].phase = p.tones[0].phase + x[k];
        std::size_t idx = np;
        if (tune_a) {
            const double a = x[idx++];
            for (auto& t : p.tones) t.alpha = a;
        }
        if (tune_f) {
            const double f = x[idx++];
            for (auto& t : p.tones) t.pump_freq = f;
        }
        return p;
    };
    auto metrics_of = [&](const PumpPlan& p) {
        auto net = netlist;
        apply_pump_plan(p, net);
        try {
            return evaluate_band(net, omegas);
        } catch (const SingularNetwork&) {
            return BandMetrics{-coupled_mode::kDirectionalityCapDb, coupled_mode::kDirectionalityCapDb,
                               -coupled_mode::kDirectionalityCapDb};
        }
    };

    std::vector<RestartOutcome> outcomes(options.restarts);
    detail::parallel_for(outcomes.size(), [&](std::size_t r) {
        std::mt19937_64 rng(options.seed + 0x9E3779B97F4A7C15ull * (r + 1));
        std::uniform_real_distribution<double> u(0.0, 1.0);
        PumpPlan start = seed;
        if (r > 0) {
            for (int k = 0; k < np; ++k) start.tones[k + 1].phase = start.tones[0].phase + kTwoPi * u(rng);
            if (tune_a) {
                const double a = options.alpha_min + (options.alpha_max - options.alpha_min) * u(rng);
                for (auto& t : start.tones) t.alpha = a;
            }
            if (tune_f) {
                const double f = fmin + (fmax - fmin) * u(rng);
                for (auto& t : start.tones) t.pump_freq = f;
            }
        }
        RestartOutcome& out = outcomes[r];
        auto record = [&](const PumpPlan& p, const BandMetrics& m) {
            const double s = score(m, objective);
            out.scores.push_back(s);
            if (s > out.score) {
                out.score = s;
                out.plan = p;
                out.metrics = m;
            }
            return s;
        };
        record(start, metrics_of(start));
        const int budget = options.evals_per_restart - 1;
        if (budget <= 0) return;

        // Phases alone first, on the torus.
        std::vector<double> x, lo, hi;
        std::vector<bool> per;
        for (int k = 0; k < np; ++k) {
            x.push_back(wrap_phase(start.tones[k + 1].phase - start.tones[0].phase));
            lo.push_back(0.0);
            hi.push_back(kTwoPi);
            per.push_back(true);
        }
        PumpPlan base = start;
        if (np > 0) {
            auto f1 = [&](const std::vector<double>& v) {
                PumpPlan p = base;
                for (int k = 0; k < np; ++k) p.tones[k + 1].phase = p.tones[0].phase + v[k];
                return -record(p, metrics_of(p));
            };
            const auto res = nelder_mead(f1, x, lo, hi, per, {budget / 2, 0.3, 1e-7});
            x = res.x;
        }
        // Then everything together.
        if (tune_a) {
            x.push_back(std::clamp(start.tones[0].alpha, options.alpha_min, options.alpha_max));
            lo.push_back(options.alpha_min);
            hi.push_back(options.alpha_max);
            per.push_back(false);
        }
        if (tune_f) {
            x.push_back(std::clamp(start.tones[0].pump_freq, fmin, fmax));
            lo.push_back(fmin);
            hi.push_back(fmax);
            per.push_back(false);
        }
        const int remaining = options.evals_per_restart - static_cast<int>(out.scores.size());
        if (remaining > 0 && !x.empty()) {
            auto f2 = [&](const std::vector<double>& v) {
                const PumpPlan p = plan_from(v, base);
                return -record(p, metrics_of(p));
            };
            nelder_mead(f2, x, lo, hi, per, {remaining, 0.15, 1e-9});
        }
    });

    OptimizeResult res;
    res.score = -std::numeric_limits<double>::infinity();
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& o : outcomes) {
        for (double s : o.scores) {
            best = std::max(best, s);
            res.trace.push_back({res.evaluations++, s, best});
        }
        if (o.score > res.score) {
            res.score = o.score;
            res.best = o.plan;
            res.metrics = o.metrics;
        }
    }
    res.feasible = feasible(res.metrics, objective);

    std::vector<const RestartOutcome*> sorted;
    for (const auto& o : outcomes) sorted.push_back(&o);
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](auto a, auto b) { return a->score > b->score; });
    for (const auto* o : sorted) {
        bool dup = false;
        for (const auto& q : res.optima) {
            if (std::abs(q.score - o->score) > 1e-3) continue;
            bool same = true;
            for (std::size_t k = 1; k < o->plan.tones.size(); ++k) {
                const double d1 = o->plan.tones[k].phase - o->plan.tones[0].phase;
                const double d2 = q.plan.tones[k].phase - q.plan.tones[0].phase;
                const double diff = std::abs(std::remainder(d1 - d2, kTwoPi));
                if (diff > deg_to_rad(1.0)) same = false;
            }
            if (same) dup = true;
        }
        if (!dup) res.optima.push_back({o->plan, o->score, o->metrics});
    }
    return res;
}

PumpPlan amplification_preset(const sn::IsolatorNetlist& netlist, double center_freq, double alpha) {
    require_finite(center_freq, "center frequency");
    if (center_freq <= 0.0) throw InvalidParameter("center frequency must be positive");
    const int n = static_cast<int>(netlist.squids.size());
    if (n == 0) throw InvalidParameter("amplification preset needs a SQUID-loaded netlist");
    std::vector<double> phases(n);
    for (int k = 0; k < n; ++k) phases[k] = kTwoPi * k / n;
    return PumpPlan::uniform(n, alpha, 2.0 * center_freq, phases);
}

CompliantBand longest_compliant_band(std::span<const double> freqs_hz,
                                     std::span<const sn::PointMetrics> metrics,
                                     const TuneObjective& obj) {
    if (freqs_hz.size() != metrics.size()) throw DimensionMismatch("grid and metrics differ in length");
    CompliantBand best;
    std::size_t run_start = 0;
    bool in_run = false;
    for (std::size_t k = 0; k <= freqs_hz.size(); ++k) {
        const bool ok = k < freqs_hz.size() && metrics[k].d_db >= obj.min_directionality_db &&
                        metrics[k].il_db <= obj.max_insertion_loss_db &&
                        metrics[k].rl_db >= obj.min_return_loss_db;
        if (ok && !in_run) {
            run_start = k;
            in_run = true;
        } else if (!ok && in_run) {
            const CompliantBand c{freqs_hz[run_start], freqs_hz[k - 1]};
            if (c.width_hz() > best.width_hz()) best = c;
            in_run = false;
        }
    }
    return best;
}

}  // namespace jpi::tuner
