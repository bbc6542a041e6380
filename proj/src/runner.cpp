#include "jpi/runner.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <optional>
#include <type_traits>

#include "jpi/config.hpp"
#include "jpi/errors.hpp"
#include "jpi/units.hpp"

namespace jpi {

namespace sn = spectral_network;
namespace cm = coupled_mode;
namespace td = td_oracle;
using config::Json;

namespace {

constexpr double kDbFloor = -200.0;

double db(Complex z) { return std::max(to_db(z), kDbFloor); }
double db_power(double p) { return p > 0.0 ? std::max(10.0 * std::log10(p), kDbFloor) : kDbFloor; }

bool has(const Json& j, const char* key) { return j.is_object() && j.contains(key) && !j.at(key).is_null(); }

std::string sideband_label(int n) { return std::to_string(n); }

Json plan_json(const PumpPlan& p) {
    Json tones = Json::array();
    for (const auto& t : p.tones)
        tones.push_back({{"alpha_pi", t.alpha / kPi},
                         {"pump_freq_hz", rad_to_hz(t.pump_freq)},
                         {"phase_deg", rad_to_deg(t.phase)}});
    return {{"tones", tones}, {"shared_freq", p.shared_freq}};
}

Json metrics_json(const tuner::BandMetrics& m) {
    return {{"min_directionality_db", m.min_d_db},
            {"max_insertion_loss_db", m.max_il_db},
            {"min_return_loss_db", m.min_rl_db}};
}

void squid_warnings(const sn::IsolatorNetlist& net, std::vector<std::string>& out) {
    for (std::size_t k = 0; k < net.squids.size(); ++k)
        for (const auto& w : squid::validate(net.squids[k]))
            out.push_back("squid " + std::to_string(k + 1) + ": " + w);
}

// Filter block of the root, if any; explicit netlists may omit it.
std::optional<FilterSpec> root_filter(const Json& root) {
    if (!has(root, "filter")) return std::nullopt;
    return config::parse_filter(root.at("filter"), "filter");
}

config::Grid grid_for(const Json& root, const std::optional<FilterSpec>& filter) {
    if (filter) return config::parse_grid(root, *filter);
    if (!has(root, "grid")) throw ConfigError("grid", "required when no filter block is given");
    const Json& g = root.at("grid");
    config::only_keys(g, "grid", {"start_hz", "stop_hz", "points"});
    config::Grid out{config::number(g, "start_hz", "grid"), config::number(g, "stop_hz", "grid"),
                     config::integer_or(g, "points", "grid", 201)};
    if (!(out.start_hz > 0.0)) throw ConfigError("grid.start_hz", "must be positive");
    if (out.stop_hz < out.start_hz) throw ConfigError("grid.stop_hz", "must not be below grid.start_hz");
    if (out.points < 1 || out.points > 100000) throw ConfigError("grid.points", "must lie in [1, 100000]");
    return out;
}

std::vector<std::string> sparam_columns(int n_sidebands) {
    std::vector<std::string> cols{"freq_hz", "S11_00_db", "S21_00_db", "S12_00_db", "S22_00_db", "D_db"};
    for (int n = -n_sidebands; n <= n_sidebands; ++n)
        for (int p = -n_sidebands; p <= n_sidebands; ++p)
            cols.push_back("S21_" + sideband_label(n) + "_" + sideband_label(p) + "_db");
    return cols;
}

std::vector<double> sparam_row(double f_hz, const sn::SpectralSParams& sp) {
    const auto m = sn::point_metrics(sp);
    std::vector<double> row{f_hz, m.s11_db, m.s21_db, m.s12_db, m.s22_db, m.d_db};
    const int N = sp.sidebands();
    for (int n = -N; n <= N; ++n)
        for (int p = -N; p <= N; ++p) row.push_back(db(sp.s21.at(n, p)));
    return row;
}

Table sparam_table(const std::string& name, const std::vector<double>& freqs,
                   const std::vector<sn::SpectralSParams>& sps) {
    Table t{name, sparam_columns(sps.empty() ? 0 : sps.front().sidebands()), {}};
    for (std::size_t k = 0; k < freqs.size(); ++k) t.rows.push_back(sparam_row(freqs[k], sps[k]));
    return t;
}

Json grid_summary(const std::vector<double>& freqs, const std::vector<sn::SpectralSParams>& sps,
                  double center_hz) {
    std::size_t ic = 0;
    double best_d = -std::numeric_limits<double>::infinity();
    double best_f = 0.0;
    for (std::size_t k = 0; k < freqs.size(); ++k) {
        if (std::abs(freqs[k] - center_hz) < std::abs(freqs[ic] - center_hz)) ic = k;
        const double d = sn::point_metrics(sps[k]).d_db;
        if (d > best_d) {
            best_d = d;
            best_f = freqs[k];
        }
    }
    const auto m = sn::point_metrics(sps[ic]);
    double max_abs = 0.0;
    for (const auto& sp : sps) max_abs = std::max(max_abs, sp.max_abs());
    return {{"nearest_center_hz", freqs[ic]},
            {"center", {{"S21_00_db", m.s21_db}, {"S12_00_db", m.s12_db}, {"S11_00_db", m.s11_db},
                        {"S22_00_db", m.s22_db}, {"D_db", m.d_db}}},
            {"max_directionality_db", best_d},
            {"max_directionality_freq_hz", best_f},
            {"max_spectral_magnitude", max_abs}};
}

// ---------------------------------------------------------------------------

RunResult run_synth(const Json& root) {
    RunResult r;
    const auto design = config::parse_design(root, "");
    const auto syn = filter_synthesis::synthesize(design.filter, design.pole_impedances);
    const auto knees = filter_synthesis::knee_frequencies(design.filter);
    sn::IsolatorNetlist net;
    try {
        net = build_isolator(design);
    } catch (const Error& e) {
        throw ConfigError("network", e.what());
    }
    squid_warnings(net, r.warnings);

    Table poles{"poles", {"pole", "g", "z_r_ohm", "c_g_f", "l_g_h", "l_squid_h", "ic0_a"}, {}};
    std::size_t pole = 0;
    for (const auto& e : net.elements) {
        if (const auto* sp = std::get_if<sn::ShuntPole>(&e)) {
            double l_sq = 0.0, ic0 = 0.0;
            if (sp->squid >= 0) {
                const auto& s = net.squids[static_cast<std::size_t>(sp->squid)];
                ic0 = s.ic0;
                l_sq = squid::squid_inductance(s.ic0, s.beta);
            }
            poles.rows.push_back({static_cast<double>(pole + 1), syn.g[pole + 1], syn.pole_impedances[pole],
                                  sp->c_g, sp->l_g, l_sq, ic0});
            ++pole;
        }
    }
    Table inv{"inverters", {"index", "j_s", "z_equiv_ohm"}, {}};
    for (std::size_t k = 0; k < syn.inverters.size(); ++k)
        inv.rows.push_back({static_cast<double>(k), syn.inverters[k], 1.0 / syn.inverters[k]});

    Json elements = Json::array();
    for (const auto& e : net.elements) {
        Json el{{"type", sn::element_name(e)}};
        std::visit(
            [&](const auto& x) {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, sn::SeriesCapacitor> || std::is_same_v<T, sn::ShuntCapacitor>) {
                    el["c_f"] = x.c;
                } else if constexpr (std::is_same_v<T, sn::SeriesInductor> ||
                                     std::is_same_v<T, sn::ShuntInductor>) {
                    el["l_h"] = x.l;
                } else if constexpr (std::is_same_v<T, sn::SeriesResistor> ||
                                     std::is_same_v<T, sn::ShuntResistor>) {
                    el["r_ohm"] = x.r;
                } else if constexpr (std::is_same_v<T, sn::TransmissionLine>) {
                    el["z_ohm"] = x.z_line;
                    el["electrical_length_deg"] = rad_to_deg(x.electrical_length);
                    el["ref_freq_hz"] = rad_to_hz(x.ref_omega);
                } else if constexpr (std::is_same_v<T, sn::IdealInverter>) {
                    el["j_s"] = x.j;
                } else {
                    el["c_f"] = x.c_g;
                    el["l_h"] = x.l_g;
                    el["squid"] = x.squid;
                }
            },
            e);
        elements.push_back(el);
    }
    Json squids = Json::array();
    for (const auto& s : net.squids)
        squids.push_back({{"ic0_a", s.ic0}, {"beta_pi", s.beta / kPi}, {"alpha_pi", s.alpha / kPi},
                          {"pump_freq_hz", rad_to_hz(s.pump_freq)}, {"phase_deg", rad_to_deg(s.pump_phase)}});

    r.summary = {{"g", syn.g},
                 {"fractional_bandwidth", syn.w_bar},
                 {"pole_impedances_ohm", syn.pole_impedances},
                 {"inverters_s", syn.inverters},
                 {"lower_edge_hz", rad_to_hz(knees.omega1)},
                 {"upper_edge_hz", rad_to_hz(knees.omega2)},
                 {"netlist", {{"z0_ohm", net.z0}, {"n_sidebands", net.n_sidebands},
                              {"squids", squids}, {"elements", elements}}}};
    r.tables = {poles, inv};
    return r;
}

RunResult run_sparams(const Json& root) {
    RunResult r;
    const auto filter = root_filter(root);
    const auto net = config::stage_netlist(root, "");
    const auto grid = grid_for(root, filter);
    squid_warnings(net, r.warnings);
    const auto freqs = grid.freqs_hz();
    const auto omegas = grid.omegas();
    const auto sps = sn::isolator_sparams(net, omegas);
    r.tables.push_back(sparam_table("sparams", freqs, sps));
    const double fc = filter ? filter->center_freq : 0.5 * (grid.start_hz + grid.stop_hz);
    r.summary = grid_summary(freqs, sps, fc);
    r.summary["pump_freq_hz"] = rad_to_hz(net.pump_freq());
    r.summary["n_sidebands"] = net.n_sidebands;
    r.summary["pump_plan"] = plan_json(pump_plan_of(net));
    return r;
}

cm::ModeGraph parse_mode_graph(const Json& root, const std::optional<FilterSpec>& filter) {
    const Json& c = config::require(root, "coupled_mode", "");
    const std::string p = "coupled_mode";
    config::only_keys(c, p, {"beta_p", "phi_deg", "pump_freq_hz", "resonance_hz", "gamma0_hz", "beta_c",
                             "signal_freq_hz", "beta_p_sweep"});
    const double beta_p = config::number(c, "beta_p", p);
    const double phi = deg_to_rad(config::number(c, "phi_deg", p));
    const double wp = hz_to_rad(config::number(c, "pump_freq_hz", p));
    if (beta_p < 0.0) throw ConfigError(p + ".beta_p", "must be non-negative");
    if (!(wp > 0.0)) throw ConfigError(p + ".pump_freq_hz", "must be positive");
    if (has(c, "gamma0_hz")) {
        const double g0 = hz_to_rad(config::number(c, "gamma0_hz", p));
        const double bc = config::number(c, "beta_c", p);
        double res = filter ? filter->center_freq : 0.0;
        res = config::number_or(c, "resonance_hz", p, res);
        if (!(res > 0.0)) throw ConfigError(p + ".resonance_hz", "required without a filter block");
        if (!(g0 > 0.0)) throw ConfigError(p + ".gamma0_hz", "must be positive");
        return cm::ModeGraph::symmetric(hz_to_rad(res), g0, bc, beta_p, phi, wp);
    }
    if (!filter) throw ConfigError("filter", "required unless coupled_mode.gamma0_hz is given");
    if (filter->order != 2) throw ConfigError("filter.order", "the coupled-mode model describes a two-pole filter");
    return cm::ModeGraph::from_filter(*filter, beta_p, phi, wp);
}

RunResult run_coupled_mode(const Json& root) {
    RunResult r;
    const auto filter = root_filter(root);
    const auto graph = parse_mode_graph(root, filter);
    const Json& c = root.at("coupled_mode");
    const double f0 = rad_to_hz(graph.resonance());
    config::Grid grid = filter ? config::parse_grid(root, *filter)
                               : (has(root, "grid") ? grid_for(root, filter)
                                                    : config::Grid{f0 - 2.0 * rad_to_hz(graph.gamma0()),
                                                                   f0 + 2.0 * rad_to_hz(graph.gamma0()), 201});
    const auto freqs = grid.freqs_hz();

    Table t{"sparams", {"freq_hz", "S11_db", "S21_db", "S12_db", "S22_db", "D_db"}, {}};
    t.rows.resize(freqs.size());
    for (std::size_t k = 0; k < freqs.size(); ++k) {
        const auto s = cm::mode_sparams(graph, hz_to_rad(freqs[k]));
        const double s21 = db(s.forward()), s12 = db(s.reverse());
        t.rows[k] = {freqs[k], db(s.S(0, 0)), s21, s12, db(s.S(1, 1)),
                     std::clamp(s21 - s12, -cm::kDirectionalityCapDb, cm::kDirectionalityCapDb)};
    }
    r.tables.push_back(t);

    const double a = graph.pump_freq() / graph.gamma0();
    const auto terms = cm::directionality_closed_form(graph.beta_c(), graph.beta_p(), a, graph.phi());
    const double fs = config::number_or(c, "signal_freq_hz", "coupled_mode", f0);
    const auto s0 = cm::mode_sparams(graph, hz_to_rad(fs));
    const auto supp = cm::suppression_beta_p(graph.beta_c(), a);
    r.summary = {{"gamma0_hz", rad_to_hz(graph.gamma0())},
                 {"beta_c", graph.beta_c()},
                 {"a", a},
                 {"closed_form", {{"M_a", terms.M_a}, {"zeta", terms.zeta}, {"eta", terms.eta},
                                  {"D_db", cm::directionality_db(terms.D)},
                                  {"complete_suppression", terms.complete_suppression}}},
                 {"signal_freq_hz", fs},
                 {"at_signal", {{"S21_db", db(s0.forward())}, {"S12_db", db(s0.reverse())},
                                {"S11_db", db(s0.S(0, 0))}, {"S22_db", db(s0.S(1, 1))}}},
                 {"suppression_beta_p", supp ? Json(*supp) : Json(nullptr)}};

    if (has(c, "beta_p_sweep")) {
        const Json& s = c.at("beta_p_sweep");
        const std::string sp = "coupled_mode.beta_p_sweep";
        config::only_keys(s, sp, {"start", "stop", "points"});
        const auto bps = sn::linspace(config::number(s, "start", sp), config::number(s, "stop", sp),
                                      config::integer_or(s, "points", sp, 101));
        Table b{"beta_p_sweep", {"beta_p", "S21_db", "S12_db", "D_db", "D_closed_form_db"}, {}};
        for (double bp : bps) {
            const auto g = graph.with_pump(bp, graph.phi(), graph.pump_freq());
            const auto sb = cm::mode_sparams(g, hz_to_rad(fs));
            const double s21 = db(sb.forward()), s12 = db(sb.reverse());
            b.rows.push_back({bp, s21, s12, std::clamp(s21 - s12, -cm::kDirectionalityCapDb, cm::kDirectionalityCapDb),
                              cm::directionality_db(cm::directionality_closed_form(g.beta_c(), bp, a, g.phi()).D)});
        }
        r.tables.push_back(b);
    }
    return r;
}

tuner::TwoSquidTarget parse_two_squid(const Json& root) {
    const Json& j = config::require(root, "two_squid", "");
    const std::string p = "two_squid";
    config::only_keys(j, p, {"ic0_a", "beta_pi", "alpha_pi", "pump_freq_hz", "phase_deg", "dphase_deg",
                             "coupling_c_f", "signal_freq_hz", "z0_ohm", "n_sidebands"});
    tuner::TwoSquidTarget t;
    Json s = Json::object();
    for (const char* k : {"ic0_a", "beta_pi", "alpha_pi", "pump_freq_hz", "phase_deg"})
        if (has(j, k)) s[k] = j.at(k);
    t.s1 = config::parse_squid(s, p);
    t.s2 = t.s1;
    t.s2.pump_phase = t.s1.pump_phase + deg_to_rad(config::number_or(j, "dphase_deg", p, 0.0));
    t.coupling_c = config::number(j, "coupling_c_f", p);
    t.omega = hz_to_rad(config::number(j, "signal_freq_hz", p));
    t.z0 = config::number_or(j, "z0_ohm", p, 50.0);
    t.n_sidebands = config::integer_or(j, "n_sidebands", p, 2);
    if (!(t.coupling_c > 0.0)) throw ConfigError(p + ".coupling_c_f", "must be positive");
    if (!(t.omega > 0.0)) throw ConfigError(p + ".signal_freq_hz", "must be positive");
    if (t.n_sidebands < 0 || t.n_sidebands > 16) throw ConfigError(p + ".n_sidebands", "must lie in [0, 16]");
    return t;
}

RunResult run_sweep(const Json& root) {
    RunResult r;
    const Json& s = config::require(root, "sweep", "");
    config::only_keys(s, "sweep", {"target", "axes", "band_hz", "band_points", "signal_freq_hz"});
    const std::string target = config::string_or(s, "target", "sweep", "network");
    const auto filter = root_filter(root);

    tuner::SweepTarget tgt = tuner::TwoSquidTarget{};
    if (target == "network") {
        auto net = config::stage_netlist(root, "");
        squid_warnings(net, r.warnings);
        std::vector<double> band;
        const double fc = filter ? filter->center_freq : 0.0;
        double lo = fc - 200e6, hi = fc + 200e6;
        if (has(s, "band_hz")) {
            const auto b = config::numbers(s, "band_hz", "sweep");
            if (b.size() != 2 || !(b[0] > 0.0) || b[1] < b[0])
                throw ConfigError("sweep.band_hz", "expected [low, high] with 0 < low <= high");
            lo = b[0];
            hi = b[1];
        } else if (!filter) {
            throw ConfigError("sweep.band_hz", "required without a filter block");
        }
        const int pts = config::integer_or(s, "band_points", "sweep", 9);
        if (pts < 1) throw ConfigError("sweep.band_points", "must be at least 1");
        for (double f : sn::linspace(lo, hi, pts)) band.push_back(hz_to_rad(f));
        tgt = tuner::NetworkTarget{std::move(net), band};
    } else if (target == "coupled_mode") {
        const auto g = parse_mode_graph(root, filter);
        const double fs = config::number_or(s, "signal_freq_hz", "sweep", rad_to_hz(g.resonance()));
        tgt = tuner::CoupledModeTarget{g, hz_to_rad(fs)};
    } else if (target == "two_squid") {
        tgt = parse_two_squid(root);
    } else {
        throw ConfigError("sweep.target", "expected network, coupled_mode, or two_squid");
    }

    const Json& axes_j = config::require(s, "axes", "sweep");
    if (!axes_j.is_array() || axes_j.empty() || axes_j.size() > 2)
        throw ConfigError("sweep.axes", "expected one or two axes");
    std::vector<tuner::SweepAxis> axes;
    const auto valid = tuner::valid_axes(tgt);
    for (std::size_t k = 0; k < axes_j.size(); ++k) {
        const std::string p = "sweep.axes[" + std::to_string(k) + "]";
        config::only_keys(axes_j[k], p, {"name", "start", "stop", "points"});
        tuner::SweepAxis a;
        a.name = config::string_or(axes_j[k], "name", p, "");
        if (std::find(valid.begin(), valid.end(), a.name) == valid.end()) {
            std::string list;
            for (const auto& v : valid) list += (list.empty() ? "" : ", ") + v;
            throw ConfigError(p + ".name", "unknown axis '" + a.name + "'; valid axes: " + list);
        }
        a.start = config::number(axes_j[k], "start", p);
        a.stop = config::number(axes_j[k], "stop", p);
        a.points = config::integer_or(axes_j[k], "points", p, 31);
        if (a.points < 1 || a.points > 10000) throw ConfigError(p + ".points", "must lie in [1, 10000]");
        axes.push_back(a);
    }

    const auto res = tuner::sweep(axes, tgt);
    Table t{"sweep", {}, {}};
    for (const auto& a : axes) t.columns.push_back(a.name);
    for (const char* c : {"D_db", "IL_db", "RL_db"}) t.columns.emplace_back(c);
    int positive = 0, negative = 0;
    const tuner::SweepPoint* best = nullptr;
    const tuner::SweepPoint* worst = nullptr;
    for (const auto& p : res.points) {
        std::vector<double> row{p.x};
        if (axes.size() == 2) row.push_back(p.y);
        row.insert(row.end(), {p.metrics.min_d_db, p.metrics.max_il_db, p.metrics.min_rl_db});
        t.rows.push_back(std::move(row));
        if (p.metrics.min_d_db > 0.01) ++positive;
        if (p.metrics.min_d_db < -0.01) ++negative;
        if (!best || p.metrics.min_d_db > best->metrics.min_d_db) best = &p;
        if (!worst || p.metrics.min_d_db < worst->metrics.min_d_db) worst = &p;
    }
    r.tables.push_back(t);
    auto point_json = [&](const tuner::SweepPoint& p) {
        Json j{{axes[0].name, p.x}, {"metrics", metrics_json(p.metrics)}};
        if (axes.size() == 2) j[axes[1].name] = p.y;
        return j;
    };
    r.summary = {{"target", target},
                 {"points", res.points.size()},
                 {"forward_directional_points", positive},
                 {"reverse_directional_points", negative},
                 {"best", point_json(*best)},
                 {"worst", point_json(*worst)}};
    return r;
}

RunResult run_optimize(const Json& root) {
    RunResult r;
    const auto filter = root_filter(root);
    if (!filter) throw ConfigError("filter", "required in optimize mode");
    if (!has(root, "pumps")) throw ConfigError("pumps", "required in optimize mode: the seed pump plan");
    const Json& pumps = root.at("pumps");
    if (!has(pumps, "tones") && !has(pumps, "phases_deg"))
        throw ConfigError("pumps.phases_deg", "required field is missing");
    const auto net = config::stage_netlist(root, "");
    squid_warnings(net, r.warnings);
    const auto seed = pump_plan_of(net);
    const Json& o = has(root, "optimize") ? root.at("optimize") : Json::object();
    config::only_keys(o, "optimize", {"objective", "restarts", "evals_per_restart", "seed", "tune_amplitude",
                                      "tune_frequency", "alpha_min_pi", "alpha_max_pi", "pump_freq_min_hz",
                                      "pump_freq_max_hz"});
    const auto objective = config::parse_objective(has(o, "objective") ? o.at("objective") : Json::object(),
                                                   "optimize.objective", *filter);
    const auto options = config::parse_optimizer(o, "optimize");

    tuner::OptimizeResult res;
    try {
        res = tuner::optimize(seed, objective, net, options);
    } catch (const InvalidParameter& e) {
        throw ConfigError("optimize", e.what());
    }

    auto tuned = net;
    apply_pump_plan(res.best, tuned);
    const auto grid = config::parse_grid(root, *filter);
    const auto freqs = grid.freqs_hz();
    const auto sps = sn::isolator_sparams(tuned, grid.omegas());
    std::vector<sn::PointMetrics> pm;
    for (const auto& sp : sps) pm.push_back(sn::point_metrics(sp));
    const auto band = tuner::longest_compliant_band(freqs, pm, objective);

    Table trace{"trace", {"evaluation", "score", "best_score"}, {}};
    for (const auto& e : res.trace) trace.rows.push_back({static_cast<double>(e.evaluation), e.score, e.best_score});
    r.tables = {trace, sparam_table("sparams", freqs, sps)};

    Json optima = Json::array();
    for (const auto& lo : res.optima)
        optima.push_back({{"plan", plan_json(lo.plan)}, {"score", lo.score}, {"metrics", metrics_json(lo.metrics)}});
    r.summary = {{"plan", plan_json(res.best)},
                 {"metrics", metrics_json(res.metrics)},
                 {"score", res.score},
                 {"feasible", res.feasible},
                 {"evaluations", res.evaluations},
                 {"seed", options.seed},
                 {"objective_band_hz", {rad_to_hz(objective.band.center - objective.band.iso_bw / 2),
                                        rad_to_hz(objective.band.center + objective.band.iso_bw / 2)}},
                 {"compliant_band", {{"start_hz", band.start_hz}, {"stop_hz", band.stop_hz},
                                     {"width_hz", band.width_hz()}}},
                 {"optima", optima}};
    if (!res.feasible) r.warnings.push_back("optimizer did not meet every target over the objective band");
    return r;
}

Table spectrum_table(const std::string& name, const td::PowerSpectrum& ps, double f_max) {
    Table t{name, {"freq_hz", "power_db"}, {}};
    for (std::size_t k = 0; k < ps.freqs.size() && ps.freqs[k] <= f_max; ++k)
        t.rows.push_back({ps.freqs[k], ps.power_db[k]});
    return t;
}

RunResult run_oracle(const Json& root) {
    RunResult r;
    const auto filter = root_filter(root);
    const auto net = config::stage_netlist(root, "");
    squid_warnings(net, r.warnings);
    const Json& o = has(root, "oracle") ? root.at("oracle") : Json::object();
    const std::string p = "oracle";
    config::only_keys(o, p, {"drive_freq_hz", "amplitude_v", "pump_periods", "inductance", "relation", "step_s",
                             "n_sidebands", "center_half_width_hz", "compare_spectral", "export_traces"});
    double fd = filter ? filter->center_freq : 0.0;
    fd = config::number_or(o, "drive_freq_hz", p, fd);
    if (!(fd > 0.0)) throw ConfigError(p + ".drive_freq_hz", "must be positive");
    const double amp = config::number_or(o, "amplitude_v", p, 1.0);
    if (!(amp > 0.0)) throw ConfigError(p + ".amplitude_v", "must be positive");
    const double periods = config::number_or(o, "pump_periods", p, 300.0);
    const std::string ind = config::string_or(o, "inductance", p, "exact");
    const std::string rel = config::string_or(o, "relation", p, "flux");

    td::TransientRun run;
    run.netlist = net;
    run.drive = {1, hz_to_rad(fd), amp};
    if (ind == "exact") {
        run.inductance = squid::InductanceModel::Exact;
    } else if (ind == "expansion") {
        run.inductance = squid::InductanceModel::Expansion;
    } else {
        throw ConfigError(p + ".inductance", "expected exact or expansion");
    }
    if (rel == "flux") {
        run.relation = td::VoltageRelation::Flux;
    } else if (rel == "ldidt") {
        run.relation = td::VoltageRelation::LdIdt;
    } else {
        throw ConfigError(p + ".relation", "expected flux or ldidt");
    }
    run.auto_timing(periods);
    if (has(o, "step_s")) run.step = config::number(o, "step_s", p);
    try {
        run.validate();
    } catch (const InvalidParameter& e) {
        throw ConfigError(p, e.what());
    }
    const bool pumped = net.pumped();
    const double wm = pumped ? net.pump_freq() : 0.0;
    const int n_ext = pumped ? config::integer_or(o, "n_sidebands", p, net.n_sidebands) : 0;
    if (n_ext < 0 || n_ext > 16) throw ConfigError(p + ".n_sidebands", "must lie in [0, 16]");

    auto rev_run = run;
    rev_run.drive.port = 2;
    auto fwd_future = std::async(std::launch::async, [&] { return td::simulate(run); });
    const auto rev = td::simulate(rev_run);
    const auto fwd = fwd_future.get();

    const auto est = td::extract_sideband_sparams(fwd, rev, wm, n_ext);
    auto retained = [](const td::Traces& t, int port) {
        auto w = t.outgoing_wave(port);
        return std::vector<double>(w.begin() + static_cast<std::ptrdiff_t>(t.discard), w.end());
    };
    const double ref = amp / 2.0;
    const auto fwd_t = td::power_spectrum(retained(fwd, 2), fwd.dt, ref);
    const auto fwd_r = td::power_spectrum(retained(fwd, 1), fwd.dt, ref);
    const auto rev_t = td::power_spectrum(retained(rev, 1), rev.dt, ref);
    const auto rev_r = td::power_spectrum(retained(rev, 2), rev.dt, ref);

    const double half = config::number_or(o, "center_half_width_hz", p,
                                          pumped ? 0.5 * rad_to_hz(wm) : 0.25 * fd);
    const double fwd_center = td::band_power(fwd_t, fd, half);
    const double rev_center = td::band_power(rev_t, fd, half);

    const double f_max = 1.25 * run.max_frequency_hz();
    r.tables = {spectrum_table("spectrum_forward_transmitted", fwd_t, f_max),
                spectrum_table("spectrum_forward_reflected", fwd_r, f_max),
                spectrum_table("spectrum_reverse_transmitted", rev_t, f_max),
                spectrum_table("spectrum_reverse_reflected", rev_r, f_max)};

    Table sb{"sidebands", {"n", "freq_hz", "S21_td_db", "S11_td_db", "S12_td_db", "S22_td_db"}, {}};
    const bool compare = config::boolean_or(o, "compare_spectral", p, true);
    std::optional<sn::SpectralSParams> model;
    if (compare) {
        auto sn_net = net;
        sn_net.n_sidebands = std::max(net.n_sidebands, n_ext);
        model = sn::network_sparams(sn_net, hz_to_rad(fd));
        for (const char* c : {"S21_spectral_db", "S11_spectral_db", "S12_spectral_db", "S22_spectral_db"})
            sb.columns.emplace_back(c);
    }
    double max_center_dev = 0.0;
    for (int n = -n_ext; n <= n_ext; ++n) {
        const auto k = static_cast<std::size_t>(n + n_ext);
        std::vector<double> row{static_cast<double>(n), fd + n * rad_to_hz(wm), db(est.s21[k]), db(est.s11[k]),
                                db(est.s12[k]), db(est.s22[k])};
        if (model) {
            row.insert(row.end(), {db(model->s21.at(n, 0)), db(model->s11.at(n, 0)), db(model->s12.at(n, 0)),
                                   db(model->s22.at(n, 0))});
            if (n == 0)
                max_center_dev = std::max({std::abs(row[2] - row[6]), std::abs(row[3] - row[7]),
                                           std::abs(row[4] - row[8]), std::abs(row[5] - row[9])});
        }
        sb.rows.push_back(std::move(row));
    }
    r.tables.push_back(sb);

    if (config::boolean_or(o, "export_traces", p, false)) {
        Table tr{"traces", {"t_s", "source_fwd_v", "v1_fwd_v", "v2_fwd_v", "source_rev_v", "v1_rev_v", "v2_rev_v"}, {}};
        for (std::size_t k = 0; k < fwd.v_port1.size(); ++k)
            tr.rows.push_back({k * fwd.dt, fwd.source[k], fwd.v_port1[k], fwd.v_port2[k], rev.source[k],
                               rev.v_port1[k], rev.v_port2[k]});
        r.tables.push_back(tr);
    }

    const auto pb = td::power_balance(fwd);
    r.summary = {{"drive_freq_hz", fd},
                 {"pump_freq_hz", rad_to_hz(wm)},
                 {"step_s", run.step},
                 {"duration_s", run.duration},
                 {"samples", fwd.v_port1.size()},
                 {"inductance", ind},
                 {"relation", rel},
                 {"resolution_bw_hz", fwd_t.resolution_bw},
                 {"td", {{"S21_00_db", db(est.s21_00())}, {"S12_00_db", db(est.s12_00())},
                         {"S11_00_db", db(est.s11_00())}, {"S22_00_db", db(est.s22_00())},
                         {"D_db", db(est.s21_00()) - db(est.s12_00())}}},
                 {"forward_center_power_fraction", fwd_center},
                 {"reverse_sideband_power_fraction", 1.0 - rev_center},
                 {"power_balance", {{"incident", pb.incident}, {"reflected", pb.reflected},
                                    {"transmitted", pb.transmitted},
                                    {"reflected_plus_transmitted_db",
                                     db_power((pb.reflected + pb.transmitted) / pb.incident)}}}};
    if (model) {
        const auto m = sn::point_metrics(*model);
        r.summary["spectral"] = {{"S21_00_db", m.s21_db}, {"S12_00_db", m.s12_db}, {"S11_00_db", m.s11_db},
                                 {"S22_00_db", m.s22_db}, {"D_db", m.d_db}};
        r.summary["max_center_deviation_db"] = max_center_dev;
    }
    return r;
}

RunResult run_cascade(const Json& root) {
    RunResult r;
    const Json& c = config::require(root, "cascade", "");
    config::only_keys(c, "cascade", {"stage_a", "stage_b"});
    const Json& ja = config::require(c, "stage_a", "cascade");
    const Json& jb = config::require(c, "stage_b", "cascade");
    for (const auto* pr : {&ja, &jb})
        config::only_keys(*pr, pr == &ja ? "cascade.stage_a" : "cascade.stage_b",
                          {"filter", "network", "netlist", "pumps"});
    const auto net_a = config::stage_netlist(ja, "cascade.stage_a");
    const auto net_b = config::stage_netlist(jb, "cascade.stage_b");
    squid_warnings(net_a, r.warnings);
    squid_warnings(net_b, r.warnings);

    std::optional<FilterSpec> filter = root_filter(root);
    if (!filter && has(jb, "filter")) filter = config::parse_filter(jb.at("filter"), "cascade.stage_b.filter");
    const auto grid = grid_for(root, filter);
    const auto freqs = grid.freqs_hz();
    const auto omegas = grid.omegas();

    const auto sa = sn::isolator_sparams(net_a, omegas);
    const auto sb = sn::isolator_sparams(net_b, omegas);
    const auto st = sn::cascade_isolators(net_a, net_b, omegas);

    Table t{"cascade", {"freq_hz", "D_a_db", "D_b_db", "D_total_db", "D_sum_db", "S21_00_db", "S12_00_db",
                        "S11_00_db", "S22_00_db"}, {}};
    double max_dev = 0.0, max_total = -std::numeric_limits<double>::infinity(), f_at = 0.0;
    int above25 = 0;
    for (std::size_t k = 0; k < freqs.size(); ++k) {
        const auto ma = sn::point_metrics(sa[k]);
        const auto mb = sn::point_metrics(sb[k]);
        const auto mt = sn::point_metrics(st[k]);
        const double sum = ma.d_db + mb.d_db;
        t.rows.push_back({freqs[k], ma.d_db, mb.d_db, mt.d_db, sum, mt.s21_db, mt.s12_db, mt.s11_db, mt.s22_db});
        max_dev = std::max(max_dev, std::abs(mt.d_db - sum));
        if (mt.d_db > max_total) {
            max_total = mt.d_db;
            f_at = freqs[k];
        }
        if (mt.d_db >= 25.0) ++above25;
    }
    r.tables.push_back(t);
    r.summary = {{"max_additivity_error_db", max_dev},
                 {"max_total_directionality_db", max_total},
                 {"max_total_directionality_freq_hz", f_at},
                 {"points_at_or_above_25_db", above25},
                 {"same_sideband_grid", net_a.n_sidebands == net_b.n_sidebands &&
                                            net_a.pump_freq() == net_b.pump_freq()}};
    return r;
}

}  // namespace

RunResult run(const Json& cfg) {
    config::validate(cfg);
    const std::string mode = cfg.at("mode").get<std::string>();
    RunResult r;
    if (mode == "synth") {
        r = run_synth(cfg);
    } else if (mode == "sparams") {
        r = run_sparams(cfg);
    } else if (mode == "sweep") {
        r = run_sweep(cfg);
    } else if (mode == "optimize") {
        r = run_optimize(cfg);
    } else if (mode == "oracle") {
        r = run_oracle(cfg);
    } else if (mode == "cascade") {
        r = run_cascade(cfg);
    } else {
        r = run_coupled_mode(cfg);
    }
    r.mode = mode;
    r.config = cfg;
    return r;
}

}  // namespace jpi
