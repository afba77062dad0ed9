#include "ptkerr/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <thread>

#include "ptkerr/meanfield.hpp"
#include "ptkerr/version.hpp"

namespace ptkerr {

using nlohmann::json;

const char* to_string(EngineVariant v) {
    switch (v) {
        case EngineVariant::linear: return "LINEAR";
        case EngineVariant::noisy: return "NOISY";
        case EngineVariant::noiseless: return "NOISELESS";
        case EngineVariant::meanfield: return "MEANFIELD";
        case EngineVariant::oracle: return "ORACLE";
    }
    return "?";
}

EngineVariant engine_variant_from_string(const std::string& s) {
    if (s == "LINEAR") return EngineVariant::linear;
    if (s == "NOISY") return EngineVariant::noisy;
    if (s == "NOISELESS") return EngineVariant::noiseless;
    if (s == "MEANFIELD") return EngineVariant::meanfield;
    if (s == "ORACLE") return EngineVariant::oracle;
    throw config_error("unknown variant: " + s);
}

void ScenarioConfig::validate() const {
    params.validate();
    if (n_samples < 2) throw config_error("n_samples must be >= 2");
    if (!(t_max > 0.0)) throw config_error("t_max must be positive");
    if (output_format != "CSV" && output_format != "JSON")
        throw config_error("output format must be CSV or JSON");
    if (sweep) {
        const SweepSpec& s = *sweep;
        if (!(s.j_min > 0.0) || !(s.j_max >= s.j_min) || s.j_steps < 1)
            throw config_error("invalid sweep j range");
        const double m = s.exceptional_margin;
        const bool below = s.j_max <= 1.0 - m;
        const bool above = s.j_min >= 1.0 + m;
        if (!below && !above)
            throw config_error(
                "sweep range must stay one regime away from the exceptional "
                "point J = kappa (margin " + std::to_string(m) + ")");
    }
    if (oracle) {
        if (oracle->n_a < 2 || oracle->n_b < 2 || !(oracle->dt > 0.0))
            throw config_error("invalid oracle spec");
    }
}

json ScenarioConfig::to_json() const {
    json j;
    j["params"] = {{"kappa", params.kappa},
                   {"j_coupling", params.j_coupling},
                   {"chi", params.chi},
                   {"alpha0_re", params.alpha0.real()},
                   {"alpha0_im", params.alpha0.imag()}};
    j["variant"] = to_string(variant);
    j["t_max"] = t_max;
    j["n_samples"] = n_samples;
    if (sweep) {
        j["sweep"] = {{"j_min", sweep->j_min},
                      {"j_max", sweep->j_max},
                      {"j_steps", sweep->j_steps},
                      {"quantity", sweep->quantity == SweepQuantity::d3
                                       ? "d3"
                                       : "change_ratio"},
                      {"exceptional_margin", sweep->exceptional_margin}};
    }
    if (oracle) {
        j["oracle"] = {{"n_a", oracle->n_a},
                       {"n_b", oracle->n_b},
                       {"dt", oracle->dt},
                       {"leak_threshold", oracle->leak_threshold},
                       {"max_total_dim", oracle->max_total_dim}};
    }
    j["options"] = {{"include_eb1", options.include_eb1},
                    {"include_noise_wick", options.include_noise_wick},
                    {"include_noise_photons", options.include_noise_photons},
                    {"workers", options.workers},
                    {"phi", options.phi}};
    j["output"] = {{"path", output_path}, {"format", output_format}};
    return j;
}

ScenarioConfig ScenarioConfig::from_json(const json& j) {
    ScenarioConfig c;
    try {
        const json& p = j.at("params");
        c.params.kappa = p.at("kappa").get<double>();
        c.params.j_coupling = p.at("j_coupling").get<double>();
        c.params.chi = p.at("chi").get<double>();
        c.params.alpha0 = cplx(p.at("alpha0_re").get<double>(),
                               p.at("alpha0_im").get<double>());
        c.variant = engine_variant_from_string(j.at("variant").get<std::string>());
        c.t_max = j.at("t_max").get<double>();
        c.n_samples = j.at("n_samples").get<int>();
        if (j.contains("sweep") && !j["sweep"].is_null()) {
            SweepSpec s;
            s.j_min = j["sweep"].at("j_min").get<double>();
            s.j_max = j["sweep"].at("j_max").get<double>();
            s.j_steps = j["sweep"].at("j_steps").get<int>();
            s.quantity = j["sweep"].at("quantity").get<std::string>() == "d3"
                             ? SweepQuantity::d3
                             : SweepQuantity::change_ratio;
            if (j["sweep"].contains("exceptional_margin"))
                s.exceptional_margin = j["sweep"]["exceptional_margin"].get<double>();
            c.sweep = s;
        }
        if (j.contains("oracle") && !j["oracle"].is_null()) {
            OracleSpec o;
            o.n_a = j["oracle"].at("n_a").get<int>();
            o.n_b = j["oracle"].at("n_b").get<int>();
            o.dt = j["oracle"].at("dt").get<double>();
            if (j["oracle"].contains("leak_threshold"))
                o.leak_threshold = j["oracle"]["leak_threshold"].get<double>();
            if (j["oracle"].contains("max_total_dim"))
                o.max_total_dim = j["oracle"]["max_total_dim"].get<int>();
            c.oracle = o;
        }
        if (j.contains("options")) {
            const json& o = j["options"];
            if (o.contains("include_eb1")) c.options.include_eb1 = o["include_eb1"];
            if (o.contains("include_noise_wick"))
                c.options.include_noise_wick = o["include_noise_wick"];
            if (o.contains("include_noise_photons"))
                c.options.include_noise_photons = o["include_noise_photons"];
            if (o.contains("workers")) c.options.workers = o["workers"];
            if (o.contains("phi")) c.options.phi = o["phi"];
        }
        if (j.contains("output")) {
            c.output_path = j["output"].value("path", std::string());
            c.output_format = j["output"].value("format", std::string("CSV"));
        }
    } catch (const json::exception& e) {
        throw config_error(std::string("bad config: ") + e.what());
    }
    c.validate();
    return c;
}

namespace {

const std::vector<std::string> moment_columns = {
    "t",     "re_a",  "im_a",    "re_b",    "im_b",  "n_a",  "n_b",
    "re_ab", "im_ab", "re_adbd", "im_adbd", "re_bb", "im_bb"};

void push_moments(DataTable& t, double time, const MomentSet& m) {
    t.add_row({time, m.mean_a.real(), m.mean_a.imag(), m.mean_b.real(),
               m.mean_b.imag(), m.n_a, m.n_b, m.ab.real(), m.ab.imag(),
               m.adag_bdag.real(), m.adag_bdag.imag(), m.bb.real(),
               m.bb.imag()});
}

DataTable new_table(const std::string& name, const ScenarioConfig& cfg) {
    DataTable t;
    t.name = name;
    t.columns = moment_columns;
    t.meta = {{"config", cfg.to_json()}, {"version", version}};
    return t;
}

}  // namespace

DataTable run_scenario(const ScenarioConfig& config) {
    config.validate();
    const CouplerParams np = config.params.normalized();
    DataTable table = new_table(to_string(config.variant), config);

    if (config.variant == EngineVariant::oracle) {
        if (!config.oracle) throw config_error("ORACLE variant needs an oracle spec");
        const DerivedConstants dc = derive_constants(np);
        OracleRun run;
        run.params = np;
        run.dims = {config.oracle->n_a, config.oracle->n_b};
        run.dt = config.oracle->dt;
        run.leak_threshold = config.oracle->leak_threshold;
        run.max_total_dim = config.oracle->max_total_dim;
        run.workers = config.options.workers;
        const double horizon = oracle_horizon(dc, np.alpha0, run.dims.n_a);
        run.t_max = std::min(config.t_max, horizon);
        if (!(run.t_max > 0.0))
            throw config_error("oracle horizon is zero: enlarge n_a or reduce alpha0");
        run.n_samples = config.n_samples;
        OracleResult res = evolve_coherent(run, np.alpha0, 0.0);
        table.columns.push_back("trace_drift");
        table.columns.push_back("leakage");
        for (const OracleSample& s : res.samples) {
            push_moments(table, s.t, s.m);
            table.rows.back().push_back(s.trace_drift);
            table.rows.back().push_back(s.leakage);
        }
        table.meta["oracle"] = {
            {"status", res.status == OracleStatus::ok ? "ok" : "truncation_exceeded"},
            {"t_fail", res.t_fail},
            {"dt_actual", res.dt},
            {"t_max_run", run.t_max},
            {"horizon", horizon},
            {"horizon_clamped", run.t_max < config.t_max}};
        return table;
    }

    if (config.variant == EngineVariant::meanfield) {
        MeanFieldResult mf =
            integrate_meanfield(np, np.alpha0, config.t_max, config.n_samples);
        for (const MeanFieldState& s : mf.states) {
            MomentSet m;
            m.mean_a = s.alpha;
            m.mean_b = s.beta;
            m.n_a = std::norm(s.alpha);
            m.n_b = std::norm(s.beta);
            m.ab = s.alpha * s.beta;
            m.adag_bdag = std::conj(m.ab);
            m.bb = s.beta * s.beta;
            push_moments(table, s.t, m);
        }
        table.meta["meanfield"] = {{"step_error", mf.step_error}};
        return table;
    }

    const DerivedConstants dc = derive_constants(np);
    const MeanOptions mo{config.options.include_eb1};
    for (int i = 0; i < config.n_samples; ++i) {
        const double t = config.t_max * i / (config.n_samples - 1);
        MomentSet m;
        if (config.variant == EngineVariant::linear) {
            m = linear_moments(dc, np.alpha0, t);
        } else {
            const Variant v = config.variant == EngineVariant::noisy
                                  ? Variant::noisy
                                  : Variant::noiseless;
            m = nonlinear_moments(dc, np.chi, np.alpha0, t, v,
                                  v == Variant::noisy, mo);
        }
        push_moments(table, t, m);
    }
    return table;
}

DataTable sweep(const ScenarioConfig& config) {
    config.validate();
    if (!config.sweep) throw config_error("sweep requires a sweep block");
    const SweepSpec& sp = *config.sweep;
    const CouplerParams np = config.params.normalized();

    std::vector<double> j_axis(sp.j_steps), t_axis(config.n_samples);
    for (int r = 0; r < sp.j_steps; ++r)
        j_axis[r] = sp.j_steps == 1
                        ? sp.j_min
                        : sp.j_min + (sp.j_max - sp.j_min) * r / (sp.j_steps - 1);
    for (int c = 0; c < config.n_samples; ++c)
        t_axis[c] = config.t_max * c / (config.n_samples - 1);

    const Variant variant = config.variant == EngineVariant::noiseless
                                ? Variant::noiseless
                                : Variant::noisy;
    const ChangeRatioOptions cro{config.options.include_eb1,
                                 config.options.include_noise_wick,
                                 config.options.phi};

    std::vector<std::vector<double>> values(sp.j_steps);
    std::vector<std::vector<json>> nan_cells(sp.j_steps);

    const auto eval_row = [&](int r) {
        CouplerParams p = np;
        p.j_coupling = j_axis[r];
        const DerivedConstants dc = derive_constants(p);
        auto& row = values[r];
        row.resize(t_axis.size());
        for (size_t c = 0; c < t_axis.size(); ++c) {
            try {
                if (sp.quantity == SweepQuantity::change_ratio) {
                    row[c] = change_ratio(dc, p.chi, p.alpha0, t_axis[c], variant, cro);
                } else {
                    const MomentSet m = nonlinear_moments(
                        dc, p.chi, p.alpha0, t_axis[c], variant,
                        config.options.include_noise_photons,
                        MeanOptions{config.options.include_eb1});
                    row[c] = d3(m);
                }
            } catch (const undefined_value_error& e) {
                row[c] = std::nan("");
                nan_cells[r].push_back({{"j_index", r},
                                        {"t_index", c},
                                        {"reason", e.what()}});
            } catch (const regime_error& e) {
                row[c] = std::nan("");
                nan_cells[r].push_back({{"j_index", r},
                                        {"t_index", c},
                                        {"reason", e.what()}});
            }
        }
    };

    const int workers = std::max(1, config.options.workers);
    if (workers == 1) {
        for (int r = 0; r < sp.j_steps; ++r) eval_row(r);
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (int r = next.fetch_add(1); r < sp.j_steps; r = next.fetch_add(1))
                    eval_row(r);
            });
        }
        for (auto& th : pool) th.join();
    }

    DataTable table;
    table.name = "sweep";
    table.columns.push_back("j_over_kappa");
    for (size_t c = 0; c < t_axis.size(); ++c)
        table.columns.push_back("kt_" + std::to_string(c));
    for (int r = 0; r < sp.j_steps; ++r) {
        std::vector<double> row;
        row.reserve(1 + t_axis.size());
        row.push_back(j_axis[r]);
        row.insert(row.end(), values[r].begin(), values[r].end());
        table.rows.push_back(std::move(row));
    }
    json nan_list = json::array();
    for (auto& per_row : nan_cells)
        for (auto& cell : per_row) nan_list.push_back(std::move(cell));
    table.meta = {{"config", config.to_json()},
                  {"version", version},
                  {"t_axis", t_axis},
                  {"j_axis", j_axis},
                  {"quantity", sp.quantity == SweepQuantity::d3 ? "d3" : "change_ratio"},
                  {"nan_cells", nan_list}};
    return table;
}

CompareReport compare(const DataTable& analytic, const DataTable& oracle,
                      const std::map<std::string, double>& tolerances,
                      double rel_floor) {
    CompareReport rep;
    const int ta = analytic.col_index("t"), to = oracle.col_index("t");
    if (ta < 0 || to < 0) throw config_error("compare: missing t column");
    const size_t n = std::min(analytic.rows.size(), oracle.rows.size());
    if (n == 0) throw config_error("compare: empty series");
    if (analytic.rows.size() != oracle.rows.size())
        throw config_error("compare: time grids have different lengths");
    for (size_t i = 0; i < n; ++i) {
        if (std::abs(analytic.rows[i][ta] - oracle.rows[i][to]) > 1e-12)
            throw config_error("compare: time grids do not match");
    }
    json cols = json::object();
    bool all_pass = true;
    double default_tol = 1e-6;
    if (auto it = tolerances.find("*"); it != tolerances.end())
        default_tol = it->second;
    for (size_t c = 0; c < analytic.columns.size(); ++c) {
        const std::string& name = analytic.columns[c];
        if (name == "t") continue;
        const int oc = oracle.col_index(name);
        if (oc < 0) continue;
        double max_rel = 0.0, sum_rel = 0.0;
        for (size_t i = 0; i < n; ++i) {
            const double a = analytic.rows[i][c], b = oracle.rows[i][oc];
            const double rel = std::abs(a - b) / std::max(std::abs(b), rel_floor);
            max_rel = std::max(max_rel, rel);
            sum_rel += rel;
        }
        double tol = default_tol;
        if (auto it = tolerances.find(name); it != tolerances.end()) tol = it->second;
        const bool pass = max_rel <= tol;
        all_pass = all_pass && pass;
        cols[name] = {{"max_rel", max_rel},
                      {"mean_rel", sum_rel / n},
                      {"tol", tol},
                      {"pass", pass}};
    }
    rep.verdict = {{"pass", all_pass}, {"grid_points", n}, {"columns", cols}};
    rep.pass = all_pass;
    return rep;
}

namespace {

ScenarioConfig preset_base(const ScenarioOptions& opts) {
    ScenarioConfig c;
    c.params.kappa = 1.0;
    c.params.chi = 1e-9;
    c.params.alpha0 = 1e3;
    c.options = opts;
    return c;
}

std::vector<DataTable> figure2(const ScenarioOptions& opts) {
    ScenarioConfig c = preset_base(opts);
    c.variant = EngineVariant::noisy;  // PT cells route through the first-order correction
    c.t_max = 6.0;
    c.n_samples = 200;
    c.sweep = SweepSpec{1.05, 3.0, 200, SweepQuantity::change_ratio, 0.02};
    DataTable t = sweep(c);
    t.name = "fig2";
    return {t};
}

std::vector<DataTable> figure3(const ScenarioOptions& opts) {
    std::vector<DataTable> out;
    for (EngineVariant v : {EngineVariant::noisy, EngineVariant::noiseless}) {
        ScenarioConfig c = preset_base(opts);
        c.variant = v;
        c.t_max = 16.0;
        c.n_samples = 200;
        c.sweep = SweepSpec{0.05, 0.95, 200, SweepQuantity::change_ratio, 0.02};
        DataTable t = sweep(c);
        t.name = v == EngineVariant::noisy ? "fig3_noisy" : "fig3_noiseless";
        out.push_back(std::move(t));
    }
    return out;
}

std::vector<DataTable> figure4(const ScenarioOptions& opts) {
    ScenarioConfig c = preset_base(opts);
    c.params.j_coupling = 0.1;
    c.variant = EngineVariant::noisy;
    c.t_max = 16.0;
    c.n_samples = 4001;
    const CouplerParams np = c.params.normalized();
    const DerivedConstants dc = derive_constants(np);
    DataTable t;
    t.name = "fig4";
    t.columns = {"t",   "x_a",     "p_a",     "x_b",     "p_b",
                 "x_a_lin", "p_a_lin", "x_b_lin", "p_b_lin"};
    t.meta = {{"config", c.to_json()}, {"version", version}};
    const MeanOptions mo{opts.include_eb1};
    for (int i = 0; i < c.n_samples; ++i) {
        const double time = c.t_max * i / (c.n_samples - 1);
        const cplx mb = mean_b(dc, np.chi, np.alpha0, time, Variant::noisy, mo);
        const cplx ma = mean_a(dc, np.chi, np.alpha0, time, Variant::noisy, mo);
        const cplx mb0 = mean_b(dc, 0.0, np.alpha0, time, Variant::noisy, mo);
        const cplx ma0 = mean_a(dc, 0.0, np.alpha0, time, Variant::noisy, mo);
        t.add_row({time, quadrature_mean(ma, 0.0), quadrature_mean(ma, pi / 2),
                   quadrature_mean(mb, 0.0), quadrature_mean(mb, pi / 2),
                   quadrature_mean(ma0, 0.0), quadrature_mean(ma0, pi / 2),
                   quadrature_mean(mb0, 0.0), quadrature_mean(mb0, pi / 2)});
    }
    return {t};
}

std::vector<DataTable> figure5(const ScenarioOptions& opts) {
    std::vector<DataTable> out;
    for (double chi : {1e-9, 1e-5}) {
        ScenarioConfig c = preset_base(opts);
        c.params.j_coupling = 0.1;
        c.params.chi = chi;
        c.variant = EngineVariant::noisy;
        c.t_max = 17.0;
        c.n_samples = 3001;
        const CouplerParams np = c.params.normalized();
        const DerivedConstants dc = derive_constants(np);
        DataTable t;
        t.name = chi == 1e-9 ? "fig5_chi1e-9" : "fig5_chi1e-5";
        t.columns = {"t", "eb1_over_eb0_abs", "overlap_abs", "influence"};
        t.meta = {{"config", c.to_json()}, {"version", version}};
        for (int i = 0; i < c.n_samples; ++i) {
            const double time = c.t_max * i / (c.n_samples - 1);
            const double r = std::abs(eb1_over_eb0(dc, np.chi, time).value);
            const double ov = std::abs(overlap_factor(dc, np.chi, np.alpha0, time));
            t.add_row({time, r, ov, r * ov});
        }
        out.push_back(std::move(t));
    }
    return out;
}

std::vector<DataTable> figure6(const ScenarioOptions& opts) {
    std::vector<DataTable> out;
    for (double j : {0.3, 0.9}) {
        ScenarioConfig c = preset_base(opts);
        c.params.j_coupling = j;
        c.variant = EngineVariant::noisy;
        c.t_max = 14.0;
        c.n_samples = 4001;
        const CouplerParams np = c.params.normalized();
        const DerivedConstants dc = derive_constants(np);
        DataTable t;
        t.name = j == 0.3 ? "fig6_j0.3" : "fig6_j0.9";
        t.columns = {"t", "p_b_noisy", "p_b_noiseless"};
        t.meta = {{"config", c.to_json()}, {"version", version}};
        const MeanOptions mo{opts.include_eb1};
        for (int i = 0; i < c.n_samples; ++i) {
            const double time = c.t_max * i / (c.n_samples - 1);
            const cplx mn = mean_b(dc, np.chi, np.alpha0, time, Variant::noisy, mo);
            const cplx ml = mean_b(dc, np.chi, np.alpha0, time, Variant::noiseless);
            t.add_row({time, quadrature_mean(mn, pi / 2), quadrature_mean(ml, pi / 2)});
        }
        out.push_back(std::move(t));
    }
    return out;
}

std::vector<DataTable> figure7(const ScenarioOptions& opts) {
    std::vector<DataTable> out;
    for (double j : {0.1, 0.9}) {
        ScenarioConfig c = preset_base(opts);
        c.params.j_coupling = j;
        c.variant = EngineVariant::noisy;
        c.t_max = 13.0;
        c.n_samples = 2601;
        const CouplerParams np = c.params.normalized();
        const DerivedConstants dc = derive_constants(np);
        DataTable t;
        t.name = j == 0.1 ? "fig7_j0.1" : "fig7_j0.9";
        t.columns = {"t", "d3_noisy", "d3_noiseless"};
        t.meta = {{"config", c.to_json()}, {"version", version}};
        const MeanOptions mo{opts.include_eb1};
        for (int i = 1; i <= c.n_samples; ++i) {
            const double time = c.t_max * i / c.n_samples;
            double vn, vl;
            try {
                vn = d3(nonlinear_moments(dc, np.chi, np.alpha0, time,
                                          Variant::noisy,
                                          opts.include_noise_photons, mo));
                vl = d3(nonlinear_moments(dc, np.chi, np.alpha0, time,
                                          Variant::noiseless,
                                          opts.include_noise_photons, mo));
            } catch (const undefined_value_error&) {
                vn = vl = std::nan("");
            }
            t.add_row({time, vn, vl});
        }
        out.push_back(std::move(t));
    }
    return out;
}

}  // namespace

std::vector<std::string> figure_names() {
    return {"fig2", "fig3", "fig4", "fig5", "fig6", "fig7"};
}

std::vector<DataTable> run_figure(const std::string& name,
                                  const ScenarioOptions& opts) {
    if (name == "fig2") return figure2(opts);
    if (name == "fig3") return figure3(opts);
    if (name == "fig4") return figure4(opts);
    if (name == "fig5") return figure5(opts);
    if (name == "fig6") return figure6(opts);
    if (name == "fig7") return figure7(opts);
    throw config_error("unknown figure preset: " + name +
                       " (expected fig2..fig7)");
}

void emit(const DataTable& table, const std::string& path,
          const std::string& format) {
    if (path.empty()) {
        std::cout << table.to_csv();
        return;
    }
    if (format == "JSON") {
        table.write_json(path);
        return;
    }
    table.write_csv(path);
    std::string sidecar = path;
    const size_t dot = sidecar.rfind('.');
    if (dot != std::string::npos) sidecar.resize(dot);
    sidecar += ".json";
    table.write_json(sidecar);
}

}  // namespace ptkerr
