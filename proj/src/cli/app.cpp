#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "manet/analytic.hpp"
#include "manet/cli.hpp"
#include "manet/sim.hpp"

#ifndef MANET_VERSION
#define MANET_VERSION "unknown"
#endif

namespace manet::cli {

namespace {

struct Flags
{
    std::string config;
    std::string sweep;
    std::string out;
    std::string record;
    std::string boundary_out;
    std::string estimator = "semi";
    std::uint64_t seed = 0;
    std::size_t samples = 10000;
    std::optional<double> window_radius;
    std::uint64_t max_slots = 100000;
    unsigned threads = 1;
    double m_max = 1e6;
    bool simulate = false;
    bool verify = false;
};

/// Rows sharing one header.
struct Table
{
    std::vector<std::string> params;
    std::vector<CsvRow> rows;

    std::string text() const
    {
        std::string s = csv_header(params) + "\n";
        for (const auto& r : rows)
            s += csv_line(r) + "\n";
        return s;
    }
};

std::string flag(bool b)
{
    return b ? "true" : "false";
}

sim::RunOptions run_options(const Flags& f)
{
    sim::RunOptions o;
    o.seed = f.seed;
    o.window_radius = f.window_radius;
    o.max_slots = f.max_slots;
    o.threads = std::max(1u, f.threads);
    return o;
}

sim::Estimator estimator(const Flags& f)
{
    return f.estimator == "slot" ? sim::Estimator::SlotEmpirical : sim::Estimator::SemiAnalytic;
}

ScenarioConfig load_checked(const std::string& path, std::ostream& err)
{
    const ScenarioConfig cfg = load_config(path);
    std::vector<std::string> violations;
    for (const Issue& i : validate(cfg)) {
        if (i.severity == Issue::Severity::Warning)
            err << "warning: " << i.field << ": " << i.message << "\n";
        else
            violations.push_back(i.field + ": " + i.message);
    }
    if (!violations.empty())
        throw ConfigError(violations);
    return cfg;
}

void write_text(const std::string& path, const std::string& text, std::ostream& out)
{
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw ConfigError({"cannot write '" + path + "'"});
    f << text;
}

// --- per-quantity row builders ---------------------------------------------

void analytic_rows(const ScenarioConfig& cfg, const std::vector<std::string>& params, Table& t)
{
    const analytic::DelayValue d = analytic::mean_delay(cfg);
    CsvRow r{params, "mean_delay", format_value(d.value), to_string(d.method)};
    if (d.method == analytic::Method::Quadrature && d.value.is_finite())
        r.std_error = format_value(d.abs_error);
    t.rows.push_back(r);
}

void phase_rows(const ScenarioConfig& cfg, const std::vector<std::string>& params, Table& t)
{
    const analytic::PhaseVerdict v = analytic::phase_classify(cfg);
    t.rows.push_back({params, "phase_verdict", to_string(v.verdict), v.rule});
    if (!std::isnan(v.threshold_lhs)) {
        t.rows.push_back({params, "threshold_lhs", format_value(v.threshold_lhs), v.rule});
        t.rows.push_back({params, "threshold_rhs", format_value(v.threshold_rhs), v.rule});
    }
}

/// Appends the estimate rows; returns whether --verify passed (true when not checked).
bool estimate_rows(const ScenarioConfig& cfg, const sim::DelayEstimate& est, const Flags& f,
                   const std::vector<std::string>& params, bool with_checkpoints, Table& t)
{
    const std::string seed = std::to_string(f.seed);
    const std::string window = format_value(est.window_radius);
    const std::string method = to_string(est.estimator);
    const std::string div = flag(est.diverged);
    auto with_n = [&](std::size_t n) {
        std::vector<std::string> p = params;
        p.push_back(std::to_string(n));
        return p;
    };
    auto without_n = [&] {
        std::vector<std::string> p = params;
        if (with_checkpoints)
            p.emplace_back();
        return p;
    };
    if (with_checkpoints) {
        for (const auto& c : est.diagnostic.checkpoints)
            t.rows.push_back({with_n(c.n), "running_mean", format_value(c.running_mean), method, "", div, seed, window});
    }
    // A diverged estimate is only a running mean, never a converged value.
    if (est.diverged) {
        auto p = with_checkpoints ? with_n(est.n_samples) : params;
        t.rows.push_back({p, "running_mean", format_value(est.mean), method, format_value(est.std_error), div, seed,
                          window});
    } else {
        t.rows.push_back({without_n(), "mean_delay", format_value(est.mean), method, format_value(est.std_error), div,
                          seed, window});
    }
    t.rows.push_back({without_n(), "tail_index", format_value(est.diagnostic.tail_index), method, "", div, seed,
                      window});
    t.rows.push_back({without_n(), "max_share", format_value(est.diagnostic.max_share), method, "", div, seed,
                      window});
    if (est.estimator == sim::Estimator::SlotEmpirical) {
        t.rows.push_back({without_n(), "censored", std::to_string(est.censored), method, "", div, seed, window});
        t.rows.push_back({without_n(), "censored_biased", flag(est.censored_biased), method, "", div, seed, window});
    }

    if (!f.verify)
        return true;
    const analytic::DelayValue a = analytic::mean_delay(cfg);
    if (a.value.is_infinite() || est.diverged) {
        t.rows.push_back({without_n(), "verify", "", "skipped_infinite_regime", "", div, seed, window});
        return true;
    }
    const double av = a.value.value();
    const double rel = std::abs(est.mean - av) / av;
    const double tol = 3.0 * std::hypot(est.std_error, a.abs_error) / av;
    const bool pass = rel <= tol;
    t.rows.push_back({without_n(), "verify", format_value(rel), pass ? "pass" : "fail", format_value(tol), div, seed,
                      window});
    return pass;
}

std::vector<double> ccdf_grid(double m_max)
{
    std::vector<double> m{0.0};
    for (double decade = 1.0; decade <= m_max; decade *= 10.0) {
        for (double k : {1.0, 2.0, 5.0}) {
            if (k * decade <= m_max)
                m.push_back(k * decade);
        }
    }
    if (m.back() != m_max)
        m.push_back(m_max);
    return m;
}

void ccdf_rows(const std::vector<sim::CcdfPoint>& pts, const Flags& f, double window,
               const std::vector<std::string>& params, Table& t, const std::string& suffix = "")
{
    const std::string seed = std::to_string(f.seed);
    const std::string w = format_value(window);
    for (const auto& p : pts) {
        std::vector<std::string> pr = params;
        pr.push_back(format_value(p.m));
        t.rows.push_back({pr, "ccdf" + suffix, format_value(p.ccdf), "geometric_mixture",
                          format_value((p.hi - p.lo) / 3.92), "", seed, w});
        t.rows.push_back({pr, "ccdf_lo" + suffix, format_value(p.lo), "geometric_mixture", "", "", seed, w});
        t.rows.push_back({pr, "ccdf_hi" + suffix, format_value(p.hi), "geometric_mixture", "", "", seed, w});
        t.rows.push_back({pr, "ccdf_partial_sum" + suffix, format_value(p.partial_sum), "geometric_mixture",
                          format_value(p.partial_sum_stderr), "", seed, w});
    }
}

// --- subcommands -------------------------------------------------------------

struct Outcome
{
    Table table;
    nlohmann::json record;
    bool verified = true;
};

Outcome cmd_analytic(const Flags& f, std::ostream& err)
{
    const ScenarioConfig cfg = load_checked(f.config, err);
    Outcome o;
    try {
        analytic_rows(cfg, {}, o.table);
    } catch (const UnsupportedModel& e) {
        throw UnsupportedModel(std::string(e.what()) + "; no analytic formula, use `simulate --estimator slot`");
    }
    try {
        phase_rows(cfg, {}, o.table);
    } catch (const UnsupportedModel&) {
        o.table.rows.push_back({{}, "phase_verdict", "", "no_analytic_rule"});
    }
    o.record["config"] = to_key_values(cfg);
    return o;
}

Outcome cmd_simulate(const Flags& f, std::ostream& err)
{
    const ScenarioConfig cfg = load_checked(f.config, err);
    Outcome o;
    o.table.params = {"n"};
    sim::DelayEstimate est;
    try {
        est = sim::estimate_mean_delay(cfg, f.samples, estimator(f), run_options(f));
    } catch (const UnsupportedModel& e) {
        throw UnsupportedModel(std::string(e.what()) +
                               (estimator(f) == sim::Estimator::SemiAnalytic
                                    ? "; the slot_empirical estimator (--estimator slot) supports every model"
                                    : ""));
    }
    o.verified = estimate_rows(cfg, est, f, {}, true, o.table);
    o.record["config"] = to_key_values(cfg);
    o.record["window_radius"] = est.window_radius;
    return o;
}

Outcome cmd_ccdf(const Flags& f, std::ostream& err)
{
    const ScenarioConfig cfg = load_checked(f.config, err);
    if (!(f.m_max >= 1.0))
        throw ConfigError({"--m-max must be at least 1"});
    Outcome o;
    o.table.params = {"m"};
    const std::vector<double> grid = ccdf_grid(f.m_max);
    const sim::RunOptions opt = run_options(f);
    const double window = opt.window_radius ? *opt.window_radius : sim::default_window_radius(cfg);
    ccdf_rows(sim::estimate_delay_ccdf(cfg, grid, f.samples, opt), f, window, {}, o.table);
    o.record["config"] = to_key_values(cfg);
    o.record["window_radius"] = window;
    return o;
}

Outcome cmd_shannon(const Flags& f, std::ostream& err)
{
    const ScenarioConfig cfg = load_checked(f.config, err);
    Outcome o;
    const sim::DelayEstimate est = sim::estimate_shannon_delay(cfg, f.samples, run_options(f));
    const std::string seed = std::to_string(f.seed);
    const std::string window = format_value(est.window_radius);
    o.table.rows.push_back({{}, est.diverged ? "shannon_running_mean" : "shannon_delay", format_value(est.mean),
                            to_string(est.estimator), format_value(est.std_error), flag(est.diverged), seed, window});
    const auto* b = std::get_if<BipolarReceiver>(&cfg.receiver);
    if (b && cfg.interference == InterferenceMode::Cancelled && cfg.noise.kind() == Noise::Kind::Constant &&
        cfg.fading.kind() == Fading::Kind::Rayleigh && cfg.noise.level() > 0.0) {
        const auto d = analytic::mean_shannon_delay_interference_free(b->r, cfg.fading.mu(), cfg.noise.level(), cfg.p,
                                                                     cfg.pathloss);
        o.table.rows.push_back({{}, "shannon_delay_interference_free", format_value(d.value), to_string(d.method)});
    }
    o.record["config"] = to_key_values(cfg);
    o.record["window_radius"] = est.window_radius;
    return o;
}

std::optional<analytic::Verdict> verdict_at(const SweepSpec& spec, const std::vector<double>& coords)
{
    try {
        return analytic::phase_classify(sweep_point(spec, coords)).verdict;
    } catch (const UnsupportedModel&) {
        return std::nullopt;
    } catch (const DomainError&) {
        return std::nullopt;
    }
}

/// Locates verdict flips between neighbours along the last axis by bisection.
Table boundary_table(const SweepSpec& spec, const std::vector<std::vector<double>>& points,
                     const std::vector<std::optional<analytic::Verdict>>& verdicts)
{
    Table t;
    for (const Axis& a : spec.axes)
        t.params.push_back(a.name);
    const Axis& last = spec.axes.back();
    const std::size_t stride = static_cast<std::size_t>(last.steps);
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        if ((i + 1) % stride == 0)
            continue;
        const auto va = verdicts[i];
        const auto vb = verdicts[i + 1];
        const bool definite = va && vb && *va != analytic::Verdict::Indeterminate &&
                              *vb != analytic::Verdict::Indeterminate;
        if (!definite || *va == *vb)
            continue;
        std::vector<double> lo = points[i];
        std::vector<double> hi = points[i + 1];
        const auto to_u = [&](double x) { return last.log_spacing ? std::log(x) : x; };
        const auto from_u = [&](double u) { return last.log_spacing ? std::exp(u) : u; };
        double ulo = to_u(lo.back());
        double uhi = to_u(hi.back());
        for (int it = 0; it < 60; ++it) {
            std::vector<double> mid = lo;
            mid.back() = from_u(0.5 * (ulo + uhi));
            const auto vm = verdict_at(spec, mid);
            if (vm && *vm == *va)
                ulo = to_u(mid.back());
            else
                uhi = to_u(mid.back());
        }
        std::vector<double> at = lo;
        at.back() = from_u(0.5 * (ulo + uhi));
        std::vector<std::string> params;
        for (double c : at)
            params.push_back(format_value(c));
        const auto rule = analytic::phase_classify(sweep_point(spec, at)).rule;
        t.rows.push_back({params, "phase_boundary", format_value(at.back()), rule});
    }
    return t;
}

Outcome cmd_sweep(const Flags& f, std::ostream& err, std::ostream& out)
{
    std::ifstream in(f.sweep);
    if (!in)
        throw ConfigError({"cannot open sweep file '" + f.sweep + "'"});
    const SweepSpec spec = parse_sweep(in);
    Outcome o;
    for (const Axis& a : spec.axes)
        o.table.params.push_back(a.name);

    std::vector<std::vector<double>> points;
    const std::vector<double> first = spec.axes[0].values();
    const std::vector<double> second = spec.axes.size() > 1 ? spec.axes[1].values() : std::vector<double>{};
    for (double a : first) {
        if (second.empty()) {
            points.push_back({a});
        } else {
            for (double b : second)
                points.push_back({a, b});
        }
    }

    const bool sim_requested = spec.outputs.count("simulated_delay") || spec.outputs.count("shannon_delay") ||
                               spec.outputs.count("ccdf");
    if (sim_requested && !f.simulate)
        err << "note: simulated outputs are skipped without --simulate\n";

    std::vector<std::optional<analytic::Verdict>> verdicts;
    const sim::RunOptions opt = run_options(f);
    for (const auto& coords : points) {
        const ScenarioConfig cfg = sweep_point(spec, coords);
        std::vector<std::string> params;
        for (double c : coords)
            params.push_back(format_value(c));
        for (const Issue& i : validate(cfg)) {
            if (i.severity == Issue::Severity::Violation)
                throw ConfigError({"grid point " + csv_line({params}) + ": " + i.message});
        }
        verdicts.push_back(verdict_at(spec, coords));

        if (spec.outputs.count("phase_verdict")) {
            try {
                phase_rows(cfg, params, o.table);
            } catch (const UnsupportedModel&) {
                o.table.rows.push_back({params, "phase_verdict", "", "no_analytic_rule"});
            }
        }
        if (spec.outputs.count("analytic_delay")) {
            try {
                analytic_rows(cfg, params, o.table);
            } catch (const UnsupportedModel&) {
                o.table.rows.push_back({params, "mean_delay", "", "unsupported"});
            } catch (const NumericError&) {
                o.table.rows.push_back({params, "mean_delay", "", "numeric_error"});
            }
        }
        if (!f.simulate)
            continue;
        if (spec.outputs.count("simulated_delay")) {
            const auto est = sim::estimate_mean_delay(cfg, f.samples, estimator(f), opt);
            o.verified = estimate_rows(cfg, est, f, params, false, o.table) && o.verified;
        }
        if (spec.outputs.count("shannon_delay")) {
            const auto est = sim::estimate_shannon_delay(cfg, f.samples, opt);
            o.table.rows.push_back({params, est.diverged ? "shannon_running_mean" : "shannon_delay",
                                    format_value(est.mean), to_string(est.estimator), format_value(est.std_error),
                                    flag(est.diverged), std::to_string(f.seed), format_value(est.window_radius)});
        }
        if (spec.outputs.count("ccdf")) {
            const std::vector<double> grid{10.0, 100.0, 1000.0, 10000.0};
            const auto pts = sim::estimate_delay_ccdf(cfg, grid, f.samples, opt);
            const double window = opt.window_radius ? *opt.window_radius : sim::default_window_radius(cfg);
            for (const auto& p : pts) {
                const std::string q = "_m" + format_value(p.m);
                o.table.rows.push_back({params, "ccdf" + q, format_value(p.ccdf), "geometric_mixture",
                                        format_value((p.hi - p.lo) / 3.92), "", std::to_string(f.seed),
                                        format_value(window)});
            }
        }
    }

    if (spec.outputs.count("phase_verdict")) {
        std::string path = f.boundary_out;
        if (path.empty() && !f.out.empty() && f.out != "-") {
            const auto dot = f.out.rfind('.');
            path = (dot == std::string::npos ? f.out : f.out.substr(0, dot)) + "_boundary.csv";
        }
        if (!path.empty())
            write_text(path, boundary_table(spec, points, verdicts).text(), out);
    }
    nlohmann::json axes = nlohmann::json::array();
    for (const Axis& a : spec.axes)
        axes.push_back({{"name", a.name}, {"min", a.min}, {"max", a.max}, {"steps", a.steps},
                        {"spacing", a.log_spacing ? "log" : "linear"}});
    o.record["config"] = spec.base;
    o.record["axes"] = axes;
    o.record["outputs"] = spec.outputs;
    return o;
}

nlohmann::json rows_json(const Table& t)
{
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : t.rows) {
        nlohmann::json j;
        for (std::size_t i = 0; i < t.params.size() && i < r.params.size(); ++i)
            j[t.params[i]] = r.params[i];
        j["quantity"] = r.quantity;
        j["value"] = r.value;
        j["method"] = r.method;
        j["stderr"] = r.std_error;
        j["diverged"] = r.diverged;
        j["seed"] = r.seed;
        j["window_radius"] = r.window_radius;
        rows.push_back(j);
    }
    return rows;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Mean local delay of slotted Aloha in Poisson MANETs: analytic values, Palm simulation, sweeps"};
    app.require_subcommand(1);
    Flags f;

    auto config_flag = [&](CLI::App* s) { s->add_option("--config", f.config, "scenario key-value file")->required(); };
    auto out_flags = [&](CLI::App* s) {
        s->add_option("--out", f.out, "CSV destination (default stdout)");
        s->add_option("--record", f.record, "write a JSON run record to this path");
    };
    auto sim_flags = [&](CLI::App* s) {
        s->add_option("--seed", f.seed, "master seed (default 0)");
        s->add_option("--samples", f.samples, "Palm samples (default 10000)");
        s->add_option("--window-radius", f.window_radius, "simulation window radius");
        s->add_option("--threads", f.threads, "worker threads (results do not depend on it)");
    };
    auto estimator_flags = [&](CLI::App* s) {
        s->add_option("--estimator", f.estimator, "semi or slot")->check(CLI::IsMember({"semi", "slot"}));
        s->add_option("--max-slots", f.max_slots, "slot horizon of the slot estimator");
        s->add_flag("--verify", f.verify, "exit 1 when simulation and analytics disagree");
    };

    CLI::App* analytic = app.add_subcommand("analytic", "closed-form or quadrature mean delay and phase verdict");
    config_flag(analytic);
    out_flags(analytic);

    CLI::App* simulate = app.add_subcommand("simulate", "Monte-Carlo estimate of the mean local delay");
    config_flag(simulate);
    out_flags(simulate);
    sim_flags(simulate);
    estimator_flags(simulate);

    CLI::App* sweep = app.add_subcommand("sweep", "phase diagram over one or two parameters");
    sweep->add_option("--sweep", f.sweep, "sweep specification file")->required();
    out_flags(sweep);
    sim_flags(sweep);
    estimator_flags(sweep);
    sweep->add_flag("--simulate", f.simulate, "also run the simulator at each grid point");
    sweep->add_option("--boundary-out", f.boundary_out, "boundary CSV (default <out>_boundary.csv)");

    CLI::App* ccdf = app.add_subcommand("ccdf", "delay CCDF by the geometric-mixture estimator");
    config_flag(ccdf);
    out_flags(ccdf);
    sim_flags(ccdf);
    ccdf->add_option("--m-max", f.m_max, "largest m (default 1e6)");

    CLI::App* shannon = app.add_subcommand("shannon", "Shannon (adaptive coding) local delay");
    config_flag(shannon);
    out_flags(shannon);
    sim_flags(shannon);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? Success : InputError;
    }

    try {
        Outcome o;
        std::string command;
        if (analytic->parsed()) {
            command = "analytic";
            o = cmd_analytic(f, err);
        } else if (simulate->parsed()) {
            command = "simulate";
            o = cmd_simulate(f, err);
        } else if (sweep->parsed()) {
            command = "sweep";
            o = cmd_sweep(f, err, out);
        } else if (ccdf->parsed()) {
            command = "ccdf";
            o = cmd_ccdf(f, err);
        } else {
            command = "shannon";
            o = cmd_shannon(f, err);
        }
        write_text(f.out, o.table.text(), out);
        if (!f.record.empty()) {
            nlohmann::json rec = o.record;
            rec["command"] = command;
            rec["version"] = MANET_VERSION;
            rec["master_seed"] = f.seed;
            rec["samples"] = f.samples;
            rec["estimator"] = f.estimator;
            rec["rows"] = rows_json(o.table);
            std::vector<std::string> args(argv, argv + argc);
            rec["argv"] = args;
            write_text(f.record, rec.dump(2) + "\n", out);
        }
        if (!o.verified) {
            err << "verification failed: simulation and analytic values disagree beyond tolerance\n";
            return VerifyFailure;
        }
        return Success;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
    } catch (const UnsupportedModel& e) {
        err << "error: unsupported model: " << e.what() << "\n";
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
    } catch (const NumericError& e) {
        err << "numeric failure: " << e.what() << "\n";
        return NumericFailure;
    }
    return InputError;
}

} // namespace manet::cli
