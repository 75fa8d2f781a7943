// pistonlab — vacuum-energy and piston-force pipelines for intervals,
// star graphs, and electromagnetic rectangular boxes.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pistonlab/conformance.hpp"
#include "pistonlab/piston.hpp"
#include "pistonlab/serialize.hpp"
#include "pistonlab/spectrum_io.hpp"

namespace {

using pistonlab::format_double;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

// One row of output: ordered key/value pairs rendered as a table, a CSV
// line, or a JSON object. All doubles pass through format_double so equal
// configs give byte-identical files.
struct Row {
    std::vector<std::pair<std::string, std::string>> fields;

    void put(const std::string& key, const std::string& value) {
        fields.emplace_back(key, value);
    }
    void put(const std::string& key, double value) { put(key, format_double(value)); }
};

struct Report {
    std::string scenario;
    Row inputs;
    std::vector<Row> results;   // one Row per result line (sweeps have many)
    Row diagnostics;
};

std::string render_table(const Report& report) {
    std::ostringstream out;
    out << "scenario: " << report.scenario << "\n";
    for (const auto& [k, v] : report.inputs.fields) out << "  " << k << " = " << v << "\n";
    for (const Row& row : report.results) {
        out << "---\n";
        for (const auto& [k, v] : row.fields) out << "  " << k << " = " << v << "\n";
    }
    if (!report.diagnostics.fields.empty()) {
        out << "diagnostics:\n";
        for (const auto& [k, v] : report.diagnostics.fields)
            out << "  " << k << " = " << v << "\n";
    }
    return out.str();
}

std::string render_csv(const Report& report) {
    std::ostringstream out;
    if (report.results.empty()) return "";
    // Rows may differ in shape (failed sweep points carry error columns), so
    // the header is the union of keys in first-seen order.
    std::vector<std::string> keys;
    for (const Row& row : report.results)
        for (const auto& [k, v] : row.fields)
            if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
    for (std::size_t i = 0; i < keys.size(); ++i)
        out << (i ? "," : "") << pistonlab::csv_escape(keys[i]);
    out << "\n";
    for (const Row& row : report.results) {
        for (std::size_t i = 0; i < keys.size(); ++i) {
            std::string value;
            for (const auto& [k, v] : row.fields)
                if (k == keys[i]) {
                    value = v;
                    break;
                }
            out << (i ? "," : "") << pistonlab::csv_escape(value);
        }
        out << "\n";
    }
    return out.str();
}

std::string render_json(const Report& report) {
    ordered_json j;
    j["scenario"] = report.scenario;
    ordered_json inputs = ordered_json::object();
    for (const auto& [k, v] : report.inputs.fields) inputs[k] = v;
    j["inputs"] = inputs;
    ordered_json results = ordered_json::array();
    for (const Row& row : report.results) {
        ordered_json r = ordered_json::object();
        for (const auto& [k, v] : row.fields) r[k] = v;
        results.push_back(r);
    }
    j["results"] = results;
    ordered_json diag = ordered_json::object();
    for (const auto& [k, v] : report.diagnostics.fields) diag[k] = v;
    j["diagnostics"] = diag;
    return j.dump(2) + "\n";
}

int emit(const Report& report, const std::string& format, const std::string& out_path) {
    std::string text;
    if (format == "table") text = render_table(report);
    else if (format == "csv") text = render_csv(report);
    else if (format == "json") text = render_json(report);
    else {
        std::cerr << "unknown format '" << format << "'\n";
        return kExitUsage;
    }
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) {
            std::cerr << "cannot open output path '" << out_path << "'\n";
            return kExitUsage;
        }
        f << text;
    }
    return kExitOk;
}

pistonlab::BoundaryCondition parse_bc_char(char c) {
    if (c == 'D' || c == 'd') return pistonlab::BoundaryCondition::Dirichlet;
    if (c == 'N' || c == 'n') return pistonlab::BoundaryCondition::Neumann;
    throw CLI::ValidationError("--bc", "boundary conditions must be D or N");
}

void force_fields(Row& row, const pistonlab::ForceReport& report, const std::string& prefix) {
    row.put(prefix + "force", report.force);
    row.put(prefix + "classification", to_string(report.classification));
    row.put(prefix + "method", to_string(report.method));
    if (report.cross_check_gap) row.put(prefix + "cross_check_gap", *report.cross_check_gap);
    if (!report.regime_warning.empty()) row.put(prefix + "regime_warning", report.regime_warning);
}

void fit_fields(Row& row, const pistonlab::FinitePartFit& fit, const std::string& prefix) {
    row.put(prefix + "finite_part", fit.finite_part);
    row.put(prefix + "fit_residual", fit.residual);
    row.put(prefix + "fit_window_gap", fit.window_gap);
    for (std::size_t i = 0; i < fit.divergent_coefficients.size(); ++i)
        row.put(prefix + "divergent_c" + std::to_string(i), fit.divergent_coefficients[i]);
}

// ---------------------------------------------------------------------------
// Subcommand payloads
// ---------------------------------------------------------------------------

struct CommonOpts {
    std::string format = "table";
    std::string out_path;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--format", opts.format, "output format: table, csv, json")
        ->envname("PISTONLAB_FORMAT")
        ->check(CLI::IsMember({"table", "csv", "json"}));
    cmd->add_option("--out", opts.out_path, "write the report to this path instead of stdout");
}

struct LadderOpts {
    double t0_factor = 0.1;
    int rungs = 10;
    double tail_rel = 1e-12;
};

void add_ladder(CLI::App* cmd, LadderOpts& opts) {
    cmd->add_option("--t0-factor", opts.t0_factor, "top cutoff rung as a fraction of a_min")
        ->envname("PISTONLAB_T0_FACTOR");
    cmd->add_option("--rungs", opts.rungs, "number of cutoff ladder rungs")
        ->envname("PISTONLAB_RUNGS");
    cmd->add_option("--tail-rel", opts.tail_rel,
                    "certified tail bound relative to the leading divergence")
        ->envname("PISTONLAB_TAIL_REL");
}

pistonlab::LadderConfig to_ladder(const LadderOpts& opts) {
    pistonlab::LadderConfig ladder;
    ladder.t0_factor = opts.t0_factor;
    ladder.rungs = opts.rungs;
    ladder.tail_rel_tolerance = opts.tail_rel;
    return ladder;
}

struct BoxOpts {
    double t_min_factor = 0.15;
    int rungs = 11;
    double budget = 6e9;
    int threads = 0;
};

void add_box_ladder(CLI::App* cmd, BoxOpts& opts) {
    cmd->add_option("--t-min-factor", opts.t_min_factor,
                    "bottom cutoff rung as a fraction of the smallest side")
        ->envname("PISTONLAB_T_MIN_FACTOR");
    cmd->add_option("--box-rungs", opts.rungs, "box ladder rungs")
        ->envname("PISTONLAB_BOX_RUNGS");
    cmd->add_option("--budget", opts.budget, "mode visit budget across the ladder")
        ->envname("PISTONLAB_BUDGET");
    cmd->add_option("--threads", opts.threads, "worker threads (0 = hardware)")
        ->envname("PISTONLAB_THREADS");
}

pistonlab::BoxLadderConfig to_box_ladder(const BoxOpts& opts) {
    pistonlab::BoxLadderConfig ladder;
    ladder.t_min_factor = opts.t_min_factor;
    ladder.rungs = opts.rungs;
    ladder.mode_visit_budget = opts.budget;
    ladder.threads = opts.threads;
    return ladder;
}

void dump_spectrum_file(const pistonlab::Spectrum& spectrum, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw pistonlab::invalid_input("cannot open spectrum path '" + path + "'");
    pistonlab::write_spectrum(f, spectrum);
}

int run_interval(const std::string& bc, double a, bool want_energy, bool want_force,
                 bool numeric, double dump_omega_max, const std::string& dump_path,
                 const LadderOpts& lopts, const CommonOpts& copts) {
    if (bc.size() != 2) throw CLI::ValidationError("--bc", "expected two letters, e.g. DN");
    pistonlab::IntervalSpec spec{a, parse_bc_char(bc[0]), parse_bc_char(bc[1])};
    spec.validate();
    if (!dump_path.empty())
        dump_spectrum_file(pistonlab::interval_spectrum(spec, dump_omega_max), dump_path);
    if (!want_energy && !want_force) want_energy = want_force = true;

    Report report;
    report.scenario = "interval";
    report.inputs.put("bc", bc);
    report.inputs.put("a", a);

    Row row;
    if (want_energy) {
        row.put("analytic_energy", pistonlab::closed_form_energy_1d(spec));
        if (numeric)
            fit_fields(row, pistonlab::interval_finite_part(spec, to_ladder(lopts)),
                       "numeric_");
    }
    if (want_force) {
        const pistonlab::ForceReport analytic = pistonlab::force_analytic_interval(spec);
        force_fields(row, analytic, "");
        if (numeric) {
            pistonlab::NumericForceOptions fopt;
            fopt.analytic_reference = analytic.force;
            fopt.null_epsilon = 1e-6 / (a * a);
            const pistonlab::ForceReport numeric_report = pistonlab::force_numeric(
                pistonlab::interval_energy_fn(spec.left, spec.right, a, to_ladder(lopts)), a,
                fopt);
            force_fields(row, numeric_report, "numeric_");
        }
    }
    report.results.push_back(row);
    return emit(report, copts.format, copts.out_path);
}

int run_star(std::size_t n, double a, const std::string& piston,
             const std::vector<double>& lengths, bool numeric, double shaft,
             double dump_omega_max, const std::string& dump_path,
             const LadderOpts& lopts, const CommonOpts& copts) {
    const pistonlab::BoundaryCondition bc = piston == "dirichlet"
                                                ? pistonlab::BoundaryCondition::Dirichlet
                                                : pistonlab::BoundaryCondition::Neumann;
    if (!dump_path.empty()) {
        const pistonlab::StarGraphSpec spec =
            lengths.empty() ? pistonlab::StarGraphSpec::equal(n, a, bc)
                            : pistonlab::StarGraphSpec{lengths, bc};
        dump_spectrum_file(pistonlab::star_spectrum(spec, dump_omega_max), dump_path);
    }
    Report report;
    report.scenario = "star";
    Row row;

    if (!lengths.empty()) {
        pistonlab::StarGraphSpec spec{lengths, bc};
        spec.validate();
        report.inputs.put("lengths", [&lengths] {
            std::string s;
            for (std::size_t i = 0; i < lengths.size(); ++i)
                s += (i ? "," : "") + format_double(lengths[i]);
            return s;
        }());
        report.inputs.put("piston", to_string(bc));
        const pistonlab::FinitePartFit fit =
            pistonlab::star_finite_part(spec, to_ladder(lopts));
        fit_fields(row, fit, "");
    } else {
        report.inputs.put("n", static_cast<double>(n));
        report.inputs.put("a", a);
        report.inputs.put("piston", to_string(bc));
        if (shaft > 0.0) report.inputs.put("shaft_length", shaft);
        row.put("analytic_energy", pistonlab::closed_form_energy_star(n, a, bc));
        const pistonlab::ForceReport analytic = pistonlab::force_analytic_star(n, a, bc);
        force_fields(row, analytic, "");
        if (numeric) {
            pistonlab::StarPistonAssembly assembly{pistonlab::StarGraphSpec::equal(n, a, bc),
                                                   shaft};
            pistonlab::NumericForceOptions fopt;
            fopt.null_epsilon = 1e-6 / (a * a);
            const pistonlab::StarPistonResult result =
                pistonlab::star_piston_force(assembly, to_ladder(lopts), fopt);
            row.put("numeric_finite_part", result.finite_part);
            force_fields(row, result.report, "numeric_");
        }
    }
    report.results.push_back(row);
    return emit(report, copts.format, copts.out_path);
}

int run_box(double a, double b1, double b2, bool pressure, double dump_omega_max,
            const std::string& dump_path, const BoxOpts& bopts, const CommonOpts& copts) {
    pistonlab::BoxSpec spec{a, b1, b2, pistonlab::WallModel::AllConducting};
    spec.validate();
    if (!dump_path.empty())
        dump_spectrum_file(pistonlab::box_em_spectrum(spec, dump_omega_max), dump_path);
    Report report;
    report.scenario = "box";
    report.inputs.put("a", a);
    report.inputs.put("b1", b1);
    report.inputs.put("b2", b2);

    Row row;
    const pistonlab::BoxLadderConfig ladder = to_box_ladder(bopts);
    const pistonlab::FinitePartFit fit = pistonlab::box_finite_part(spec, ladder);
    fit_fields(row, fit, "");
    if (pressure) {
        if (b1 != b2)
            throw CLI::ValidationError("--pressure", "pressure needs a square cross-section");
        pistonlab::NumericForceOptions fopt;
        fopt.null_epsilon = 1e-9;
        const pistonlab::ForceReport force = pistonlab::force_numeric(
            pistonlab::box_energy_fn(b1, b2, a, ladder), a, fopt);
        force_fields(row, force, "");
        row.put("pressure", force.force / (b1 * b2));
    }
    report.results.push_back(row);
    return emit(report, copts.format, copts.out_path);
}

int run_piston3d(double a, double b, double shaft, const CommonOpts& copts) {
    const pistonlab::PistonAssemblyResult result = pistonlab::net_piston_force_3d(a, b, shaft);
    Report report;
    report.scenario = "piston3d";
    report.inputs.put("a", a);
    report.inputs.put("b", b);
    if (shaft > 0.0) report.inputs.put("shaft_length", shaft);

    Row row;
    row.put("inside_pressure", result.assembly.inside_pressure);
    row.put("outside_pressure", result.assembly.outside_pressure);
    row.put("net_force", result.assembly.net_force);
    force_fields(row, result.report, "");
    report.results.push_back(row);
    report.diagnostics.put("crossover_aspect", pistonlab::piston3d_crossover_aspect());
    return emit(report, copts.format, copts.out_path);
}

int run_sweep(const std::string& scenario, const std::string& param,
              const std::vector<double>& values, const std::string& bc, double a, double b,
              const std::string& piston, bool numeric, const LadderOpts& lopts,
              const BoxOpts& bopts, const CommonOpts& copts) {
    Report report;
    report.scenario = "sweep";
    report.inputs.put("target", scenario);
    report.inputs.put("param", param);

    bool any_failed = false;
    for (double v : values) {
        Row row;
        row.put(param, v);
        try {
            if (scenario == "interval" && param == "a") {
                if (bc.size() != 2)
                    throw pistonlab::invalid_input("--bc must be two letters");
                pistonlab::IntervalSpec spec{v, parse_bc_char(bc[0]), parse_bc_char(bc[1])};
                force_fields(row, pistonlab::force_analytic_interval(spec), "");
                if (numeric) {
                    pistonlab::NumericForceOptions fopt;
                    fopt.null_epsilon = 1e-6 / (v * v);
                    force_fields(row,
                                 pistonlab::force_numeric(
                                     pistonlab::interval_energy_fn(spec.left, spec.right, v,
                                                                   to_ladder(lopts)),
                                     v, fopt),
                                 "numeric_");
                }
            } else if (scenario == "star" && param == "n") {
                const auto n = static_cast<std::size_t>(v);
                const pistonlab::BoundaryCondition cond =
                    piston == "dirichlet" ? pistonlab::BoundaryCondition::Dirichlet
                                          : pistonlab::BoundaryCondition::Neumann;
                force_fields(row, pistonlab::force_analytic_star(n, a, cond), "");
                if (numeric) {
                    pistonlab::NumericForceOptions fopt;
                    fopt.null_epsilon = 1e-6 / (a * a);
                    force_fields(row,
                                 pistonlab::force_numeric(
                                     pistonlab::star_energy_fn(n, cond, a, to_ladder(lopts)),
                                     a, fopt),
                                 "numeric_");
                }
            } else if (scenario == "box" && param == "aspect") {
                // aspect = a/b at b = 1, numeric pipeline pressure
                const double aa = v * b;
                pistonlab::NumericForceOptions fopt;
                fopt.null_epsilon = 1e-9;
                const pistonlab::ForceReport force = pistonlab::force_numeric(
                    pistonlab::box_energy_fn(b, b, aa, to_box_ladder(bopts)), aa, fopt);
                row.put("pressure", force.force / (b * b));
                force_fields(row, force, "");
            } else if (scenario == "piston3d" && param == "aspect") {
                const pistonlab::PistonAssemblyResult r =
                    pistonlab::net_piston_force_3d(v * b, b);
                row.put("net_force", r.assembly.net_force);
                force_fields(row, r.report, "");
            } else {
                throw pistonlab::invalid_input("unsupported sweep scenario/parameter pair");
            }
            row.put("status", "ok");
        } catch (const pistonlab::error& e) {
            row.put("status", "failed");
            row.put("error", e.what());
            any_failed = true;
        }
        report.results.push_back(row);
    }
    const int rc = emit(report, copts.format, copts.out_path);
    if (rc != kExitOk) return rc;
    return any_failed ? kExitCheckFailed : kExitOk;
}

int run_paper_suite(bool no_3d, int threads, bool emit_sign_table,
                    const CommonOpts& copts) {
    pistonlab::ConformanceOptions options;
    options.include_3d = !no_3d;
    options.threads = threads;
    const std::vector<pistonlab::CheckResult> results =
        pistonlab::run_conformance_suite(options);

    Report report;
    report.scenario = "paper-suite";
    report.inputs.put("include_3d", no_3d ? "false" : "true");
    std::size_t passed = 0;
    for (const pistonlab::CheckResult& r : results) {
        Row row;
        row.put("check", r.id);
        row.put("status", r.passed ? "pass" : "FAIL");
        row.put("measured", r.measured);
        row.put("expected", r.expected);
        row.put("tolerance", r.tolerance);
        row.put("discrepancy", r.discrepancy);
        row.put("description", r.description);
        if (!r.detail.empty()) row.put("detail", r.detail);
        report.results.push_back(row);
        if (r.passed) ++passed;
    }
    report.diagnostics.put("passed", static_cast<double>(passed));
    report.diagnostics.put("total", static_cast<double>(results.size()));
    if (emit_sign_table)
        report.diagnostics.put("sign_table", pistonlab::sign_table_fixture().dump());

    const int rc = emit(report, copts.format, copts.out_path);
    if (rc != kExitOk) return rc;
    return pistonlab::all_passed(results) ? kExitOk : kExitCheckFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"vacuum-energy spectra, regularized energies, and piston forces"};
    app.require_subcommand(1);

    // interval ------------------------------------------------------------
    auto* interval = app.add_subcommand("interval", "1-D interval piston");
    std::string bc = "DD";
    double a = 1.0;
    bool want_energy = false, want_force = false, numeric = false;
    LadderOpts lopts;
    CommonOpts copts_interval;
    interval->add_option("--bc", bc, "end conditions, two of D/N (e.g. DN)")->required();
    interval->add_option("--a", a, "interval length")->required();
    interval->add_flag("--energy", want_energy, "report the finite vacuum energy");
    interval->add_flag("--force", want_force, "report the piston force");
    interval->add_flag("--numeric", numeric, "also run the numeric pipeline");
    double iv_dump_omega = 100.0;
    std::string iv_dump_path;
    interval->add_option("--dump-spectrum", iv_dump_path,
                         "write the mode list to this path in columnar text");
    interval->add_option("--omega-max", iv_dump_omega, "ceiling for --dump-spectrum");
    add_ladder(interval, lopts);
    add_common(interval, copts_interval);

    // star ------------------------------------------------------------------
    auto* star = app.add_subcommand("star", "quantum star-graph pistons");
    std::size_t star_n = 3;
    double star_a = 1.0, star_shaft = 0.0;
    std::string piston = "neumann";
    std::vector<double> star_lengths;
    bool star_numeric = false;
    LadderOpts star_lopts;
    CommonOpts copts_star;
    star->add_option("--n", star_n, "number of edges");
    star->add_option("--a", star_a, "common piston distance");
    star->add_option("--piston", piston, "piston condition: neumann or dirichlet")
        ->check(CLI::IsMember({"neumann", "dirichlet"}));
    star->add_option("--lengths", star_lengths,
                     "explicit edge lengths (unequal-length solver pipeline)")
        ->delimiter(',');
    star->add_option("--shaft", star_shaft, "bookkeeping shaft length L");
    star->add_flag("--numeric", star_numeric, "also run the numeric pipeline");
    double star_dump_omega = 100.0;
    std::string star_dump_path;
    star->add_option("--dump-spectrum", star_dump_path,
                     "write the mode list to this path in columnar text");
    star->add_option("--omega-max", star_dump_omega, "ceiling for --dump-spectrum");
    add_ladder(star, star_lopts);
    add_common(star, copts_star);

    // box ---------------------------------------------------------------
    auto* box = app.add_subcommand("box", "electromagnetic box energies");
    double box_a = 1.0, box_b1 = 1.0, box_b2 = 1.0;
    bool box_pressure = false;
    BoxOpts bopts;
    CommonOpts copts_box;
    box->add_option("--a", box_a, "piston-direction side")->required();
    box->add_option("--b1", box_b1, "first transverse side");
    box->add_option("--b2", box_b2, "second transverse side");
    box->add_flag("--pressure", box_pressure,
                  "numeric-gradient pressure on the a-facing wall");
    double box_dump_omega = 30.0;
    std::string box_dump_path;
    box->add_option("--dump-spectrum", box_dump_path,
                    "write the mode list to this path in columnar text");
    box->add_option("--omega-max", box_dump_omega, "ceiling for --dump-spectrum");
    add_box_ladder(box, bopts);
    add_common(box, copts_box);

    // piston3d ----------------------------------------------------------
    auto* piston3d = app.add_subcommand("piston3d", "permeable piston in a conducting shaft");
    double p3_a = 0.1, p3_b = 1.0, p3_shaft = 0.0;
    CommonOpts copts_p3;
    piston3d->add_option("--a", p3_a, "piston position")->required();
    piston3d->add_option("--b", p3_b, "shaft side")->required();
    piston3d->add_option("--L", p3_shaft, "bookkeeping shaft length");
    add_common(piston3d, copts_p3);

    // sweep ---------------------------------------------------------------
    auto* sweep = app.add_subcommand("sweep", "evaluate a scenario over a parameter grid");
    std::string sweep_scenario = "interval", sweep_param = "a", sweep_bc = "DD",
                sweep_piston = "neumann";
    std::vector<double> sweep_values;
    double sweep_a = 1.0, sweep_b = 1.0;
    bool sweep_numeric = false;
    LadderOpts sweep_lopts;
    BoxOpts sweep_bopts;
    CommonOpts copts_sweep;
    sweep->add_option("--scenario", sweep_scenario, "interval, star, box, or piston3d")
        ->check(CLI::IsMember({"interval", "star", "box", "piston3d"}));
    sweep->add_option("--param", sweep_param, "swept parameter (a, n, aspect)");
    sweep->add_option("--values", sweep_values, "grid values")->required()->delimiter(',');
    sweep->add_option("--bc", sweep_bc, "interval end conditions");
    sweep->add_option("--a", sweep_a, "fixed star piston distance");
    sweep->add_option("--b", sweep_b, "fixed box/shaft side");
    sweep->add_option("--piston", sweep_piston, "star piston condition")
        ->check(CLI::IsMember({"neumann", "dirichlet"}));
    sweep->add_flag("--numeric", sweep_numeric, "numeric pipeline at each grid point");
    add_ladder(sweep, sweep_lopts);
    add_box_ladder(sweep, sweep_bopts);
    add_common(sweep, copts_sweep);

    // paper-suite ---------------------------------------------------------
    auto* suite = app.add_subcommand("paper-suite", "run the full verification matrix");
    bool no_3d = false, emit_signs = false;
    int suite_threads = 0;
    CommonOpts copts_suite;
    suite->add_flag("--no-3d", no_3d, "skip the minutes-long box checks");
    suite->add_flag("--sign-table", emit_signs, "attach the machine-readable sign table");
    suite->add_option("--threads", suite_threads, "worker threads (0 = hardware)")
        ->envname("PISTONLAB_THREADS");
    add_common(suite, copts_suite);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (interval->parsed())
            return run_interval(bc, a, want_energy, want_force, numeric, iv_dump_omega,
                                iv_dump_path, lopts, copts_interval);
        if (star->parsed())
            return run_star(star_n, star_a, piston, star_lengths, star_numeric, star_shaft,
                            star_dump_omega, star_dump_path, star_lopts, copts_star);
        if (box->parsed())
            return run_box(box_a, box_b1, box_b2, box_pressure, box_dump_omega,
                           box_dump_path, bopts, copts_box);
        if (piston3d->parsed()) return run_piston3d(p3_a, p3_b, p3_shaft, copts_p3);
        if (sweep->parsed())
            return run_sweep(sweep_scenario, sweep_param, sweep_values, sweep_bc, sweep_a,
                             sweep_b, sweep_piston, sweep_numeric, sweep_lopts, sweep_bopts,
                             copts_sweep);
        if (suite->parsed())
            return run_paper_suite(no_3d, suite_threads, emit_signs, copts_suite);
    } catch (const pistonlab::invalid_input& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitUsage;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitUsage;
    } catch (const pistonlab::error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitUsage;
}
