#include "pistonlab/serialize.hpp"

#include <cstdio>

namespace pistonlab {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string quoted = "\"";
    for (char c : field) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

namespace {
// Numbers pass through format_double so JSON output is byte-stable.
nlohmann::json num(double v) { return nlohmann::json(format_double(v)); }
}

nlohmann::json to_json(const ForceReport& report) {
    nlohmann::json j;
    j["force"] = num(report.force);
    j["classification"] = to_string(report.classification);
    j["method"] = to_string(report.method);
    j["null_epsilon"] = num(report.null_epsilon);
    if (report.cross_check_gap)
        j["cross_check_gap"] = num(*report.cross_check_gap);
    if (!report.regime_warning.empty())
        j["regime_warning"] = report.regime_warning;
    return j;
}

nlohmann::json to_json(const FinitePartFit& fit) {
    nlohmann::json j;
    j["finite_part"] = num(fit.finite_part);
    j["residual"] = num(fit.residual);
    j["condition"] = num(fit.condition);
    j["window_gap"] = num(fit.window_gap);
    nlohmann::json coeffs = nlohmann::json::array();
    for (double c : fit.divergent_coefficients) coeffs.push_back(num(c));
    j["divergent_coefficients"] = coeffs;
    if (fit.log_linear_coefficient != 0.0)
        j["log_linear_coefficient"] = num(fit.log_linear_coefficient);
    nlohmann::json slack = nlohmann::json::array();
    for (double c : fit.slack_coefficients) slack.push_back(num(c));
    j["slack_coefficients"] = slack;
    nlohmann::json window = nlohmann::json::array();
    for (double t : fit.window) window.push_back(num(t));
    j["window"] = window;
    return j;
}

nlohmann::json to_json(const PistonAssembly3D& assembly) {
    nlohmann::json j;
    j["a"] = num(assembly.a);
    j["b"] = num(assembly.b);
    if (assembly.shaft_length > 0.0) j["shaft_length"] = num(assembly.shaft_length);
    j["inside_pressure"] = num(assembly.inside_pressure);
    j["outside_pressure"] = num(assembly.outside_pressure);
    j["net_force"] = num(assembly.net_force);
    return j;
}

nlohmann::json to_json(const CubeVerdict& verdict) {
    nlohmann::json j;
    j["side"] = num(verdict.side);
    j["energy_cube"] = num(verdict.energy_cube);
    j["energy_doubled"] = num(verdict.energy_doubled);
    j["cube_energy_positive"] = verdict.cube_energy_positive;
    j["doubled_closer_to_half"] = verdict.doubled_closer_to_half;
    j["permeable_force"] = to_json(verdict.permeable_force);
    return j;
}

nlohmann::json sign_table_fixture() {
    nlohmann::json rows = nlohmann::json::array();
    auto row = [&rows](const std::string& scenario, const std::string& condition,
                       const std::string& expected) {
        rows.push_back({{"scenario", scenario},
                        {"condition", condition},
                        {"expected_classification", expected}});
    };
    row("interval", "matched ends (DD or NN)", "attractive");
    row("interval", "mixed ends (DN)", "repulsive");
    row("star_neumann", "N < 3", "attractive");
    row("star_neumann", "N = 3", "null");
    row("star_neumann", "N > 3", "repulsive");
    row("star_dirichlet", "N > 1", "attractive");
    row("piston3d_permeable", "a/b <= 0.2", "repulsive");
    row("cube_permeable", "a = b", "attractive");
    return {{"sign_table", rows}};
}

} // namespace pistonlab
