#include "pistonlab/piston.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pistonlab {

namespace {
constexpr double kPi = std::numbers::pi;
}

const char* to_string(ForceClass c) {
    switch (c) {
    case ForceClass::Attractive: return "attractive";
    case ForceClass::Repulsive: return "repulsive";
    default: return "null";
    }
}

const char* to_string(ForceMethod m) {
    return m == ForceMethod::Analytic ? "analytic" : "numeric-gradient";
}

bool ForceReport::consistent() const {
    if (std::abs(force) <= null_epsilon) return classification == ForceClass::Null;
    return classification == (force > 0.0 ? ForceClass::Repulsive : ForceClass::Attractive);
}

ForceClass classify_force(double force, double null_epsilon) {
    if (std::abs(force) <= null_epsilon) return ForceClass::Null;
    return force > 0.0 ? ForceClass::Repulsive : ForceClass::Attractive;
}

ForceReport make_force_report(double force, ForceMethod method, double null_epsilon,
                              std::optional<double> analytic_reference) {
    ForceReport report;
    report.force = force;
    report.method = method;
    report.null_epsilon = null_epsilon;
    report.classification = classify_force(force, null_epsilon);
    if (analytic_reference)
        report.cross_check_gap = std::abs(force - *analytic_reference);
    return report;
}

// ---------------------------------------------------------------------------
// Analytic forces
// ---------------------------------------------------------------------------

ForceReport force_analytic_interval(const IntervalSpec& spec) {
    spec.validate();
    const double a = spec.length;
    const double force = spec.mixed() ? kPi / (48.0 * a * a) : -kPi / (24.0 * a * a);
    return make_force_report(force, ForceMethod::Analytic, 0.0);
}

ForceReport force_analytic_star(std::size_t edge_count, double a,
                                BoundaryCondition piston_condition) {
    if (edge_count < 1) throw invalid_input("star graph needs at least one edge");
    if (!(a > 0.0)) throw invalid_input("edge length must be positive");
    const double n = static_cast<double>(edge_count);
    const double force = (piston_condition == BoundaryCondition::Neumann)
                             ? (n - 3.0) * kPi / (48.0 * a * a)
                             : (3.0 - 2.0 * n) * kPi / (48.0 * a * a);
    return make_force_report(force, ForceMethod::Analytic, 0.0);
}

// ---------------------------------------------------------------------------
// Numeric force
// ---------------------------------------------------------------------------

namespace {

double central_difference(const EnergyFn& energy, double a, double h) {
    return (energy(a + h) - energy(a - h)) / (2.0 * h);
}

} // namespace

ForceReport force_numeric(const EnergyFn& energy, double a, const NumericForceOptions& options) {
    if (!(a > 0.0)) throw invalid_input("piston position must be positive");
    const double h = a * options.step_factor;
    if (!(h > 0.0) || h >= a / 4.0)
        throw invalid_input("differentiation step must satisfy 0 < h < a/4");

    // Central difference at h and h/2, Richardson-combined to kill the h^2 term.
    const double d_h = central_difference(energy, a, h);
    const double d_h2 = central_difference(energy, a, 0.5 * h);
    const double derivative = (4.0 * d_h2 - d_h) / 3.0;

    ForceReport report = make_force_report(-derivative, ForceMethod::NumericGradient,
                                           options.null_epsilon, options.analytic_reference);
    return report;
}

// ---------------------------------------------------------------------------
// Rayleigh-Dowker transform
// ---------------------------------------------------------------------------

double rayleigh_dowker(const EnergyFn& conducting_energy, double a) {
    if (!(a > 0.0)) throw invalid_input("piston position must be positive");
    return conducting_energy(2.0 * a) - conducting_energy(a);
}

ForceReport rayleigh_dowker_force(const EnergyFn& conducting_energy, double a,
                                  const NumericForceOptions& options) {
    EnergyFn transformed = [&conducting_energy](double x) {
        return conducting_energy(2.0 * x) - conducting_energy(x);
    };
    return force_numeric(transformed, a, options);
}

double pressure_inside_permeable(double a) {
    if (!(a > 0.0)) throw invalid_input("plate separation must be positive");
    return (7.0 / 8.0) * kPi * kPi / (240.0 * a * a * a * a);
}

double pressure_long_shaft(double b) {
    if (!(b > 0.0)) throw invalid_input("shaft side must be positive");
    return kCatalan / (24.0 * b * b * b * b);
}

double piston3d_crossover_aspect() {
    // Aspect a/b where (7/8) pi^2/240 a^4 equals G/24 b^4.
    return std::pow(7.0 * kPi * kPi * 24.0 / (8.0 * 240.0 * kCatalan), 0.25);
}

void PistonAssembly3D::validate() const {
    if (!(a > 0.0) || !(b > 0.0))
        throw invalid_input("piston position and shaft side must be positive");
    if (shaft_length != 0.0 && !(shaft_length > a))
        throw invalid_input("shaft length must exceed the piston position");
}

PistonAssemblyResult net_piston_force_3d(double a, double b, double shaft_length) {
    PistonAssembly3D assembly;
    assembly.a = a;
    assembly.b = b;
    assembly.shaft_length = shaft_length;
    assembly.validate();
    assembly.inside_pressure = pressure_inside_permeable(a);
    assembly.outside_pressure = pressure_long_shaft(b);
    assembly.net_force = b * b * (assembly.inside_pressure - assembly.outside_pressure);

    ForceReport report = make_force_report(assembly.net_force, ForceMethod::Analytic, 0.0);
    if (a / b > 0.2)
        report.regime_warning =
            "a/b > 0.2: outside the parallel-plate regime; pressures are extrapolations";
    return {assembly, report};
}

// ---------------------------------------------------------------------------
// Cube verdict
// ---------------------------------------------------------------------------

CubeVerdict cube_permeable_verdict(double side, const BoxLadderConfig& ladder) {
    if (!(side > 0.0)) throw invalid_input("cube side must be positive");

    CubeVerdict verdict;
    verdict.side = side;
    const EnergyFn energy = box_energy_fn(side, side, side, ladder);
    verdict.energy_cube = energy(side);
    verdict.energy_doubled = energy(2.0 * side);
    verdict.cube_energy_positive = verdict.energy_cube > 0.0;
    verdict.doubled_closer_to_half =
        std::abs(verdict.energy_doubled - 0.5 * verdict.energy_cube) <
        std::abs(verdict.energy_doubled - verdict.energy_cube);

    NumericForceOptions fopt;
    fopt.null_epsilon = 1e-4 * std::abs(verdict.energy_cube) / side;
    verdict.permeable_force = rayleigh_dowker_force(energy, side, fopt);
    return verdict;
}

// ---------------------------------------------------------------------------
// Star piston assembly
// ---------------------------------------------------------------------------

void StarPistonAssembly::validate() const {
    spec.validate();
    if (shaft_length != 0.0)
        for (double a : spec.edge_lengths)
            if (!(shaft_length > a))
                throw invalid_input("shaft length must exceed every piston position");
}

StarPistonResult star_piston_force(const StarPistonAssembly& assembly,
                                   const LadderConfig& ladder,
                                   const NumericForceOptions& options) {
    assembly.validate();
    if (!assembly.spec.equal_lengths())
        throw invalid_input("star piston force requires equal piston positions");

    const double a = assembly.spec.edge_lengths.front();
    // Exterior shaft segments only shift piston-independent terms; the force
    // comes from the interior spectra alone, so shaft_length never enters.
    const EnergyFn energy =
        star_energy_fn(assembly.spec.edge_count(), assembly.spec.piston_condition, a, ladder);

    NumericForceOptions opts = options;
    if (!opts.analytic_reference)
        opts.analytic_reference =
            force_analytic_star(assembly.spec.edge_count(), a,
                                assembly.spec.piston_condition)
                .force;

    StarPistonResult result;
    result.finite_part = energy(a);
    result.report = force_numeric(energy, a, opts);
    result.shaft_length = assembly.shaft_length;
    return result;
}

ForceReport star_edge_force(const StarGraphSpec& spec, std::size_t edge,
                            const LadderConfig& ladder, const NumericForceOptions& options) {
    spec.validate();
    if (edge >= spec.edge_count())
        throw invalid_input("star edge index out of range");

    const double a_min =
        *std::min_element(spec.edge_lengths.begin(), spec.edge_lengths.end());
    LadderConfig anchored = ladder;
    if (anchored.t0 <= 0.0) anchored.t0 = a_min * ladder.t0_factor;

    const EnergyFn energy = [&spec, edge, anchored, a_min](double x) {
        StarGraphSpec varied = spec;
        varied.edge_lengths[edge] = x;
        FitOptions fopt;
        fopt.a_char = a_min;
        fopt.stability_abs = 1e-7 / a_min;
        return extract_finite_part(star_cutoff_samples(varied, anchored, StarMethod::Solver),
                                   DivergenceTemplate::linear_geometry(), fopt)
            .finite_part;
    };
    return force_numeric(energy, spec.edge_lengths[edge], options);
}

} // namespace pistonlab
