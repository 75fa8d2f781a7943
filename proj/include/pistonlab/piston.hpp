#pragma once

#include <optional>
#include <string>

#include "pistonlab/pipeline.hpp"

namespace pistonlab {

// ---------------------------------------------------------------------------
// Force reports
// ---------------------------------------------------------------------------

/// Sign convention: positive force pushes the piston toward larger a
/// (repulsive); negative pulls it inward (attractive).
enum class ForceClass : std::uint8_t { Attractive, Repulsive, Null };

[[nodiscard]] const char* to_string(ForceClass c);

enum class ForceMethod : std::uint8_t { Analytic, NumericGradient };

[[nodiscard]] const char* to_string(ForceMethod m);

struct ForceReport {
    double force = 0.0;
    ForceClass classification = ForceClass::Null;
    ForceMethod method = ForceMethod::Analytic;
    double null_epsilon = 0.0;                  // |force| <= eps classifies as null
    std::optional<double> cross_check_gap;      // |analytic - numeric| when both known
    std::string regime_warning;                 // nonempty when outside a formula's regime

    [[nodiscard]] bool consistent() const;
};

[[nodiscard]] ForceClass classify_force(double force, double null_epsilon);

[[nodiscard]] ForceReport make_force_report(double force, ForceMethod method,
                                            double null_epsilon,
                                            std::optional<double> analytic_reference = std::nullopt);

// ---------------------------------------------------------------------------
// Analytic forces
// ---------------------------------------------------------------------------

/// -pi/24a^2 for matched ends (attractive), +pi/48a^2 for mixed (repulsive).
[[nodiscard]] ForceReport force_analytic_interval(const IntervalSpec& spec);

/// Equal-length star graph: (N-3) pi/48a^2 for Neumann pistons;
/// (3-2N) pi/48a^2 for Dirichlet pistons (the two mode families swap
/// multiplicities), attractive for every N > 1.
[[nodiscard]] ForceReport force_analytic_star(std::size_t edge_count, double a,
                                              BoundaryCondition piston_condition);

// ---------------------------------------------------------------------------
// Numeric force
// ---------------------------------------------------------------------------

struct NumericForceOptions {
    double step_factor = 1e-3;        // h = a * step_factor
    double null_epsilon = 1e-6;
    std::optional<double> analytic_reference;
};

/// F = -dE/da by central differences with one Richardson refinement
/// (h and h/2). Reports the gap to an analytic value when one is supplied.
[[nodiscard]] ForceReport force_numeric(const EnergyFn& energy, double a,
                                        const NumericForceOptions& options = {});

// ---------------------------------------------------------------------------
// The permeable-wall transform and the 3-D piston
// ---------------------------------------------------------------------------

/// Energy of the box whose lid is infinitely permeable, from two
/// all-conducting energies: E_bar(a) = E(2a) - E(a).
[[nodiscard]] double rayleigh_dowker(const EnergyFn& conducting_energy, double a);

/// Force on the permeable lid: differentiate the transform with respect to
/// a (not 2a), i.e. F_bar(a) = -2 E'(2a) + E'(a), by the same central
/// difference scheme as force_numeric.
[[nodiscard]] ForceReport rayleigh_dowker_force(const EnergyFn& conducting_energy, double a,
                                                const NumericForceOptions& options = {});

/// Repulsive pressure on the permeable lid in the parallel-plate regime
/// (a << b): +(7/8) pi^2 / (240 a^4).
[[nodiscard]] double pressure_inside_permeable(double a);

/// Repulsive pressure contributed by the far end of a long square shaft
/// ((L-a) >> b): +G/(24 b^4) with Catalan's constant G; independent of the
/// distant plate's type.
[[nodiscard]] double pressure_long_shaft(double b);

/// Catalan's constant, accurate to all stored digits.
inline constexpr double kCatalan = 0.9159655941772190150546;

/// Aspect ratio a/b at which the two pressures balance (diagnostic only;
/// both formulas are outside their strict regimes there).
[[nodiscard]] double piston3d_crossover_aspect();

struct PistonAssembly3D {
    double a = 0.1;
    double b = 1.0;          // square cross-section b x b
    double shaft_length = 0.0;  // bookkeeping L >> a; never enters the force
    double inside_pressure = 0.0;
    double outside_pressure = 0.0;
    double net_force = 0.0;

    void validate() const;
};

struct PistonAssemblyResult {
    PistonAssembly3D assembly;
    ForceReport report;
};

/// Net force on the permeable piston in the conducting shaft:
/// b^2 * (inside pressure - long-shaft pressure). Positive (repulsive) for
/// a << b. Outside the a/b <= 0.2 regime the report carries a warning but
/// the numbers are still returned.
[[nodiscard]] PistonAssemblyResult net_piston_force_3d(double a, double b,
                                                       double shaft_length = 0.0);

// ---------------------------------------------------------------------------
// Cube verdict
// ---------------------------------------------------------------------------

struct CubeVerdict {
    double side = 1.0;
    double energy_cube = 0.0;      // E(s, s, s)
    double energy_doubled = 0.0;   // E(2s, s, s)
    bool cube_energy_positive = false;
    bool doubled_closer_to_half = false;  // |E2 - E1/2| < |E2 - E1|
    ForceReport permeable_force;          // Rayleigh-Dowker force at a = side
};

/// Numeric verdict for the cube: the sign of the conducting cube's energy,
/// whether E(2s,s,s) lies closer to E/2 than to E, and the classification
/// of the Rayleigh-Dowker force on the permeable lid at the cubical point.
[[nodiscard]] CubeVerdict cube_permeable_verdict(double side,
                                                 const BoxLadderConfig& ladder = {});

// ---------------------------------------------------------------------------
// Star piston assembly (bookkeeping wrapper)
// ---------------------------------------------------------------------------

/// Shaft length L of the star scenario is pure bookkeeping: the exterior
/// segments contribute only piston-position-independent terms, so the
/// finite part and force are computed from the interior spectra alone and
/// are bitwise independent of L.
struct StarPistonAssembly {
    StarGraphSpec spec;
    double shaft_length = 0.0;

    void validate() const;
};

struct StarPistonResult {
    double finite_part = 0.0;
    ForceReport report;
    double shaft_length = 0.0;
};

[[nodiscard]] StarPistonResult star_piston_force(const StarPistonAssembly& assembly,
                                                 const LadderConfig& ladder = {},
                                                 const NumericForceOptions& options = {});

/// Exploratory diagnostic: the force on one individual piston of an
/// unequal-length star, -dE/da_j with the other edges held fixed, through
/// the root-finder pipeline. Sign information only; there is no closed
/// form to check against.
[[nodiscard]] ForceReport star_edge_force(const StarGraphSpec& spec, std::size_t edge,
                                          const LadderConfig& ladder = {},
                                          const NumericForceOptions& options = {});

} // namespace pistonlab
