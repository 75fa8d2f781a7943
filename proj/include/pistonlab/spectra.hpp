#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pistonlab/errors.hpp"

namespace pistonlab {

// ---------------------------------------------------------------------------
// Geometry descriptions
// ---------------------------------------------------------------------------

/// Endpoint behavior of the scalar field: the field itself vanishes
/// (Dirichlet) or its normal derivative vanishes (Neumann).
enum class BoundaryCondition : std::uint8_t { Dirichlet, Neumann };

[[nodiscard]] const char* to_string(BoundaryCondition bc);

/// A single interval of length `a` with independent end conditions.
/// Natural units (hbar = c = 1) throughout.
struct IntervalSpec {
    double length = 1.0;
    BoundaryCondition left = BoundaryCondition::Dirichlet;
    BoundaryCondition right = BoundaryCondition::Dirichlet;

    void validate() const;
    [[nodiscard]] bool mixed() const { return left != right; }
};

/// N edges of lengths a_j joined at a central vertex where the field is
/// continuous and the outgoing derivatives sum to zero (Kirchhoff rule).
/// The outer endpoint of every edge carries the same piston condition.
struct StarGraphSpec {
    std::vector<double> edge_lengths;
    BoundaryCondition piston_condition = BoundaryCondition::Neumann;

    void validate() const;
    [[nodiscard]] std::size_t edge_count() const { return edge_lengths.size(); }
    [[nodiscard]] double total_length() const;
    [[nodiscard]] bool equal_lengths(double rel_tol = 0.0) const;

    static StarGraphSpec equal(std::size_t n, double a,
                               BoundaryCondition piston = BoundaryCondition::Neumann);
};

/// Rectangular electromagnetic cavity a x b1 x b2. `wall_model` only tags
/// the intended piston scenario; the mode content below is always that of
/// the all-conducting box (the permeable variant is obtained downstream by
/// the energy transform, never by direct mode counting).
enum class WallModel : std::uint8_t { AllConducting, PermeablePiston };

struct BoxSpec {
    double a = 1.0;
    double b1 = 1.0;
    double b2 = 1.0;
    WallModel wall_model = WallModel::AllConducting;

    void validate() const;
    [[nodiscard]] double volume() const { return a * b1 * b2; }
    [[nodiscard]] double min_side() const;
};

// ---------------------------------------------------------------------------
// Spectra
// ---------------------------------------------------------------------------

enum ModeFlags : std::uint8_t {
    ModeFlagNone = 0,
    ModeFlagZero = 1,        // the flagged omega = 0 constant mode
    ModeFlagDegenerate = 2,  // multiplicity assigned by the m-1 clustering rule
};

struct Mode {
    double omega = 0.0;
    int multiplicity = 1;
    std::uint8_t flags = ModeFlagNone;
};

/// Asymptotic mode-density descriptor used for certified truncation bounds.
/// For 1-D geometries the counting function obeys
///   N(w) - N(W) <= slope * (w - W) + window_const   for all w > W,
/// with slope = (total length)/pi. For the box, N(w) is bounded by the
/// inflated-octant lattice count  (pi/3) * a*b1*b2 * (w/pi + diag)^3.
struct TailDescriptor {
    enum class Kind : std::uint8_t { Linear, Box };
    Kind kind = Kind::Linear;
    double slope = 0.0;         // Linear: modes per unit frequency
    double window_const = 1.0;  // Linear: additive slack of the window bound
    double box_volume = 0.0;    // Box: a*b1*b2
    double box_diag = 0.0;      // Box: sqrt(1/a^2 + 1/b1^2 + 1/b2^2)

    static TailDescriptor linear(double total_length, double window_const);
    static TailDescriptor box(double a, double b1, double b2);
};

/// Ordered mode list up to a ceiling, plus the tail descriptor.
/// Frequencies are strictly increasing; equal frequencies merge into one
/// entry with summed multiplicity.
struct Spectrum {
    std::vector<Mode> modes;
    double omega_max = 0.0;
    TailDescriptor tail;
    std::string geometry_tag;

    [[nodiscard]] std::size_t mode_count_weighted() const;
    /// Number of modes (with multiplicity) with omega <= w.
    [[nodiscard]] std::size_t counting_function(double w) const;
    void validate() const;
};

// ---------------------------------------------------------------------------
// Spectrum generation
// ---------------------------------------------------------------------------

/// Exact interval spectrum: n*pi/a (n >= 1) for Dirichlet-Dirichlet, the same
/// plus the flagged zero mode for Neumann-Neumann, (2n+1)*pi/2a (n >= 0) for
/// mixed ends. Complete up to omega_max.
[[nodiscard]] Spectrum interval_spectrum(const IntervalSpec& spec, double omega_max);

/// Pole-free secular function of the star graph. For Neumann pistons
///   f(w) = sum_j sin(w a_j) * prod_{k != j} cos(w a_k),
/// for Dirichlet pistons
///   f(w) = sum_j cos(w a_j) * prod_{k != j} sin(w a_k).
/// Zeros of f, together with the m-1 rule at clustered trig zeros, are
/// exactly the graph eigenfrequencies; f never has poles, so brackets for
/// root finding are always evaluable.
[[nodiscard]] double star_secular_function(const StarGraphSpec& spec, double omega);

enum class StarMethod : std::uint8_t {
    Auto,        // closed form when all edges are exactly equal, else solver
    ClosedForm,  // two-family closed form (requires equal lengths)
    Solver,      // bracketed root finding on the secular structure
};

struct StarSolverOptions {
    double cluster_tol = 1e-8;   // merge trig zeros within this distance
    double bisect_tol = 1e-12;   // absolute bisection tolerance
    int max_bisect_iter = 200;
};

/// Full star-graph spectrum up to omega_max. Equal lengths with Neumann
/// pistons yield the union of n*pi/a (multiplicity 1, plus the flagged zero
/// mode) and (2n+1)*pi/2a (multiplicity N-1); Dirichlet pistons interchange
/// the two families. Unequal lengths are solved by bracketed root finding:
/// every interval between consecutive secular poles carries exactly one
/// simple root, and a cluster of m >= 2 simultaneous per-edge trig zeros
/// carries an eigenvalue of multiplicity m-1.
[[nodiscard]] Spectrum star_spectrum(const StarGraphSpec& spec, double omega_max,
                                     StarMethod method = StarMethod::Auto,
                                     const StarSolverOptions& options = {});

struct BoxEnumOptions {
    double mode_budget = 20e6;   // materialized (omega, mult) entries
};

/// Electromagnetic mode set of the perfectly conducting box:
/// w = pi * sqrt((l/a)^2 + (m/b1)^2 + (n/b2)^2) over nonnegative integers
/// with at least two nonzero indices; multiplicity 2 when all three are
/// nonzero, 1 when exactly one vanishes. Complete up to omega_max.
[[nodiscard]] Spectrum box_em_spectrum(const BoxSpec& spec, double omega_max,
                                       const BoxEnumOptions& options = {});

/// Streaming visit of the same mode set without materializing it;
/// `visit(omega, multiplicity)` is called in deterministic order.
/// Returns the number of modes visited (with multiplicity).
std::size_t box_em_for_each_mode(const BoxSpec& spec, double omega_max,
                                 const std::function<void(double, int)>& visit);

/// Upper bound on the weighted mode count of the box below omega.
[[nodiscard]] double box_em_count_bound(const BoxSpec& spec, double omega);

} // namespace pistonlab
