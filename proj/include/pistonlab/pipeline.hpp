#pragma once

#include <functional>
#include <vector>

#include "pistonlab/regular.hpp"

namespace pistonlab {

// ---------------------------------------------------------------------------
// Ladder configuration
// ---------------------------------------------------------------------------

/// Geometric cutoff ladder t_k = t0 * ratio^{-k}, k = 0..rungs-1. The top
/// rung sits at a_min/10: high enough to stay cheap, low enough that the
/// first few unmodeled Bernoulli orders cannot bias the finite part.
struct LadderConfig {
    double t0 = 0.0;           // 0 = derive from geometry (a_min * t0_factor)
    double t0_factor = 0.1;
    int rungs = 10;
    double ratio = 2.0;
    // Tail pollution enters the finite part almost verbatim at the smallest
    // rung, so the ceiling must be chosen well below the oracle tolerance,
    // not merely below the divergent lead.
    double tail_rel_tolerance = 1e-12;

    [[nodiscard]] std::vector<double> rung_values(double a_min) const;
};

/// Ladder tuned for the box sums: the window top sits at 0.6 a_min because
/// the dual-lattice corrections decay only geometrically in (t/2a_min)^2,
/// and the bottom at 0.15 a_min where mode counts are still affordable.
struct BoxLadderConfig {
    double t_min_factor = 0.15;   // t_min = a_min * t_min_factor
    int rungs = 11;               // top rung = t_min * ratio^(rungs-1) = 0.6 a_min
    double ratio = 1.148698354997035;  // 2^(1/5)
    double tail_rel_tolerance = 1e-9;
    double mode_visit_budget = 6e9;    // enumeration visits across the ladder
    int threads = 0;                   // 0 = hardware concurrency

    [[nodiscard]] std::vector<double> rung_values(double a_min) const;
};

// ---------------------------------------------------------------------------
// Geometry -> cutoff samples -> finite part
// ---------------------------------------------------------------------------

/// Samples T(t), E(t) on the ladder from a materialized spectrum generated
/// once at the ceiling required by the smallest rung.
[[nodiscard]] std::vector<CutoffSample> interval_cutoff_samples(const IntervalSpec& spec,
                                                                const LadderConfig& ladder = {});

[[nodiscard]] std::vector<CutoffSample> star_cutoff_samples(const StarGraphSpec& spec,
                                                            const LadderConfig& ladder = {},
                                                            StarMethod method = StarMethod::Auto);

/// Box samples are accumulated by streaming enumeration, one pass per rung
/// with the ceiling that rung needs; rows are deterministic for any thread
/// count (fixed-slice reduction order).
[[nodiscard]] std::vector<CutoffSample> box_cutoff_samples(const BoxSpec& spec,
                                                           const BoxLadderConfig& ladder = {});

/// Full numeric pipeline: spectrum -> cutoff ladder -> asymptotic fit.
[[nodiscard]] FinitePartFit interval_finite_part(const IntervalSpec& spec,
                                                 const LadderConfig& ladder = {});

[[nodiscard]] FinitePartFit star_finite_part(const StarGraphSpec& spec,
                                             const LadderConfig& ladder = {},
                                             StarMethod method = StarMethod::Auto);

[[nodiscard]] FinitePartFit box_finite_part(const BoxSpec& spec,
                                            const BoxLadderConfig& ladder = {});

// ---------------------------------------------------------------------------
// Energy functions a -> finite part, for numeric differentiation
// ---------------------------------------------------------------------------

using EnergyFn = std::function<double(double)>;

/// a -> finite part of the interval with these end conditions. The ladder is
/// anchored at `a_anchor` (0 = per-call a) so that closely spaced evaluations
/// share one t-grid and their fit biases cancel in differences.
[[nodiscard]] EnergyFn interval_energy_fn(BoundaryCondition left, BoundaryCondition right,
                                          double a_anchor = 0.0,
                                          const LadderConfig& ladder = {});

/// a -> finite part of the equal-length star graph (numeric pipeline).
[[nodiscard]] EnergyFn star_energy_fn(std::size_t edge_count, BoundaryCondition piston,
                                      double a_anchor = 0.0,
                                      const LadderConfig& ladder = {},
                                      StarMethod method = StarMethod::Auto);

/// a -> finite part of the box (a, b1, b2) with b1, b2 held fixed.
[[nodiscard]] EnergyFn box_energy_fn(double b1, double b2, double a_anchor = 0.0,
                                     const BoxLadderConfig& ladder = {});

} // namespace pistonlab
