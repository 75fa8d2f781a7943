#pragma once

#include <optional>
#include <vector>

#include "pistonlab/spectra.hpp"

namespace pistonlab {

// ---------------------------------------------------------------------------
// Cutoff samples
// ---------------------------------------------------------------------------

/// One rung of the cutoff ladder: the cylinder trace T(t) = sum e^{-w t},
/// the regularized energy E(t) = (1/2) sum w e^{-w t}, and a certified bound
/// on what the truncated tail of the spectrum could still contribute.
struct CutoffSample {
    double t = 0.0;
    double trace = 0.0;
    double energy = 0.0;
    double trace_tail_bound = 0.0;
    double energy_tail_bound = 0.0;
};

struct TraceOptions {
    /// Tail bound must stay below this fraction of the leading divergence.
    double tail_rel_tolerance = 1e-10;
};

/// T(t) over the enumerated modes (compensated summation). Zero modes
/// contribute their multiplicity. Throws insufficient_spectrum, naming the
/// ceiling that would suffice, when the certified tail bound at this t
/// exceeds the tolerance.
[[nodiscard]] double cylinder_trace(const Spectrum& spectrum, double t,
                                    const TraceOptions& options = {});

/// E(t) = (1/2) sum mult * w * e^{-w t}, the term-wise -1/2 dT/dt.
[[nodiscard]] double regularized_energy(const Spectrum& spectrum, double t,
                                        const TraceOptions& options = {});

/// Certified bounds on the omitted tails  sum_{w > ceiling} mult e^{-w t}
/// and  (1/2) sum_{w > ceiling} mult w e^{-w t}.
[[nodiscard]] double trace_tail_bound(const TailDescriptor& tail, double omega_max, double t);
[[nodiscard]] double energy_tail_bound(const TailDescriptor& tail, double omega_max, double t);

/// Leading small-t divergence of E(t) implied by the tail descriptor
/// (total_length/(2 pi t^2) for 1-D, 3V/(pi^2 t^4) for the box); the
/// yardstick against which tail tolerances are measured.
[[nodiscard]] double leading_energy_divergence(const TailDescriptor& tail, double t);

/// Smallest ceiling whose energy-tail bound at t is below `target`.
[[nodiscard]] double required_omega_max(const TailDescriptor& tail, double t, double target);

/// Both sums for one t, with their certified tail bounds attached.
[[nodiscard]] CutoffSample cutoff_sample(const Spectrum& spectrum, double t,
                                         const TraceOptions& options = {});

// ---------------------------------------------------------------------------
// Divergence removal
// ---------------------------------------------------------------------------

/// Model for the small-t structure of E(t): a sum of fitted (or a priori
/// fixed) negative powers, the always-free t^0 term, optional t*ln t, and a
/// list of positive slack powers absorbing the O(t) remainder.
struct DivergenceTemplate {
    struct Term {
        int power = -2;                        // strictly negative
        std::optional<double> fixed_coefficient;  // in t-units; fitted if absent
    };
    std::vector<Term> divergent;               // powers strictly decreasing
    std::vector<int> slack_powers = {1};       // positive powers, ascending
    bool include_log_linear = false;           // admit a t*ln(t) column

    void validate() const;
    [[nodiscard]] std::size_t free_coefficient_count() const;

    /// Free 1/t^2 divergence with slack through t^4; default for intervals
    /// and star graphs.
    static DivergenceTemplate linear_geometry();
    /// Free t^-4 and t^-2 divergences with even slack; default for the
    /// electromagnetic box, whose trace carries no surface, t^-1, or log
    /// terms.
    static DivergenceTemplate box_geometry();
    /// Every power from t^-4 to t^-1 free plus t*ln t; kept for window
    /// stability experiments (it goes degenerate on narrow windows).
    static DivergenceTemplate box_geometry_defensive();
};

struct FitOptions {
    double a_char = 1.0;               // rescale to tau = t / a_char before fitting
    double condition_threshold = 1e12;
    double residual_threshold = 1e-4;  // max relative residual allowed
    double stability_rel = 1e-3;       // window gap allowed, relative to |finite part|
    double stability_abs = 1e-7;       // absolute gap floor, in energy units
    bool check_stability = true;
};

/// Result of removing the cutoff divergences from a ladder of samples.
struct FinitePartFit {
    double finite_part = 0.0;
    std::vector<double> divergent_coefficients;  // t-units, template order
    double log_linear_coefficient = 0.0;
    std::vector<double> slack_coefficients;
    double residual = 0.0;        // max relative fit residual
    double condition = 0.0;
    double window_gap = 0.0;      // |finite part change| when largest t is dropped
    std::vector<double> window;   // the t ladder used (descending)
};

/// Weighted least-squares fit of E(t) against the template in the rescaled
/// variable tau = t/a_char. Requires at least (free coefficients + 2) samples
/// on a decreasing ladder. Throws unreliable_fit on ill conditioning or an
/// out-of-tolerance residual, fit_instability when the finite part moves too
/// much under dropping the largest-t sample.
[[nodiscard]] FinitePartFit extract_finite_part(const std::vector<CutoffSample>& samples,
                                                const DivergenceTemplate& templ,
                                                const FitOptions& options = {});

/// Analytic finite vacuum energy of the interval: -pi/24a for matched ends
/// (Dirichlet-Dirichlet or Neumann-Neumann), +pi/48a for mixed ends. The
/// oracle for the numeric extraction path.
[[nodiscard]] double closed_form_energy_1d(const IntervalSpec& spec);

/// Analytic finite vacuum energy of the equal-length star graph:
/// (N-3) pi/48a for Neumann pistons, (3-2N) pi/48a for Dirichlet pistons.
[[nodiscard]] double closed_form_energy_star(std::size_t edge_count, double a,
                                             BoundaryCondition piston_condition);

} // namespace pistonlab
