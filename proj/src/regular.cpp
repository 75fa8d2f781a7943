#include "pistonlab/regular.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "pistonlab/numeric.hpp"

namespace pistonlab {

namespace {
constexpr double kPi = std::numbers::pi;
}

// ---------------------------------------------------------------------------
// Numeric utilities (declared in numeric.hpp)
// ---------------------------------------------------------------------------

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double abs_tol, int max_iter) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (std::signbit(flo) == std::signbit(fhi))
        throw numerical_failure("bisect: endpoints do not bracket a sign change", lo, hi);

    for (int i = 0; i < max_iter; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo <= std::max(abs_tol, 4.0 * std::numeric_limits<double>::epsilon() *
                                             std::abs(mid)))
            return mid;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if (std::signbit(fm) == std::signbit(flo)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    throw numerical_failure("bisect: iteration budget exhausted", lo, hi);
}

LeastSquaresResult solve_weighted_least_squares(const std::vector<std::vector<double>>& columns,
                                                const std::vector<double>& rhs,
                                                const std::vector<double>& weights) {
    const std::size_t n = rhs.size();
    const std::size_t m = columns.size();
    if (m == 0 || n < m)
        throw invalid_input("least squares: need at least as many rows as columns");
    for (const auto& col : columns)
        if (col.size() != n)
            throw invalid_input("least squares: ragged column");
    if (weights.size() != n)
        throw invalid_input("least squares: weight/row mismatch");

    // Weighted, column-equilibrated copy.
    std::vector<std::vector<double>> A(m, std::vector<double>(n));
    std::vector<double> colscale(m, 1.0);
    for (std::size_t j = 0; j < m; ++j) {
        double norm2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            A[j][i] = columns[j][i] * weights[i];
            norm2 += A[j][i] * A[j][i];
        }
        const double norm = std::sqrt(norm2);
        if (!(norm > 0.0))
            throw invalid_input("least squares: zero column");
        colscale[j] = norm;
        for (std::size_t i = 0; i < n; ++i) A[j][i] /= norm;
    }
    std::vector<double> b(n);
    for (std::size_t i = 0; i < n; ++i) b[i] = rhs[i] * weights[i];

    // Householder QR, applied in place column by column.
    std::vector<double> rdiag(m, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        double norm2 = 0.0;
        for (std::size_t i = j; i < n; ++i) norm2 += A[j][i] * A[j][i];
        double alpha = std::sqrt(norm2);
        if (A[j][j] > 0.0) alpha = -alpha;
        rdiag[j] = alpha;
        if (alpha == 0.0) continue;
        A[j][j] -= alpha;
        double vnorm2 = 0.0;
        for (std::size_t i = j; i < n; ++i) vnorm2 += A[j][i] * A[j][i];
        if (vnorm2 == 0.0) continue;
        for (std::size_t k = j + 1; k < m; ++k) {
            double dot = 0.0;
            for (std::size_t i = j; i < n; ++i) dot += A[j][i] * A[k][i];
            const double factor = 2.0 * dot / vnorm2;
            for (std::size_t i = j; i < n; ++i) A[k][i] -= factor * A[j][i];
        }
        double dot = 0.0;
        for (std::size_t i = j; i < n; ++i) dot += A[j][i] * b[i];
        const double factor = 2.0 * dot / vnorm2;
        for (std::size_t i = j; i < n; ++i) b[i] -= factor * A[j][i];
    }

    double rmax = 0.0, rmin = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) {
        rmax = std::max(rmax, std::abs(rdiag[j]));
        rmin = std::min(rmin, std::abs(rdiag[j]));
    }
    LeastSquaresResult result;
    result.condition = (rmin > 0.0) ? rmax / rmin : std::numeric_limits<double>::infinity();

    // Back substitution on the upper-triangular factor.
    std::vector<double> x(m, 0.0);
    for (std::size_t jj = m; jj-- > 0;) {
        if (rdiag[jj] == 0.0)
            throw unreliable_fit("least squares: singular factor", result.condition, 0.0);
        double s = b[jj];
        for (std::size_t k = jj + 1; k < m; ++k) s -= A[k][jj] * x[k];
        x[jj] = s / rdiag[jj];
    }
    for (std::size_t j = 0; j < m; ++j) x[j] /= colscale[j];

    result.coefficients = x;
    double max_resid = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double model = 0.0;
        for (std::size_t j = 0; j < m; ++j) model += columns[j][i] * x[j];
        max_resid = std::max(max_resid, std::abs(model - rhs[i]) * weights[i]);
    }
    result.max_weighted_residual = max_resid;
    return result;
}

ExpMoments exp_moments(double omega, double t) {
    ExpMoments mom{};
    const double e = std::exp(-omega * t);
    mom.m[0] = e / t;
    double wk = 1.0;
    for (int k = 1; k <= 4; ++k) {
        wk *= omega;  // omega^k
        mom.m[k] = (wk * e + k * mom.m[k - 1]) / t;
    }
    return mom;
}

// ---------------------------------------------------------------------------
// Tail bounds
// ---------------------------------------------------------------------------

double trace_tail_bound(const TailDescriptor& tail, double omega_max, double t) {
    if (!(t > 0.0)) throw invalid_input("cutoff t must be positive");
    const ExpMoments mom = exp_moments(omega_max, t);
    if (tail.kind == TailDescriptor::Kind::Linear) {
        // N(w) - N(W) <= slope (w - W) + K  =>  tail <= e^{-Wt}(slope/t + K)
        return t * (tail.slope * (mom.m[1] - omega_max * mom.m[0]) +
                    tail.window_const * mom.m[0]);
    }
    // Box: N(w) <= 2 (pi/6) V (w/pi + d)^3; integrate t * N(w) e^{-wt}.
    const double c = 2.0 * (kPi / 6.0) * tail.box_volume;
    const double d = tail.box_diag;
    const double p3 = 1.0 / (kPi * kPi * kPi), p2 = 3.0 * d / (kPi * kPi),
                 p1 = 3.0 * d * d / kPi, p0 = d * d * d;
    return t * c * (p3 * mom.m[3] + p2 * mom.m[2] + p1 * mom.m[1] + p0 * mom.m[0]);
}

double energy_tail_bound(const TailDescriptor& tail, double omega_max, double t) {
    if (!(t > 0.0)) throw invalid_input("cutoff t must be positive");
    const ExpMoments mom = exp_moments(omega_max, t);
    if (tail.kind == TailDescriptor::Kind::Linear) {
        return 0.5 * t *
               (tail.slope * (mom.m[2] - omega_max * mom.m[1]) +
                tail.window_const * mom.m[1]);
    }
    const double c = 2.0 * (kPi / 6.0) * tail.box_volume;
    const double d = tail.box_diag;
    const double p3 = 1.0 / (kPi * kPi * kPi), p2 = 3.0 * d / (kPi * kPi),
                 p1 = 3.0 * d * d / kPi, p0 = d * d * d;
    return 0.5 * t * c * (p3 * mom.m[4] + p2 * mom.m[3] + p1 * mom.m[2] + p0 * mom.m[1]);
}

double leading_energy_divergence(const TailDescriptor& tail, double t) {
    if (tail.kind == TailDescriptor::Kind::Linear)
        return tail.slope / (2.0 * t * t);  // (total length)/(2 pi t^2)
    return 3.0 * tail.box_volume / (kPi * kPi * t * t * t * t);
}

double required_omega_max(const TailDescriptor& tail, double t, double target) {
    if (!(target > 0.0)) throw invalid_input("tail target must be positive");
    double lo = 1.0 / t, hi = lo;
    while (energy_tail_bound(tail, hi, t) > target) {
        hi *= 2.0;
        if (hi > 1e12) return hi;
    }
    if (energy_tail_bound(tail, lo, t) <= target) {
        while (lo > 1e-6 && energy_tail_bound(tail, lo * 0.5, t) <= target) lo *= 0.5;
        return lo;
    }
    for (int i = 0; i < 200 && hi - lo > 1e-6 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (energy_tail_bound(tail, mid, t) <= target ? hi : lo) = mid;
    }
    return hi;
}

// ---------------------------------------------------------------------------
// Trace and energy sums
// ---------------------------------------------------------------------------

namespace {

struct SumPair {
    double trace;
    double energy;
};

SumPair mode_sums(const Spectrum& spectrum, double t) {
    CompensatedSum trace, energy;
    // Summed from the high end so the small terms accumulate first.
    for (auto it = spectrum.modes.rbegin(); it != spectrum.modes.rend(); ++it) {
        const double term = it->multiplicity * std::exp(-it->omega * t);
        trace.add(term);
        energy.add(0.5 * it->omega * term);
    }
    return {trace.value(), energy.value()};
}

void check_tail(const Spectrum& spectrum, double t, const TraceOptions& options,
                double bound) {
    const double lead = std::abs(leading_energy_divergence(spectrum.tail, t));
    const double allowed = options.tail_rel_tolerance * lead;
    if (bound > allowed) {
        const double needed = allowed > 0.0
                                  ? required_omega_max(spectrum.tail, t, allowed)
                                  : std::numeric_limits<double>::infinity();
        throw insufficient_spectrum(
            "spectrum ceiling too low for this cutoff; need omega_max >= " +
                std::to_string(needed),
            needed);
    }
}

} // namespace

double cylinder_trace(const Spectrum& spectrum, double t, const TraceOptions& options) {
    if (!(t > 0.0)) throw invalid_input("cutoff t must be positive");
    check_tail(spectrum, t, options, energy_tail_bound(spectrum.tail, spectrum.omega_max, t));
    return mode_sums(spectrum, t).trace;
}

double regularized_energy(const Spectrum& spectrum, double t, const TraceOptions& options) {
    if (!(t > 0.0)) throw invalid_input("cutoff t must be positive");
    check_tail(spectrum, t, options, energy_tail_bound(spectrum.tail, spectrum.omega_max, t));
    return mode_sums(spectrum, t).energy;
}

CutoffSample cutoff_sample(const Spectrum& spectrum, double t, const TraceOptions& options) {
    if (!(t > 0.0)) throw invalid_input("cutoff t must be positive");
    CutoffSample sample;
    sample.t = t;
    sample.trace_tail_bound = trace_tail_bound(spectrum.tail, spectrum.omega_max, t);
    sample.energy_tail_bound = energy_tail_bound(spectrum.tail, spectrum.omega_max, t);
    check_tail(spectrum, t, options, sample.energy_tail_bound);
    const SumPair sums = mode_sums(spectrum, t);
    sample.trace = sums.trace;
    sample.energy = sums.energy;
    return sample;
}

// ---------------------------------------------------------------------------
// Divergence template and the asymptotic fit
// ---------------------------------------------------------------------------

void DivergenceTemplate::validate() const {
    int prev = 0;
    for (const Term& term : divergent) {
        if (term.power >= 0)
            throw invalid_input("divergent template powers must be negative");
        if (term.power >= prev && prev != 0)
            throw invalid_input("divergent template powers must be strictly decreasing");
        prev = term.power;
    }
    int prev_slack = 0;
    for (int p : slack_powers) {
        if (p <= 0)
            throw invalid_input("slack powers must be positive");
        if (p <= prev_slack)
            throw invalid_input("slack powers must be strictly increasing");
        prev_slack = p;
    }
}

std::size_t DivergenceTemplate::free_coefficient_count() const {
    std::size_t n = 1;  // t^0 is always free
    for (const Term& term : divergent)
        if (!term.fixed_coefficient) ++n;
    n += slack_powers.size();
    if (include_log_linear) ++n;
    return n;
}

DivergenceTemplate DivergenceTemplate::linear_geometry() {
    DivergenceTemplate t;
    t.divergent = {{-2, std::nullopt}};
    t.slack_powers = {1, 2, 3, 4};
    t.include_log_linear = false;
    return t;
}

DivergenceTemplate DivergenceTemplate::box_geometry() {
    // The electromagnetic box trace has no surface (t^-3), no t^-1, and no
    // log terms: the face sums cancel in the two-polarization combination,
    // leaving volume + edge divergences and an even power series. Richer
    // defensive templates go degenerate over the affordable window and fail
    // the window-stability arbiter.
    DivergenceTemplate t;
    t.divergent = {{-2, std::nullopt}, {-4, std::nullopt}};
    t.slack_powers = {2, 4, 6};
    t.include_log_linear = false;
    return t;
}

DivergenceTemplate DivergenceTemplate::box_geometry_defensive() {
    DivergenceTemplate t;
    t.divergent = {{-1, std::nullopt}, {-2, std::nullopt}, {-3, std::nullopt}, {-4, std::nullopt}};
    t.slack_powers = {1, 2, 3, 4};
    t.include_log_linear = true;
    return t;
}

namespace {

struct FitColumns {
    std::vector<std::vector<double>> columns;  // free columns, in order
    std::vector<double> rhs;                   // energy minus fixed terms
    std::vector<double> weights;
    std::vector<int> free_powers;              // parallel to columns; INT_MIN = log col
    std::size_t finite_index = 0;              // column of tau^0
};

constexpr int kLogColumn = std::numeric_limits<int>::min();

FitColumns build_fit(const std::vector<CutoffSample>& samples,
                     const DivergenceTemplate& templ, double a_char) {
    FitColumns fc;
    const std::size_t n = samples.size();
    fc.rhs.resize(n);
    fc.weights.resize(n);

    for (std::size_t i = 0; i < n; ++i) {
        const CutoffSample& s = samples[i];
        double y = s.energy;
        for (const auto& term : templ.divergent)
            if (term.fixed_coefficient)
                y -= *term.fixed_coefficient * std::pow(s.t, term.power);
        fc.rhs[i] = y;
    }
    double max_abs = 0.0;
    for (double y : fc.rhs) max_abs = std::max(max_abs, std::abs(y));
    // Relative weighting keeps the steep divergent rows from swamping the
    // small-t rows that carry the finite part.
    for (std::size_t i = 0; i < n; ++i)
        fc.weights[i] = 1.0 / (std::abs(fc.rhs[i]) + 1e-300 + 1e-16 * max_abs);

    auto add_power_column = [&](int p) {
        std::vector<double> col(n);
        for (std::size_t i = 0; i < n; ++i)
            col[i] = std::pow(samples[i].t / a_char, p);
        fc.columns.push_back(std::move(col));
        fc.free_powers.push_back(p);
    };

    for (const auto& term : templ.divergent)
        if (!term.fixed_coefficient) add_power_column(term.power);
    fc.finite_index = fc.columns.size();
    add_power_column(0);
    if (templ.include_log_linear) {
        std::vector<double> col(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double tau = samples[i].t / a_char;
            col[i] = tau * std::log(tau);
        }
        fc.columns.push_back(std::move(col));
        fc.free_powers.push_back(kLogColumn);
    }
    for (int p : templ.slack_powers) add_power_column(p);
    return fc;
}

struct RawFit {
    std::vector<double> coefficients;  // tau-units
    double condition = 0.0;
    double rel_residual = 0.0;
};

RawFit run_fit(const FitColumns& fc) {
    LeastSquaresResult ls = solve_weighted_least_squares(fc.columns, fc.rhs, fc.weights);
    RawFit fit;
    fit.coefficients = std::move(ls.coefficients);
    fit.condition = ls.condition;
    fit.rel_residual = ls.max_weighted_residual;
    return fit;
}

} // namespace

FinitePartFit extract_finite_part(const std::vector<CutoffSample>& samples,
                                  const DivergenceTemplate& templ,
                                  const FitOptions& options) {
    templ.validate();
    const std::size_t free_count = templ.free_coefficient_count();
    if (samples.size() < free_count + 2)
        throw invalid_input("extract_finite_part needs at least free coefficients + 2 samples");
    for (std::size_t i = 1; i < samples.size(); ++i)
        if (!(samples[i].t < samples[i - 1].t))
            throw invalid_input("cutoff samples must arrive on a decreasing t ladder");
    if (!(options.a_char > 0.0))
        throw invalid_input("characteristic length must be positive");

    const FitColumns fc = build_fit(samples, templ, options.a_char);
    const RawFit fit = run_fit(fc);

    if (fit.condition > options.condition_threshold)
        throw unreliable_fit("divergence fit is ill-conditioned", fit.condition,
                             fit.rel_residual);
    if (fit.rel_residual > options.residual_threshold)
        throw unreliable_fit("divergence fit residual exceeds tolerance", fit.condition,
                             fit.rel_residual);

    FinitePartFit result;
    result.finite_part = fit.coefficients[fc.finite_index];
    result.residual = fit.rel_residual;
    result.condition = fit.condition;
    for (const CutoffSample& s : samples) result.window.push_back(s.t);

    // Report coefficients in t-units (the fit ran in tau = t/a_char).
    std::size_t idx = 0;
    for (const auto& term : templ.divergent) {
        if (term.fixed_coefficient) {
            result.divergent_coefficients.push_back(*term.fixed_coefficient);
        } else {
            const double c_tau = fit.coefficients[idx];
            result.divergent_coefficients.push_back(
                c_tau * std::pow(options.a_char, -fc.free_powers[idx]));
            ++idx;
        }
    }
    ++idx;  // tau^0
    if (templ.include_log_linear) {
        result.log_linear_coefficient = fit.coefficients[idx];
        ++idx;
    }
    for (std::size_t k = 0; k < templ.slack_powers.size(); ++k, ++idx)
        result.slack_coefficients.push_back(fit.coefficients[idx] *
                                            std::pow(options.a_char, -fc.free_powers[idx]));

    // Window stability: the finite part may not depend on the largest rung.
    if (options.check_stability) {
        std::vector<CutoffSample> trimmed(samples.begin() + 1, samples.end());
        if (trimmed.size() >= free_count) {
            const FitColumns fc2 = build_fit(trimmed, templ, options.a_char);
            const RawFit fit2 = run_fit(fc2);
            result.window_gap = std::abs(fit2.coefficients[fc2.finite_index] -
                                         result.finite_part);
            if (result.window_gap >
                options.stability_rel * std::abs(result.finite_part) + options.stability_abs)
                throw fit_instability("finite part is unstable under window variation",
                                      result.window_gap);
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Closed forms
// ---------------------------------------------------------------------------

double closed_form_energy_1d(const IntervalSpec& spec) {
    spec.validate();
    return spec.mixed() ? kPi / (48.0 * spec.length) : -kPi / (24.0 * spec.length);
}

double closed_form_energy_star(std::size_t edge_count, double a,
                               BoundaryCondition piston_condition) {
    if (edge_count < 1) throw invalid_input("star graph needs at least one edge");
    if (!(a > 0.0)) throw invalid_input("edge length must be positive");
    const double n = static_cast<double>(edge_count);
    if (piston_condition == BoundaryCondition::Neumann)
        return (n - 3.0) * kPi / (48.0 * a);
    return (3.0 - 2.0 * n) * kPi / (48.0 * a);
}

} // namespace pistonlab
