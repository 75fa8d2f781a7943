#include "pistonlab/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

#include "pistonlab/numeric.hpp"

namespace pistonlab {

namespace {
constexpr double kPi = std::numbers::pi;

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}
}

std::vector<double> LadderConfig::rung_values(double a_min) const {
    const double top = (t0 > 0.0) ? t0 : a_min * t0_factor;
    if (!(top > 0.0) || rungs < 2 || !(ratio > 1.0))
        throw invalid_input("invalid ladder configuration");
    std::vector<double> ts(rungs);
    for (int k = 0; k < rungs; ++k) ts[k] = top * std::pow(ratio, -k);
    return ts;
}

std::vector<double> BoxLadderConfig::rung_values(double a_min) const {
    const double bottom = a_min * t_min_factor;
    if (!(bottom > 0.0) || rungs < 2 || !(ratio > 1.0))
        throw invalid_input("invalid box ladder configuration");
    std::vector<double> ts(rungs);
    for (int k = 0; k < rungs; ++k)
        ts[k] = bottom * std::pow(ratio, rungs - 1 - k);  // descending
    return ts;
}

// ---------------------------------------------------------------------------
// Linear geometries: one spectrum, sampled across the ladder
// ---------------------------------------------------------------------------

namespace {

std::vector<CutoffSample> sample_ladder(const Spectrum& spectrum,
                                        const std::vector<double>& ts,
                                        double tail_rel_tolerance) {
    TraceOptions topt;
    topt.tail_rel_tolerance = tail_rel_tolerance;
    std::vector<CutoffSample> samples;
    samples.reserve(ts.size());
    for (double t : ts) samples.push_back(cutoff_sample(spectrum, t, topt));
    return samples;
}

double ceiling_for_ladder(const TailDescriptor& tail, const std::vector<double>& ts,
                          double tail_rel_tolerance) {
    const double t_min = ts.back();
    const double target = tail_rel_tolerance * std::abs(leading_energy_divergence(tail, t_min));
    return 1.02 * required_omega_max(tail, t_min, target);
}

} // namespace

std::vector<CutoffSample> interval_cutoff_samples(const IntervalSpec& spec,
                                                  const LadderConfig& ladder) {
    spec.validate();
    const std::vector<double> ts = ladder.rung_values(spec.length);
    const TailDescriptor tail = TailDescriptor::linear(spec.length, 2.0);
    const double omega_max = ceiling_for_ladder(tail, ts, ladder.tail_rel_tolerance);
    const Spectrum spectrum = interval_spectrum(spec, omega_max);
    return sample_ladder(spectrum, ts, ladder.tail_rel_tolerance);
}

std::vector<CutoffSample> star_cutoff_samples(const StarGraphSpec& spec,
                                              const LadderConfig& ladder,
                                              StarMethod method) {
    spec.validate();
    const double a_min = *std::min_element(spec.edge_lengths.begin(), spec.edge_lengths.end());
    const std::vector<double> ts = ladder.rung_values(a_min);
    const TailDescriptor tail = TailDescriptor::linear(
        spec.total_length(), 2.0 * static_cast<double>(spec.edge_count()) + 2.0);
    const double omega_max = ceiling_for_ladder(tail, ts, ladder.tail_rel_tolerance);
    const Spectrum spectrum = star_spectrum(spec, omega_max, method);
    return sample_ladder(spectrum, ts, ladder.tail_rel_tolerance);
}

FinitePartFit interval_finite_part(const IntervalSpec& spec, const LadderConfig& ladder) {
    FitOptions fopt;
    fopt.a_char = spec.length;
    fopt.stability_abs = 1e-7 / spec.length;  // energy scales as 1/length
    return extract_finite_part(interval_cutoff_samples(spec, ladder),
                               DivergenceTemplate::linear_geometry(), fopt);
}

FinitePartFit star_finite_part(const StarGraphSpec& spec, const LadderConfig& ladder,
                               StarMethod method) {
    FitOptions fopt;
    fopt.a_char = *std::min_element(spec.edge_lengths.begin(), spec.edge_lengths.end());
    fopt.stability_abs = 1e-7 / fopt.a_char;
    return extract_finite_part(star_cutoff_samples(spec, ladder, method),
                               DivergenceTemplate::linear_geometry(), fopt);
}

// ---------------------------------------------------------------------------
// Box: streaming sums, one enumeration pass per rung
// ---------------------------------------------------------------------------

namespace {

// Deterministic parallel reduction: the l-range is cut into fixed slices,
// each slice accumulates its own compensated pair, and slices are folded in
// index order regardless of which thread finished first.
struct TraceEnergyPair {
    double trace = 0.0;
    double energy = 0.0;
};

TraceEnergyPair box_sums_at(const BoxSpec& spec, double omega_max, double t, int threads) {
    const double ka = kPi / spec.a, kb1 = kPi / spec.b1, kb2 = kPi / spec.b2;
    const double w2max = omega_max * omega_max;
    const long l_max = static_cast<long>(std::floor(omega_max / ka));

    auto slice_sums = [&](long l_begin, long l_end) {
        CompensatedSum trace, energy;
        for (long l = l_begin; l < l_end; ++l) {
            const double wl2 = (ka * l) * (ka * l);
            if (wl2 > w2max) break;
            for (long m = 0;; ++m) {
                const double wlm2 = wl2 + (kb1 * m) * (kb1 * m);
                if (wlm2 > w2max) break;
                for (long n = 0;; ++n) {
                    const double w2 = wlm2 + (kb2 * n) * (kb2 * n);
                    if (w2 > w2max) break;
                    const int zeros = (l == 0) + (m == 0) + (n == 0);
                    if (zeros >= 2) continue;
                    const double w = std::sqrt(w2);
                    const double term = (zeros == 0 ? 2.0 : 1.0) * std::exp(-w * t);
                    trace.add(term);
                    energy.add(0.5 * w * term);
                }
            }
        }
        return TraceEnergyPair{trace.value(), energy.value()};
    };

    // The slice decomposition is fixed regardless of thread count, and
    // slices are folded in index order, so the result is bitwise identical
    // for any degree of parallelism.
    const long n_slices = std::min<long>(l_max + 1, 64);
    const int n_threads = std::max(1, threads);

    std::vector<TraceEnergyPair> partial(n_slices);
    std::atomic<long> next{0};
    auto worker = [&] {
        for (long s = next.fetch_add(1); s < n_slices; s = next.fetch_add(1)) {
            const long begin = (l_max + 1) * s / n_slices;
            const long end = (l_max + 1) * (s + 1) / n_slices;
            partial[static_cast<std::size_t>(s)] = slice_sums(begin, end);
        }
    };
    if (n_threads == 1 || n_slices == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (std::thread& th : pool) th.join();
    }

    CompensatedSum trace, energy;
    for (const TraceEnergyPair& p : partial) {
        trace.add(p.trace);
        energy.add(p.energy);
    }
    return {trace.value(), energy.value()};
}

} // namespace

std::vector<CutoffSample> box_cutoff_samples(const BoxSpec& spec,
                                             const BoxLadderConfig& ladder) {
    spec.validate();
    const std::vector<double> ts = ladder.rung_values(spec.min_side());
    const TailDescriptor tail = TailDescriptor::box(spec.a, spec.b1, spec.b2);
    const int threads = resolve_threads(ladder.threads);

    // Budget check against the certified count bound, summed over rungs.
    double total_visits = 0.0;
    std::vector<double> ceilings(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double target =
            ladder.tail_rel_tolerance * std::abs(leading_energy_divergence(tail, ts[i]));
        ceilings[i] = 1.02 * required_omega_max(tail, ts[i], target);
        total_visits += box_em_count_bound(spec, ceilings[i]);
    }
    if (total_visits > ladder.mode_visit_budget)
        throw resource_limit("box ladder would exceed the mode visit budget", total_visits,
                             ladder.mode_visit_budget);

    std::vector<CutoffSample> samples(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const TraceEnergyPair sums = box_sums_at(spec, ceilings[i], ts[i], threads);
        CutoffSample& s = samples[i];
        s.t = ts[i];
        s.trace = sums.trace;
        s.energy = sums.energy;
        s.trace_tail_bound = trace_tail_bound(tail, ceilings[i], ts[i]);
        s.energy_tail_bound = energy_tail_bound(tail, ceilings[i], ts[i]);
    }
    return samples;
}

FinitePartFit box_finite_part(const BoxSpec& spec, const BoxLadderConfig& ladder) {
    FitOptions fopt;
    fopt.a_char = spec.min_side();
    fopt.residual_threshold = 1e-3;   // the 3-D window is narrower; see ledger
    fopt.stability_rel = 2e-2;
    return extract_finite_part(box_cutoff_samples(spec, ladder),
                               DivergenceTemplate::box_geometry(), fopt);
}

// ---------------------------------------------------------------------------
// Energy functions
// ---------------------------------------------------------------------------

EnergyFn interval_energy_fn(BoundaryCondition left, BoundaryCondition right,
                            double a_anchor, const LadderConfig& ladder) {
    return [=](double a) {
        IntervalSpec spec{a, left, right};
        LadderConfig anchored = ladder;
        if (anchored.t0 <= 0.0 && a_anchor > 0.0)
            anchored.t0 = a_anchor * ladder.t0_factor;
        FitOptions fopt;
        fopt.a_char = (a_anchor > 0.0) ? a_anchor : a;
        fopt.stability_abs = 1e-7 / fopt.a_char;
        return extract_finite_part(interval_cutoff_samples(spec, anchored),
                                   DivergenceTemplate::linear_geometry(), fopt)
            .finite_part;
    };
}

EnergyFn star_energy_fn(std::size_t edge_count, BoundaryCondition piston,
                        double a_anchor, const LadderConfig& ladder, StarMethod method) {
    return [=](double a) {
        const StarGraphSpec spec = StarGraphSpec::equal(edge_count, a, piston);
        LadderConfig anchored = ladder;
        if (anchored.t0 <= 0.0 && a_anchor > 0.0)
            anchored.t0 = a_anchor * ladder.t0_factor;
        FitOptions fopt;
        fopt.a_char = (a_anchor > 0.0) ? a_anchor : a;
        fopt.stability_abs = 1e-7 / fopt.a_char;
        return extract_finite_part(star_cutoff_samples(spec, anchored, method),
                                   DivergenceTemplate::linear_geometry(), fopt)
            .finite_part;
    };
}

EnergyFn box_energy_fn(double b1, double b2, double a_anchor, const BoxLadderConfig& ladder) {
    return [=](double a) {
        BoxSpec spec{a, b1, b2, WallModel::AllConducting};
        spec.validate();
        // Anchor the t grid at the reference geometry so closely spaced
        // evaluations share rungs and their fit biases cancel in differences.
        BoxLadderConfig anchored = ladder;
        const double ref_min =
            (a_anchor > 0.0) ? std::min(a_anchor, std::min(b1, b2)) : spec.min_side();
        const std::vector<double> ts = anchored.rung_values(ref_min);
        FitOptions fopt;
        fopt.a_char = ref_min;
        fopt.residual_threshold = 1e-3;
        fopt.stability_rel = 2e-2;

        // Reuse box_cutoff_samples but with the anchored t grid: emulate by
        // overriding t_min_factor so rung_values(spec.min_side()) == ts.
        anchored.t_min_factor = ts.back() / spec.min_side();
        return extract_finite_part(box_cutoff_samples(spec, anchored),
                                   DivergenceTemplate::box_geometry(), fopt)
            .finite_part;
    };
}

} // namespace pistonlab
