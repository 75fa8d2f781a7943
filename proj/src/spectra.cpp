#include "pistonlab/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "pistonlab/numeric.hpp"

namespace pistonlab {

namespace {
constexpr double kPi = std::numbers::pi;
}

const char* to_string(BoundaryCondition bc) {
    return bc == BoundaryCondition::Dirichlet ? "dirichlet" : "neumann";
}

void IntervalSpec::validate() const {
    if (!(length > 0.0))
        throw invalid_input("interval length must be positive");
}

void StarGraphSpec::validate() const {
    if (edge_lengths.empty())
        throw invalid_input("star graph needs at least one edge");
    for (double a : edge_lengths)
        if (!(a > 0.0))
            throw invalid_input("star edge lengths must be positive");
}

double StarGraphSpec::total_length() const {
    return std::accumulate(edge_lengths.begin(), edge_lengths.end(), 0.0);
}

bool StarGraphSpec::equal_lengths(double rel_tol) const {
    if (edge_lengths.empty()) return false;
    const double a0 = edge_lengths.front();
    for (double a : edge_lengths)
        if (std::abs(a - a0) > rel_tol * a0) return false;
    return true;
}

StarGraphSpec StarGraphSpec::equal(std::size_t n, double a, BoundaryCondition piston) {
    StarGraphSpec spec;
    spec.edge_lengths.assign(n, a);
    spec.piston_condition = piston;
    spec.validate();
    return spec;
}

void BoxSpec::validate() const {
    if (!(a > 0.0) || !(b1 > 0.0) || !(b2 > 0.0))
        throw invalid_input("box sides must be positive");
}

double BoxSpec::min_side() const {
    return std::min(a, std::min(b1, b2));
}

TailDescriptor TailDescriptor::linear(double total_length, double window_const) {
    TailDescriptor tail;
    tail.kind = Kind::Linear;
    tail.slope = total_length / kPi;
    tail.window_const = window_const;
    return tail;
}

TailDescriptor TailDescriptor::box(double a, double b1, double b2) {
    TailDescriptor tail;
    tail.kind = Kind::Box;
    tail.box_volume = a * b1 * b2;
    tail.box_diag = std::sqrt(1.0 / (a * a) + 1.0 / (b1 * b1) + 1.0 / (b2 * b2));
    return tail;
}

std::size_t Spectrum::mode_count_weighted() const {
    std::size_t n = 0;
    for (const Mode& m : modes) n += static_cast<std::size_t>(m.multiplicity);
    return n;
}

std::size_t Spectrum::counting_function(double w) const {
    std::size_t n = 0;
    for (const Mode& m : modes) {
        if (m.omega > w) break;
        n += static_cast<std::size_t>(m.multiplicity);
    }
    return n;
}

void Spectrum::validate() const {
    double prev = -1.0;
    for (const Mode& m : modes) {
        if (!(m.omega >= 0.0))
            throw invalid_input("spectrum contains a negative frequency");
        if (!(m.omega > prev))
            throw invalid_input("spectrum frequencies must be strictly increasing");
        if (m.multiplicity < 1)
            throw invalid_input("spectrum multiplicities must be >= 1");
        prev = m.omega;
    }
}

// ---------------------------------------------------------------------------
// Interval
// ---------------------------------------------------------------------------

Spectrum interval_spectrum(const IntervalSpec& spec, double omega_max) {
    spec.validate();
    if (!(omega_max > 0.0))
        throw invalid_input("omega_max must be positive");

    const double a = spec.length;
    Spectrum s;
    s.omega_max = omega_max;
    s.tail = TailDescriptor::linear(a, 2.0);
    s.geometry_tag = std::string("interval_") +
                     (spec.left == BoundaryCondition::Dirichlet ? "D" : "N") +
                     (spec.right == BoundaryCondition::Dirichlet ? "D" : "N");

    if (spec.mixed()) {
        // omega_n = (2n+1) pi / 2a, n >= 0
        for (long n = 0;; ++n) {
            const double w = (2.0 * n + 1.0) * kPi / (2.0 * a);
            if (w > omega_max) break;
            s.modes.push_back({w, 1, ModeFlagNone});
        }
    } else {
        // omega_n = n pi / a; n >= 1 for Dirichlet ends, n >= 0 for Neumann
        if (spec.left == BoundaryCondition::Neumann)
            s.modes.push_back({0.0, 1, ModeFlagZero});
        for (long n = 1;; ++n) {
            const double w = n * kPi / a;
            if (w > omega_max) break;
            s.modes.push_back({w, 1, ModeFlagNone});
        }
    }
    return s;
}

// ---------------------------------------------------------------------------
// Star graph
// ---------------------------------------------------------------------------

double star_secular_function(const StarGraphSpec& spec, double omega) {
    spec.validate();
    if (!(omega > 0.0))
        throw invalid_input("star_secular_function requires omega > 0");

    const auto& lengths = spec.edge_lengths;
    const std::size_t n = lengths.size();
    const bool neumann = spec.piston_condition == BoundaryCondition::Neumann;

    // f = sum_j num(w a_j) * prod_{k != j} den(w a_k), with (num, den) =
    // (sin, cos) for Neumann pistons and (cos, sin) for Dirichlet.
    double f = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double term = neumann ? std::sin(omega * lengths[j]) : std::cos(omega * lengths[j]);
        for (std::size_t k = 0; k < n; ++k) {
            if (k == j) continue;
            term *= neumann ? std::cos(omega * lengths[k]) : std::sin(omega * lengths[k]);
        }
        f += term;
    }
    return f;
}

namespace {

// Closed-form two-family spectrum for exactly equal edge lengths.
Spectrum star_spectrum_closed_form(const StarGraphSpec& spec, double omega_max) {
    const double a = spec.edge_lengths.front();
    const std::size_t n = spec.edge_lengths.size();
    const bool neumann = spec.piston_condition == BoundaryCondition::Neumann;

    // Integer family n pi/a and half-integer family (2n+1) pi/2a never
    // collide, so an ordered merge by half-steps pi/2a is exact.
    const int int_mult = neumann ? 1 : static_cast<int>(n) - 1;
    const int half_mult = neumann ? static_cast<int>(n) - 1 : 1;

    Spectrum s;
    s.omega_max = omega_max;
    s.tail = TailDescriptor::linear(spec.total_length(),
                                    2.0 * static_cast<double>(n) + 2.0);
    s.geometry_tag = "star_closed";

    if (neumann)
        s.modes.push_back({0.0, 1, ModeFlagZero});

    for (long step = 1;; ++step) {
        const double w = step * kPi / (2.0 * a);
        if (w > omega_max) break;
        const bool half_family = (step % 2 != 0);
        const int mult = half_family ? half_mult : int_mult;
        if (mult <= 0) continue;  // the (N-1) family is empty for N = 1
        // The N-1 family is the one born from simultaneous trig zeros.
        const bool cluster_family = (half_family == neumann) && n >= 2;
        std::uint8_t flags = cluster_family ? ModeFlagDegenerate : ModeFlagNone;
        s.modes.push_back({w, mult, flags});
    }
    return s;
}

struct PoleCluster {
    double omega = 0.0;   // mean of the clustered per-edge trig zeros
    int count = 0;        // number of edges whose factor vanishes here
};

// Positions where one edge's secular denominator vanishes: cos(w a_j) = 0
// for Neumann pistons ((2i+1) pi/2a_j), sin(w a_j) = 0 for Dirichlet
// (i pi/a_j, i >= 1). Returned sorted, extending one pole past `limit` per
// edge so the last root interval is closed.
std::vector<double> secular_poles(const StarGraphSpec& spec, double limit) {
    std::vector<double> poles;
    const bool neumann = spec.piston_condition == BoundaryCondition::Neumann;
    for (double a : spec.edge_lengths) {
        if (neumann) {
            for (long i = 0;; ++i) {
                const double w = (2.0 * i + 1.0) * kPi / (2.0 * a);
                poles.push_back(w);
                if (w > limit) break;
            }
        } else {
            for (long i = 1;; ++i) {
                const double w = i * kPi / a;
                poles.push_back(w);
                if (w > limit) break;
            }
        }
    }
    std::sort(poles.begin(), poles.end());
    return poles;
}

std::vector<PoleCluster> cluster_poles(const std::vector<double>& poles, double tol) {
    std::vector<PoleCluster> clusters;
    for (double p : poles) {
        if (!clusters.empty() && p - clusters.back().omega <= tol) {
            PoleCluster& c = clusters.back();
            c.omega = (c.omega * c.count + p) / (c.count + 1);
            ++c.count;
        } else {
            clusters.push_back({p, 1});
        }
    }
    return clusters;
}

// Root finding on the pole-free secular form. Between two consecutive pole
// clusters the meromorphic sum (sum tan / sum cot) is strictly monotone and
// sweeps the whole real line, so each open interval brackets exactly one
// simple eigenfrequency; the pole-free f changes sign exactly there.
Spectrum star_spectrum_solved(const StarGraphSpec& spec, double omega_max,
                              const StarSolverOptions& opt) {
    const bool neumann = spec.piston_condition == BoundaryCondition::Neumann;
    const std::size_t n_edges = spec.edge_lengths.size();

    std::vector<PoleCluster> clusters =
        cluster_poles(secular_poles(spec, omega_max), opt.cluster_tol);

    auto f = [&spec](double w) { return star_secular_function(spec, w); };

    std::vector<Mode> modes;
    if (neumann)
        modes.push_back({0.0, 1, ModeFlagZero});

    // Degenerate family: a cluster of m >= 2 simultaneous trig zeros is an
    // eigenfrequency of multiplicity m-1 (continuity forces the vertex value
    // to zero; one Kirchhoff constraint remains on the m slack amplitudes).
    for (const PoleCluster& c : clusters) {
        if (c.count >= 2 && c.omega <= omega_max)
            modes.push_back({c.omega, c.count - 1, ModeFlagDegenerate});
    }

    // Ordinary family: one simple root strictly inside each inter-cluster
    // interval (and inside (0, first pole) for Dirichlet pistons, where the
    // cotangent sum descends from +infinity).
    const std::size_t n_intervals =
        neumann ? (clusters.empty() ? 0 : clusters.size() - 1) : clusters.size();
    for (std::size_t i = 0; i < n_intervals; ++i) {
        double lo, hi;
        if (neumann) {
            lo = clusters[i].omega;
            hi = clusters[i + 1].omega;
        } else {
            lo = (i == 0) ? 0.0 : clusters[i - 1].omega;
            hi = clusters[i].omega;
        }
        if (lo > omega_max) break;

        const double gap = hi - lo;
        double pad = std::max(gap * 1e-6, 1e-13 * std::max(1.0, hi));
        double flo = 0.0, fhi = 0.0;
        bool bracketed = false;
        // Nudge endpoints off the poles until the guaranteed sign change of
        // the pole-free form is visible.
        for (int attempt = 0; attempt < 60; ++attempt) {
            const double wlo = lo + pad, whi = hi - pad;
            if (!(wlo < whi)) break;
            flo = f(wlo);
            fhi = f(whi);
            if (flo != 0.0 && fhi != 0.0 && std::signbit(flo) != std::signbit(fhi)) {
                lo = wlo;
                hi = whi;
                bracketed = true;
                break;
            }
            pad *= 0.25;
            if (pad < 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, hi)) {
                // Root indistinguishable from the pole at this precision:
                // merge into the adjacent cluster below.
                bracketed = false;
                break;
            }
        }
        if (!bracketed) {
            // Degenerate-adjacent root; take the interval midpoint only if a
            // sign change truly exists, otherwise report the failure.
            if (flo == 0.0 || fhi == 0.0) {
                modes.push_back({flo == 0.0 ? lo : hi, 1, ModeFlagNone});
                continue;
            }
            throw numerical_failure("star solver could not bracket the root between poles",
                                    lo, hi);
        }

        const double tol = std::max(opt.bisect_tol,
                                    8.0 * std::numeric_limits<double>::epsilon() * hi);
        const double root = bisect(f, lo, hi, tol, opt.max_bisect_iter);
        if (root <= omega_max)
            modes.push_back({root, 1, ModeFlagNone});
    }

    std::sort(modes.begin(), modes.end(),
              [](const Mode& x, const Mode& y) { return x.omega < y.omega; });

    // Merge anything the clustering tolerance regards as one frequency; a
    // simple root that lands on a degenerate cluster raises its multiplicity
    // by one (the residual Kirchhoff sum also vanished there).
    std::vector<Mode> merged;
    for (const Mode& m : modes) {
        if (!merged.empty() && m.omega - merged.back().omega <= opt.cluster_tol) {
            merged.back().multiplicity += m.multiplicity;
            merged.back().flags |= m.flags;
        } else {
            merged.push_back(m);
        }
    }

    Spectrum s;
    s.modes = std::move(merged);
    s.omega_max = omega_max;
    s.tail = TailDescriptor::linear(spec.total_length(),
                                    2.0 * static_cast<double>(n_edges) + 2.0);
    s.geometry_tag = "star_solved";
    s.validate();

    // Counting sanity: the eigenvalue count must track the Weyl slope within
    // the number of edges (plus the zero mode).
    const double weyl = spec.total_length() * omega_max / kPi;
    const double count = static_cast<double>(s.mode_count_weighted());
    if (std::abs(count - weyl) > static_cast<double>(n_edges) + 2.0)
        throw numerical_failure("star solver mode count disagrees with the Weyl law",
                                0.0, omega_max);
    return s;
}

} // namespace

Spectrum star_spectrum(const StarGraphSpec& spec, double omega_max,
                       StarMethod method, const StarSolverOptions& options) {
    spec.validate();
    if (!(omega_max > 0.0))
        throw invalid_input("omega_max must be positive");

    switch (method) {
    case StarMethod::ClosedForm:
        if (!spec.equal_lengths())
            throw invalid_input("closed-form star spectrum requires equal edge lengths");
        return star_spectrum_closed_form(spec, omega_max);
    case StarMethod::Solver:
        return star_spectrum_solved(spec, omega_max, options);
    case StarMethod::Auto:
    default:
        return spec.equal_lengths() ? star_spectrum_closed_form(spec, omega_max)
                                    : star_spectrum_solved(spec, omega_max, options);
    }
}

// ---------------------------------------------------------------------------
// Electromagnetic box
// ---------------------------------------------------------------------------

double box_em_count_bound(const BoxSpec& spec, double omega) {
    // Every admissible lattice point owns a cell of volume 1/(a b1 b2) inside
    // the octant ball of radius omega/pi inflated by the cell diagonal; two
    // polarizations at most per point.
    const double diag = std::sqrt(1.0 / (spec.a * spec.a) + 1.0 / (spec.b1 * spec.b1) +
                                  1.0 / (spec.b2 * spec.b2));
    const double r = omega / kPi + diag;
    return 2.0 * (kPi / 6.0) * spec.volume() * r * r * r;
}

std::size_t box_em_for_each_mode(const BoxSpec& spec, double omega_max,
                                 const std::function<void(double, int)>& visit) {
    spec.validate();
    if (!(omega_max > 0.0))
        throw invalid_input("omega_max must be positive");

    const double ka = kPi / spec.a, kb1 = kPi / spec.b1, kb2 = kPi / spec.b2;
    const double w2max = omega_max * omega_max;
    std::size_t visited = 0;

    for (long l = 0;; ++l) {
        const double wl2 = (ka * l) * (ka * l);
        if (wl2 > w2max) break;
        for (long m = 0;; ++m) {
            const double wlm2 = wl2 + (kb1 * m) * (kb1 * m);
            if (wlm2 > w2max) break;
            for (long n = 0;; ++n) {
                const double w2 = wlm2 + (kb2 * n) * (kb2 * n);
                if (w2 > w2max) break;
                const int zeros = (l == 0) + (m == 0) + (n == 0);
                if (zeros >= 2) continue;  // needs at least two nonzero indices
                const int mult = (zeros == 0) ? 2 : 1;
                visit(std::sqrt(w2), mult);
                visited += static_cast<std::size_t>(mult);
            }
        }
    }
    return visited;
}

Spectrum box_em_spectrum(const BoxSpec& spec, double omega_max,
                         const BoxEnumOptions& options) {
    spec.validate();
    if (!(omega_max > 0.0))
        throw invalid_input("omega_max must be positive");

    const double estimate = box_em_count_bound(spec, omega_max);
    if (estimate > options.mode_budget)
        throw resource_limit("box mode enumeration would exceed the configured budget",
                             estimate, options.mode_budget);

    std::vector<Mode> raw;
    raw.reserve(static_cast<std::size_t>(std::min(estimate, 2e7)));
    box_em_for_each_mode(spec, omega_max, [&raw](double w, int mult) {
        raw.push_back({w, mult, ModeFlagNone});
    });

    std::sort(raw.begin(), raw.end(),
              [](const Mode& x, const Mode& y) { return x.omega < y.omega; });

    // Exactly coincident frequencies (symmetric boxes) merge; solver noise is
    // absent here, so the tolerance is a few ulp.
    Spectrum s;
    s.omega_max = omega_max;
    s.tail = TailDescriptor::box(spec.a, spec.b1, spec.b2);
    s.geometry_tag = "box_em";
    for (const Mode& m : raw) {
        if (!s.modes.empty() &&
            m.omega - s.modes.back().omega <=
                8.0 * std::numeric_limits<double>::epsilon() * m.omega) {
            s.modes.back().multiplicity += m.multiplicity;
        } else {
            s.modes.push_back(m);
        }
    }
    s.validate();
    return s;
}

} // namespace pistonlab
