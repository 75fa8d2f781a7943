#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "pistonlab/pipeline.hpp"
#include "pistonlab/regular.hpp"

using namespace pistonlab;

namespace {

constexpr double kPi = std::numbers::pi;

struct Lcg {
    std::uint64_t state;
    explicit Lcg(std::uint64_t seed) : state(seed) {}
    double uniform(double lo, double hi) {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        const double u = static_cast<double>(state >> 11) / 9007199254740992.0;
        return lo + (hi - lo) * u;
    }
};

Spectrum dn_spectrum(double a, double omega_max) {
    return interval_spectrum({a, BoundaryCondition::Dirichlet, BoundaryCondition::Neumann},
                             omega_max);
}

Spectrum dd_spectrum(double a, double omega_max) {
    return interval_spectrum({a, BoundaryCondition::Dirichlet, BoundaryCondition::Dirichlet},
                             omega_max);
}

// Independent oracle for the DN trace: direct partial sum to machine tail.
double dn_trace_partial_sum(double a, double t) {
    double sum = 0.0;
    for (long n = 0;; ++n) {
        const double term = std::exp(-(2.0 * n + 1.0) * kPi * t / (2.0 * a));
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return sum;
}

// The example ladder pinned to {0.2, 0.1, 0.05, 0.025, 0.0125}.
std::vector<CutoffSample> example_ladder_samples(const Spectrum& spectrum) {
    std::vector<CutoffSample> samples;
    for (double t : {0.2, 0.1, 0.05, 0.025, 0.0125})
        samples.push_back(cutoff_sample(spectrum, t));
    return samples;
}

// Reduced template usable on the five-rung example ladder: the Weyl
// coefficient is fixed a priori, even slack absorbs the Bernoulli tail.
DivergenceTemplate fixed_weyl_template(double total_length) {
    DivergenceTemplate templ;
    templ.divergent = {{-2, total_length / (2.0 * kPi)}};
    templ.slack_powers = {2, 4};
    return templ;
}

} // namespace

TEST_CASE("cylinder trace") {
    SUBCASE("DN at t=1 equals the sinh closed form and the partial-sum oracle") {
        const Spectrum s = dn_spectrum(1.0, 80.0);
        const double trace = cylinder_trace(s, 1.0);
        CHECK(trace == doctest::Approx(1.0 / (2.0 * std::sinh(kPi / 2.0))).epsilon(1e-13));
        CHECK(trace == doctest::Approx(dn_trace_partial_sum(1.0, 1.0)).epsilon(1e-13));
        CHECK(trace == doctest::Approx(0.217265).epsilon(1e-5));
    }
    SUBCASE("DD at large t is dominated by the first exponential") {
        const Spectrum s = dd_spectrum(1.0, 80.0);
        const double trace = cylinder_trace(s, 4.0);
        CHECK(trace == doctest::Approx(std::exp(-4.0 * kPi)).epsilon(1e-5));
    }
    SUBCASE("monotone decreasing in t") {
        const Spectrum s = dn_spectrum(1.0, 400.0);
        Lcg rng(3);
        for (int i = 0; i < 40; ++i) {
            const double t = rng.uniform(0.08, 4.0);
            CHECK(cylinder_trace(s, 2.0 * t) <= cylinder_trace(s, t));
        }
    }
    SUBCASE("sinh closed form holds across t in [0.01, 10] within the tail bound") {
        for (double t : {0.01, 0.03, 0.1, 0.3, 1.0, 3.0, 10.0}) {
            const double target = 1e-10 * leading_energy_divergence(
                                              TailDescriptor::linear(1.0, 2.0), t);
            const double ceiling = required_omega_max(TailDescriptor::linear(1.0, 2.0), t,
                                                      target);
            const Spectrum s = dn_spectrum(1.0, ceiling);
            const double bound = trace_tail_bound(s.tail, s.omega_max, t);
            CHECK(std::abs(cylinder_trace(s, t) - 1.0 / (2.0 * std::sinh(kPi * t / 2.0))) <=
                  bound + 1e-12 * cylinder_trace(s, t));
        }
    }
    SUBCASE("insufficient spectrum names a sufficient ceiling") {
        const Spectrum s = dn_spectrum(1.0, 30.0);
        try {
            (void)cylinder_trace(s, 0.01);
            FAIL("expected insufficient_spectrum");
        } catch (const insufficient_spectrum& e) {
            CHECK(e.required_omega_max > 30.0);
            const Spectrum bigger = dn_spectrum(1.0, 1.02 * e.required_omega_max);
            CHECK_NOTHROW(cylinder_trace(bigger, 0.01));
        }
    }
}

TEST_CASE("regularized energy") {
    SUBCASE("DN small-t two-term asymptote") {
        const Spectrum s = dn_spectrum(1.0, 6000.0);
        const double e = regularized_energy(s, 0.01);
        const double asym = 1.0 / (2.0 * kPi * 1e-4) + kPi / 48.0;
        CHECK(std::abs(e - asym) < 1e-3);
    }
    SUBCASE("DD matches the differentiated geometric series") {
        // T(t) = 1/(e^{pi t} - 1)  =>  E(t) = (pi/2) e^{pi t} / (e^{pi t} - 1)^2
        const Spectrum s = dd_spectrum(1.0, 9000.0);
        for (double t : {0.01, 0.05, 0.2, 1.0}) {
            const double x = std::exp(kPi * t);
            const double oracle = 0.5 * kPi * x / ((x - 1.0) * (x - 1.0));
            CHECK(regularized_energy(s, t) == doctest::Approx(oracle).epsilon(1e-11));
        }
        // and the constant in E - 1/(2 pi t^2) tends to -pi/24
        const double t = 0.01;
        CHECK(regularized_energy(s, t) - 1.0 / (2.0 * kPi * t * t) ==
              doctest::Approx(-kPi / 24.0).epsilon(1e-3));
    }
    SUBCASE("a zero mode alone carries no energy") {
        Spectrum s;
        s.modes = {{0.0, 1, ModeFlagZero}};
        s.omega_max = 10.0;
        s.tail = TailDescriptor::linear(0.0, 0.0);  // nothing above the ceiling
        for (double t : {0.1, 1.0, 7.0}) {
            CHECK(regularized_energy(s, t) == 0.0);
            CHECK(cylinder_trace(s, t) == 1.0);
        }
    }
    SUBCASE("derivative identity against the trace") {
        const Spectrum s = dn_spectrum(1.0, 3000.0);
        const double t = 0.4;
        double prev = 0.0;
        for (double h : {2e-3, 1e-3}) {
            const double fd = (cylinder_trace(s, t + h) - cylinder_trace(s, t - h)) / (2 * h);
            const double resid = fd + 2.0 * regularized_energy(s, t);
            CHECK(std::abs(resid) < 25.0 * h * h);
            if (prev != 0.0) CHECK(std::abs(resid) < prev);
            prev = std::abs(resid);
        }
    }
}

TEST_CASE("certified tail bounds dominate the true tails") {
    SUBCASE("interval") {
        const double t = 0.3;
        const Spectrum full = dn_spectrum(1.0, 600.0);
        for (double ceiling : {20.0, 50.0, 120.0}) {
            double tail_t = 0.0, tail_e = 0.0;
            for (const Mode& m : full.modes)
                if (m.omega > ceiling) {
                    tail_t += m.multiplicity * std::exp(-m.omega * t);
                    tail_e += 0.5 * m.multiplicity * m.omega * std::exp(-m.omega * t);
                }
            CHECK(tail_t <= trace_tail_bound(full.tail, ceiling, t));
            CHECK(tail_e <= energy_tail_bound(full.tail, ceiling, t));
        }
    }
    SUBCASE("box") {
        const double t = 0.5;
        const BoxSpec spec{1.0, 0.8, 1.2, WallModel::AllConducting};
        const Spectrum full = box_em_spectrum(spec, 60.0);
        for (double ceiling : {15.0, 30.0}) {
            double tail_t = 0.0, tail_e = 0.0;
            for (const Mode& m : full.modes)
                if (m.omega > ceiling) {
                    tail_t += m.multiplicity * std::exp(-m.omega * t);
                    tail_e += 0.5 * m.multiplicity * m.omega * std::exp(-m.omega * t);
                }
            CHECK(tail_t <= trace_tail_bound(full.tail, ceiling, t));
            CHECK(tail_e <= energy_tail_bound(full.tail, ceiling, t));
        }
    }
}

TEST_CASE("closed-form interval energies") {
    CHECK(closed_form_energy_1d({1.0, BoundaryCondition::Dirichlet,
                                 BoundaryCondition::Neumann}) ==
          doctest::Approx(kPi / 48.0).epsilon(1e-15));
    CHECK(closed_form_energy_1d({2.0, BoundaryCondition::Dirichlet,
                                 BoundaryCondition::Dirichlet}) ==
          doctest::Approx(-kPi / 48.0).epsilon(1e-15));
    const double at_a = closed_form_energy_1d({1.3, BoundaryCondition::Neumann,
                                               BoundaryCondition::Neumann});
    const double at_2a = closed_form_energy_1d({2.6, BoundaryCondition::Neumann,
                                                BoundaryCondition::Neumann});
    CHECK(at_2a == doctest::Approx(0.5 * at_a).epsilon(1e-15));
}

TEST_CASE("finite-part extraction on the pinned five-rung ladder") {
    SUBCASE("DN recovers +pi/48") {
        const Spectrum s = dn_spectrum(1.0, 9000.0);
        const FinitePartFit fit =
            extract_finite_part(example_ladder_samples(s), fixed_weyl_template(1.0));
        CHECK(std::abs(fit.finite_part - kPi / 48.0) < 1e-6);
        CHECK(fit.divergent_coefficients[0] == doctest::Approx(1.0 / (2 * kPi)));
    }
    SUBCASE("DD recovers -pi/24") {
        const Spectrum s = dd_spectrum(1.0, 9000.0);
        const FinitePartFit fit =
            extract_finite_part(example_ladder_samples(s), fixed_weyl_template(1.0));
        CHECK(std::abs(fit.finite_part + kPi / 24.0) < 1e-6);
    }
    SUBCASE("star N=4 recovers (4-3) pi/48") {
        const Spectrum s = star_spectrum(StarGraphSpec::equal(4, 1.0), 9000.0);
        const FinitePartFit fit =
            extract_finite_part(example_ladder_samples(s), fixed_weyl_template(4.0));
        CHECK(std::abs(fit.finite_part - kPi / 48.0) < 1e-6);
    }
}

TEST_CASE("full pipeline matches the closed forms to 1e-6 relative") {
    for (double a : {0.5, 1.0, 2.0, 5.0}) {
        for (auto [left, right] : {std::pair{BoundaryCondition::Dirichlet,
                                             BoundaryCondition::Dirichlet},
                                   std::pair{BoundaryCondition::Neumann,
                                             BoundaryCondition::Neumann},
                                   std::pair{BoundaryCondition::Dirichlet,
                                             BoundaryCondition::Neumann}}) {
            const IntervalSpec spec{a, left, right};
            const double fit = interval_finite_part(spec).finite_part;
            const double oracle = closed_form_energy_1d(spec);
            CHECK(std::abs(fit - oracle) <= 1e-6 * std::abs(oracle));
        }
    }
}

TEST_CASE("star finite parts match (N-3) pi/48a on both routes") {
    LadderConfig solver_ladder;
    solver_ladder.rungs = 8;  // keeps the root-finder ceiling affordable
    for (std::size_t n = 1; n <= 6; ++n) {
        const StarGraphSpec spec = StarGraphSpec::equal(n, 1.0);
        const double oracle = closed_form_energy_star(n, 1.0, BoundaryCondition::Neumann);
        const double closed = star_finite_part(spec).finite_part;
        const double scale = std::max(std::abs(oracle), kPi / 48.0);
        CHECK(std::abs(closed - oracle) <= 1e-6 * scale);
        const double solved =
            star_finite_part(spec, solver_ladder, StarMethod::Solver).finite_part;
        CHECK(std::abs(solved - oracle) <= 1e-6 * scale);
    }
}

TEST_CASE("fit honesty") {
    SUBCASE("exact recovery of synthetic template data") {
        Lcg rng(17);
        for (int trial = 0; trial < 20; ++trial) {
            const double c_div = rng.uniform(-2.0, 2.0);
            const double c_fin = rng.uniform(-1.0, 1.0);
            const double c1 = rng.uniform(-0.5, 0.5);
            const double c2 = rng.uniform(-0.5, 0.5);
            std::vector<CutoffSample> samples;
            for (int k = 0; k < 9; ++k) {
                CutoffSample s;
                s.t = 0.3 * std::pow(2.0, -k);
                s.energy = c_div / (s.t * s.t) + c_fin + c1 * s.t + c2 * s.t * s.t;
                samples.push_back(s);
            }
            const FinitePartFit fit =
                extract_finite_part(samples, DivergenceTemplate::linear_geometry());
            CHECK(fit.finite_part == doctest::Approx(c_fin).epsilon(1e-8));
            CHECK(fit.divergent_coefficients[0] == doctest::Approx(c_div).epsilon(1e-8));
            CHECK(fit.residual < 1e-9);
        }
    }
    SUBCASE("data outside the template is rejected, not silently fitted") {
        // A strong 1/t^3 component cannot be absorbed by the 1/t^2 template.
        std::vector<CutoffSample> samples;
        for (int k = 0; k < 9; ++k) {
            CutoffSample s;
            s.t = 0.3 * std::pow(2.0, -k);
            s.energy = 1.0 / (s.t * s.t * s.t) + 0.25;
            samples.push_back(s);
        }
        CHECK_THROWS_AS(extract_finite_part(samples, DivergenceTemplate::linear_geometry()),
                        error);
    }
    SUBCASE("too few samples violate the precondition") {
        std::vector<CutoffSample> samples;
        for (int k = 0; k < 5; ++k) {
            CutoffSample s;
            s.t = 0.2 * std::pow(2.0, -k);
            s.energy = 1.0 / (s.t * s.t);
            samples.push_back(s);
        }
        CHECK_THROWS_AS(extract_finite_part(samples, DivergenceTemplate::linear_geometry()),
                        invalid_input);
    }
    SUBCASE("template validation") {
        DivergenceTemplate bad;
        bad.divergent = {{2, std::nullopt}};
        CHECK_THROWS_AS(bad.validate(), invalid_input);
        DivergenceTemplate unordered;
        unordered.divergent = {{-3, std::nullopt}, {-2, std::nullopt}};
        CHECK_THROWS_AS(unordered.validate(), invalid_input);
    }
}

TEST_CASE("closed-form star energies") {
    CHECK(closed_form_energy_star(4, 1.0, BoundaryCondition::Neumann) ==
          doctest::Approx(kPi / 48.0).epsilon(1e-15));
    CHECK(closed_form_energy_star(3, 1.0, BoundaryCondition::Neumann) == 0.0);
    CHECK(closed_form_energy_star(2, 1.0, BoundaryCondition::Dirichlet) ==
          doctest::Approx(-kPi / 48.0).epsilon(1e-15));
    // N=1 Dirichlet star is the mixed interval
    CHECK(closed_form_energy_star(1, 1.0, BoundaryCondition::Dirichlet) ==
          doctest::Approx(kPi / 48.0).epsilon(1e-15));
}
