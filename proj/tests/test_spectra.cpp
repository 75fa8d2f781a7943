#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "pistonlab/spectra.hpp"

using namespace pistonlab;

namespace {

constexpr double kPi = std::numbers::pi;

// Small deterministic generator for property-style checks.
struct Lcg {
    std::uint64_t state;
    explicit Lcg(std::uint64_t seed) : state(seed) {}
    double uniform(double lo, double hi) {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        const double u = static_cast<double>(state >> 11) / 9007199254740992.0;
        return lo + (hi - lo) * u;
    }
};

std::vector<double> omegas(const Spectrum& s) {
    std::vector<double> w;
    for (const Mode& m : s.modes) w.push_back(m.omega);
    return w;
}

// Independent oracle: dense scan of the secular function with bisection on
// every sign change.
double smallest_secular_zero(const StarGraphSpec& spec, double step) {
    double prev_w = step;
    double prev_f = star_secular_function(spec, prev_w);
    for (double w = 2 * step; w < 50.0; w += step) {
        const double f = star_secular_function(spec, w);
        if (prev_f == 0.0) return prev_w;
        if (std::signbit(prev_f) != std::signbit(f)) {
            double lo = prev_w, hi = w, flo = prev_f;
            for (int i = 0; i < 100; ++i) {
                const double mid = 0.5 * (lo + hi);
                const double fm = star_secular_function(spec, mid);
                if (fm == 0.0) return mid;
                if (std::signbit(fm) == std::signbit(flo)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            return 0.5 * (lo + hi);
        }
        prev_w = w;
        prev_f = f;
    }
    return -1.0;
}

// Independent oracle: brute-force lattice enumeration of the box modes.
std::vector<Mode> brute_force_box_modes(double a, double b1, double b2, double ceiling) {
    std::vector<Mode> raw;
    const long lim = 1 + static_cast<long>(ceiling * std::max({a, b1, b2}) / kPi);
    for (long l = 0; l <= lim; ++l)
        for (long m = 0; m <= lim; ++m)
            for (long n = 0; n <= lim; ++n) {
                const int zeros = (l == 0) + (m == 0) + (n == 0);
                if (zeros >= 2) continue;
                const double w = kPi * std::sqrt((l / a) * (l / a) + (m / b1) * (m / b1) +
                                                 (n / b2) * (n / b2));
                if (w > ceiling) continue;
                raw.push_back({w, zeros == 0 ? 2 : 1, ModeFlagNone});
            }
    std::sort(raw.begin(), raw.end(),
              [](const Mode& x, const Mode& y) { return x.omega < y.omega; });
    std::vector<Mode> merged;
    for (const Mode& m : raw) {
        if (!merged.empty() && m.omega - merged.back().omega <= 1e-12 * m.omega)
            merged.back().multiplicity += m.multiplicity;
        else
            merged.push_back(m);
    }
    return merged;
}

} // namespace

TEST_CASE("interval spectrum closed forms") {
    SUBCASE("Dirichlet ends: n pi / a") {
        const Spectrum s = interval_spectrum(
            {1.0, BoundaryCondition::Dirichlet, BoundaryCondition::Dirichlet}, 10.0);
        REQUIRE(s.modes.size() == 3);
        CHECK(s.modes[0].omega == doctest::Approx(kPi).epsilon(1e-15));
        CHECK(s.modes[1].omega == doctest::Approx(2 * kPi).epsilon(1e-15));
        CHECK(s.modes[2].omega == doctest::Approx(3 * kPi).epsilon(1e-15));
        for (const Mode& m : s.modes) CHECK(m.multiplicity == 1);
    }
    SUBCASE("Neumann ends include the flagged zero mode") {
        const Spectrum s = interval_spectrum(
            {1.0, BoundaryCondition::Neumann, BoundaryCondition::Neumann}, 7.0);
        REQUIRE(s.modes.size() == 3);
        CHECK(s.modes[0].omega == 0.0);
        CHECK((s.modes[0].flags & ModeFlagZero));
        CHECK(s.modes[1].omega == doctest::Approx(kPi));
        CHECK(s.modes[2].omega == doctest::Approx(2 * kPi));
    }
    SUBCASE("mixed ends: odd half-multiples") {
        const Spectrum s = interval_spectrum(
            {2.0, BoundaryCondition::Dirichlet, BoundaryCondition::Neumann}, 9.0);
        REQUIRE(s.modes.size() == 6);
        for (int n = 0; n < 6; ++n)
            CHECK(s.modes[n].omega ==
                  doctest::Approx((2.0 * n + 1.0) * kPi / 4.0).epsilon(1e-15));
    }
    SUBCASE("both mixed orientations give the same modes") {
        const Spectrum dn = interval_spectrum(
            {1.5, BoundaryCondition::Dirichlet, BoundaryCondition::Neumann}, 12.0);
        const Spectrum nd = interval_spectrum(
            {1.5, BoundaryCondition::Neumann, BoundaryCondition::Dirichlet}, 12.0);
        REQUIRE(dn.modes.size() == nd.modes.size());
        for (std::size_t i = 0; i < dn.modes.size(); ++i)
            CHECK(dn.modes[i].omega == nd.modes[i].omega);
    }
    SUBCASE("invalid inputs") {
        CHECK_THROWS_AS(interval_spectrum({-1.0, BoundaryCondition::Dirichlet,
                                           BoundaryCondition::Dirichlet},
                                          10.0),
                        invalid_input);
        CHECK_THROWS_AS(interval_spectrum({1.0, BoundaryCondition::Dirichlet,
                                           BoundaryCondition::Dirichlet},
                                          -5.0),
                        invalid_input);
    }
}

TEST_CASE("star secular function") {
    SUBCASE("two equal edges collapse to sin(2 w a)") {
        const StarGraphSpec spec = StarGraphSpec::equal(2, 1.0);
        Lcg rng(7);
        for (int i = 0; i < 200; ++i) {
            const double w = rng.uniform(0.01, 20.0);
            CHECK(star_secular_function(spec, w) ==
                  doctest::Approx(std::sin(2.0 * w)).epsilon(1e-12));
        }
    }
    SUBCASE("three equal edges vanish at w = pi") {
        const StarGraphSpec spec = StarGraphSpec::equal(3, 1.0);
        CHECK(std::abs(star_secular_function(spec, kPi)) < 1e-12);
    }
    SUBCASE("Dirichlet form for two equal edges is sin(2 w a) as well") {
        // cos*sin + cos*sin: the two-edge Dirichlet graph is a length-2a
        // Dirichlet interval, zeros at n pi/2a.
        const StarGraphSpec spec = StarGraphSpec::equal(2, 1.0, BoundaryCondition::Dirichlet);
        Lcg rng(5);
        for (int i = 0; i < 100; ++i) {
            const double w = rng.uniform(0.01, 15.0);
            CHECK(star_secular_function(spec, w) ==
                  doctest::Approx(std::sin(2.0 * w)).epsilon(1e-12));
        }
    }
    SUBCASE("permutation symmetry") {
        Lcg rng(11);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<double> lengths = {rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0),
                                           rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0)};
            std::vector<double> shuffled = {lengths[2], lengths[0], lengths[3], lengths[1]};
            const double w = rng.uniform(0.1, 15.0);
            const double f1 = star_secular_function({lengths, BoundaryCondition::Neumann}, w);
            const double f2 =
                star_secular_function({shuffled, BoundaryCondition::Neumann}, w);
            CHECK(f1 == doctest::Approx(f2).epsilon(1e-12));
        }
    }
    SUBCASE("smallest zero matches the dense-scan oracle") {
        const StarGraphSpec spec{{1.0, 1.3, 1.7}, BoundaryCondition::Neumann};
        const double oracle = smallest_secular_zero(spec, 1e-4);
        REQUIRE(oracle > 0.0);
        const Spectrum s = star_spectrum(spec, 5.0);
        REQUIRE(s.modes.size() >= 2);
        CHECK(s.modes[0].omega == 0.0);  // flagged zero mode
        CHECK(s.modes[1].omega == doctest::Approx(oracle).epsilon(1e-8));
    }
}

TEST_CASE("star spectrum closed form") {
    SUBCASE("N=4 two-family pattern") {
        const Spectrum s = star_spectrum(StarGraphSpec::equal(4, 1.0), 7.0);
        REQUIRE(s.modes.size() >= 5);
        CHECK(s.modes[0].omega == 0.0);
        CHECK((s.modes[0].flags & ModeFlagZero));
        CHECK(s.modes[1].omega == doctest::Approx(kPi / 2).epsilon(1e-15));
        CHECK(s.modes[1].multiplicity == 3);
        CHECK(s.modes[2].omega == doctest::Approx(kPi).epsilon(1e-15));
        CHECK(s.modes[2].multiplicity == 1);
        CHECK(s.modes[3].omega == doctest::Approx(3 * kPi / 2).epsilon(1e-15));
        CHECK(s.modes[3].multiplicity == 3);
        CHECK(s.modes[4].omega == doctest::Approx(2 * kPi).epsilon(1e-15));
        CHECK(s.modes[4].multiplicity == 1);
    }
    SUBCASE("N=1 reduces to the Neumann interval") {
        const Spectrum star = star_spectrum(StarGraphSpec::equal(1, 1.0), 40.0);
        const Spectrum nn = interval_spectrum(
            {1.0, BoundaryCondition::Neumann, BoundaryCondition::Neumann}, 40.0);
        REQUIRE(star.modes.size() == nn.modes.size());
        for (std::size_t i = 0; i < nn.modes.size(); ++i) {
            CHECK(star.modes[i].omega == nn.modes[i].omega);
            CHECK(star.modes[i].multiplicity == nn.modes[i].multiplicity);
        }
    }
    SUBCASE("N=2 reduces to the doubled Neumann interval") {
        const Spectrum star = star_spectrum(StarGraphSpec::equal(2, 1.0), 40.0);
        const Spectrum nn = interval_spectrum(
            {2.0, BoundaryCondition::Neumann, BoundaryCondition::Neumann}, 40.0);
        REQUIRE(star.modes.size() == nn.modes.size());
        for (std::size_t i = 0; i < nn.modes.size(); ++i) {
            CHECK(star.modes[i].omega == nn.modes[i].omega);
            CHECK(star.modes[i].multiplicity == nn.modes[i].multiplicity);
        }
    }
    SUBCASE("Dirichlet pistons swap the families") {
        const Spectrum s =
            star_spectrum(StarGraphSpec::equal(4, 1.0, BoundaryCondition::Dirichlet), 7.0);
        REQUIRE(s.modes.size() >= 4);
        CHECK(s.modes[0].omega == doctest::Approx(kPi / 2).epsilon(1e-15));
        CHECK(s.modes[0].multiplicity == 1);
        CHECK(s.modes[1].omega == doctest::Approx(kPi).epsilon(1e-15));
        CHECK(s.modes[1].multiplicity == 3);
        // no zero mode with Dirichlet pistons
        CHECK(s.modes[0].omega > 0.0);
    }
}

TEST_CASE("star spectrum solver") {
    SUBCASE("equal lengths match the closed form") {
        for (std::size_t n : {1u, 2u, 3u, 5u}) {
            const StarGraphSpec spec = StarGraphSpec::equal(n, 1.0);
            const Spectrum closed = star_spectrum(spec, 120.0, StarMethod::ClosedForm);
            const Spectrum solved = star_spectrum(spec, 120.0, StarMethod::Solver);
            REQUIRE(closed.modes.size() == solved.modes.size());
            for (std::size_t i = 0; i < closed.modes.size(); ++i) {
                CHECK(std::abs(closed.modes[i].omega - solved.modes[i].omega) < 1e-10);
                CHECK(closed.modes[i].multiplicity == solved.modes[i].multiplicity);
            }
        }
    }
    SUBCASE("Dirichlet equal lengths match too") {
        const StarGraphSpec spec = StarGraphSpec::equal(4, 0.8, BoundaryCondition::Dirichlet);
        const Spectrum closed = star_spectrum(spec, 90.0, StarMethod::ClosedForm);
        const Spectrum solved = star_spectrum(spec, 90.0, StarMethod::Solver);
        REQUIRE(closed.modes.size() == solved.modes.size());
        for (std::size_t i = 0; i < closed.modes.size(); ++i) {
            CHECK(std::abs(closed.modes[i].omega - solved.modes[i].omega) < 1e-10);
            CHECK(closed.modes[i].multiplicity == solved.modes[i].multiplicity);
        }
    }
    SUBCASE("commensurate unequal lengths pick up the m-1 rule") {
        // cos(w) and cos(3w) vanish together at w = pi/2 + k pi: multiplicity 1
        // there, even though three pole positions coincide pairwise only.
        const StarGraphSpec spec{{1.0, 3.0}, BoundaryCondition::Neumann};
        const Spectrum s = star_spectrum(spec, 20.0);
        // eigenvalue at pi/2 with multiplicity 2 - 1 = 1
        bool found = false;
        for (const Mode& m : s.modes)
            if (std::abs(m.omega - kPi / 2) < 1e-9) {
                found = true;
                CHECK(m.multiplicity == 1);
                CHECK((m.flags & ModeFlagDegenerate));
            }
        CHECK(found);
        // Weyl counting stays within the edge count
        const double weyl = spec.total_length() * 20.0 / kPi;
        CHECK(std::abs(static_cast<double>(s.mode_count_weighted()) - weyl) <= 2.0 + 1.0);
    }
    SUBCASE("nearly equal lengths resolve separate roots") {
        const StarGraphSpec spec{{1.0, 1.000001}, BoundaryCondition::Neumann};
        const Spectrum s = star_spectrum(spec, 30.0);
        const double weyl = spec.total_length() * 30.0 / kPi;
        CHECK(std::abs(static_cast<double>(s.mode_count_weighted()) - weyl) <= 3.0);
        s.validate();
    }
    SUBCASE("scaling covariance within solver tolerance") {
        const std::vector<double> base = {0.9, 1.4, 2.3};
        const double lambda = 3.0;
        std::vector<double> scaled = base;
        for (double& x : scaled) x *= lambda;
        const Spectrum s1 = star_spectrum({base, BoundaryCondition::Neumann}, 40.0);
        const Spectrum s2 = star_spectrum({scaled, BoundaryCondition::Neumann}, 40.0 / lambda);
        REQUIRE(s1.modes.size() == s2.modes.size());
        for (std::size_t i = 0; i < s1.modes.size(); ++i) {
            CHECK(std::abs(s2.modes[i].omega * lambda - s1.modes[i].omega) <=
                  1e-10 * std::max(1.0, s1.modes[i].omega));
            CHECK(s1.modes[i].multiplicity == s2.modes[i].multiplicity);
        }
    }
    SUBCASE("counting stays within the edge count of the Weyl line") {
        Lcg rng(23);
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<double> lengths;
            const int n = 1 + static_cast<int>(rng.uniform(1.0, 5.99));
            for (int j = 0; j < n; ++j) lengths.push_back(rng.uniform(0.4, 2.5));
            const StarGraphSpec spec{lengths, BoundaryCondition::Neumann};
            const double ceiling = rng.uniform(10.0, 60.0);
            const Spectrum s = star_spectrum(spec, ceiling);
            const double weyl = spec.total_length() * ceiling / kPi;
            CHECK(std::abs(static_cast<double>(s.mode_count_weighted()) - weyl) <=
                  static_cast<double>(n) + 1.0);
        }
    }
}

TEST_CASE("box electromagnetic spectrum") {
    SUBCASE("cube fundamentals") {
        const Spectrum s = box_em_spectrum({1.0, 1.0, 1.0, WallModel::AllConducting}, 5.0);
        REQUIRE(!s.modes.empty());
        CHECK(s.modes[0].omega == doctest::Approx(kPi * std::sqrt(2.0)).epsilon(1e-14));
        CHECK(s.modes[0].multiplicity == 3);  // (1,1,0), (1,0,1), (0,1,1)
    }
    SUBCASE("the (1,1,1) mode carries two polarizations") {
        const Spectrum s = box_em_spectrum({1.0, 1.0, 1.0, WallModel::AllConducting}, 5.5);
        bool found = false;
        for (const Mode& m : s.modes)
            if (std::abs(m.omega - kPi * std::sqrt(3.0)) < 1e-12) {
                found = true;
                CHECK(m.multiplicity == 2);
            }
        CHECK(found);
    }
    SUBCASE("matches the brute-force oracle on an anisotropic box") {
        const Spectrum s = box_em_spectrum({1.0, 0.7, 1.3, WallModel::AllConducting}, 20.0);
        const std::vector<Mode> oracle = brute_force_box_modes(1.0, 0.7, 1.3, 20.0);
        REQUIRE(s.modes.size() == oracle.size());
        for (std::size_t i = 0; i < oracle.size(); ++i) {
            CHECK(s.modes[i].omega == doctest::Approx(oracle[i].omega).epsilon(1e-13));
            CHECK(s.modes[i].multiplicity == oracle[i].multiplicity);
        }
    }
    SUBCASE("doubling every side halves every frequency") {
        const Spectrum s1 = box_em_spectrum({1.0, 0.9, 1.1, WallModel::AllConducting}, 14.0);
        const Spectrum s2 = box_em_spectrum({2.0, 1.8, 2.2, WallModel::AllConducting}, 7.0);
        REQUIRE(s1.modes.size() == s2.modes.size());
        for (std::size_t i = 0; i < s1.modes.size(); ++i) {
            CHECK(s2.modes[i].omega == doctest::Approx(s1.modes[i].omega / 2.0).epsilon(1e-14));
            CHECK(s1.modes[i].multiplicity == s2.modes[i].multiplicity);
        }
    }
    SUBCASE("budget guard") {
        BoxEnumOptions opts;
        opts.mode_budget = 10.0;
        CHECK_THROWS_AS(box_em_spectrum({1.0, 1.0, 1.0, WallModel::AllConducting}, 50.0, opts),
                        resource_limit);
    }
    SUBCASE("streaming and materialized enumerations agree") {
        std::size_t streamed = 0;
        double checksum = 0.0;
        box_em_for_each_mode({1.0, 0.7, 1.3, WallModel::AllConducting}, 20.0,
                             [&](double w, int mult) {
                                 streamed += mult;
                                 checksum += mult * w;
                             });
        const Spectrum s = box_em_spectrum({1.0, 0.7, 1.3, WallModel::AllConducting}, 20.0);
        CHECK(streamed == s.mode_count_weighted());
        double materialized = 0.0;
        for (const Mode& m : s.modes) materialized += m.multiplicity * m.omega;
        CHECK(checksum == doctest::Approx(materialized).epsilon(1e-12));
    }
}

TEST_CASE("spectrum validation") {
    Spectrum bad;
    bad.modes = {{1.0, 1, 0}, {1.0, 1, 0}};
    CHECK_THROWS_AS(bad.validate(), invalid_input);
    bad.modes = {{1.0, 0, 0}};
    CHECK_THROWS_AS(bad.validate(), invalid_input);
}
