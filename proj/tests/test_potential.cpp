#include "generators.hpp"
#include "predlab/arcset.hpp"
#include "predlab/error.hpp"
#include "predlab/potential.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>

using namespace predlab;

namespace {

double chord(double a, double b) { return std::abs(2.0 * std::sin(0.5 * (a - b))); }

/// Best d_3 over all triples of grid points in [lo, hi].
double brute_force_d3(double lo, double hi, int steps)
{
    std::vector<double> g;
    for (int j = 0; j <= steps; ++j) g.push_back(lo + (hi - lo) * j / steps);
    double best = 0.0;
    for (std::size_t a = 0; a < g.size(); ++a)
        for (std::size_t b = a + 1; b < g.size(); ++b)
            for (std::size_t c = b + 1; c < g.size(); ++c)
                best = std::max(best, chord(g[a], g[b]) * chord(g[b], g[c]) * chord(g[a], g[c]));
    return std::cbrt(best);
}

bool inside(const ArcSet& F, double theta) { return F.contains(theta, 1e-12); }

}  // namespace

TEST_CASE("Fekete points of the full circle")
{
    CHECK(fekete_points(ArcSet::full_circle(), 2).d_n == doctest::Approx(2.0));
    CHECK(fekete_points(ArcSet::full_circle(), 3).d_n == doctest::Approx(std::sqrt(3.0)));
    CHECK(brute_force_d3(-kPi, kPi, 360) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-4));
}

TEST_CASE("Fekete points of a single arc")
{
    const double a = kPi / 3;
    const ArcSet F = gamma_arc(2 * a);
    const auto r2 = fekete_points(F, 2);
    CHECK(r2.d_n == doctest::Approx(2 * std::sin(a)).epsilon(1e-12));
    const auto r3 = fekete_points(F, 3);
    CHECK(r3.converged);
    CHECK(r3.d_n >= brute_force_d3(-a, a, 120) - 1e-12);
    CHECK(r3.d_n == doctest::Approx(brute_force_d3(-a, a, 120)).epsilon(1e-4));
    for (double p : r3.points) CHECK(inside(F, p));
}

TEST_CASE("Chebyshev bound examples")
{
    const auto circle = ArcSet::full_circle();
    for (int n : {4, 9}) {
        const auto fk = fekete_points(circle, n);
        CHECK(chebyshev_upper_bound(circle, n, fk) == doctest::Approx(2.0).epsilon(1e-9));
    }
    FeketeResult single;
    single.n = 1;
    single.points = {0.0};
    CHECK(chebyshev_upper_bound(ArcSet({Arc::centered(0.0, 0.0)}), 1, single) == 0.0);

    const ArcSet arc = gamma_arc(2 * kPi / 3);
    const auto fk = fekete_points(arc, 32);
    CHECK(std::pow(chebyshev_upper_bound(arc, 32, fk), 1.0 / 32) == doctest::Approx(0.5).epsilon(0.1));
    CHECK_THROWS_AS(chebyshev_upper_bound(arc, 31, fk), InvalidArgument);
}

TEST_CASE("tau estimates")
{
    CHECK(tau_estimate(ArcSet::full_circle(), 32).tau_hat == doctest::Approx(1.0).epsilon(0.02));
    const auto single = tau_estimate(gamma_arc(2 * kPi / 3), 40);
    CHECK(std::abs(single.tau_hat - 0.5) <= 0.02);
    CHECK(single.d.size() == 3);
    const auto four = tau_estimate(four_arc(kPi / 4, kPi / 8), 40);
    CHECK(std::abs(four.tau_hat - std::pow(std::sin(kPi / 4) * std::sin(kPi / 2), 0.25)) <= 0.03);
    CHECK(tau_estimate(ArcSet({Arc::centered(0.3, 0.0)}), 16).tau_hat == 0.0);
    CHECK_THROWS_AS(tau_estimate(gamma_arc(1.0), 7), InvalidArgument);
}

TEST_CASE("optimizer is deterministic for a seed")
{
    const ArcSet F = equidistant_arcs(3, 0.8, 0.2);
    OptimizerConfig opt;
    opt.seed = 99;
    const auto a = fekete_points(F, 14, opt);
    const auto b = fekete_points(F, 14, opt);
    CHECK(a.points == b.points);
    CHECK(a.d_n == b.d_n);
}

TEST_CASE("property: Fekete invariants on random arc sets")
{
    gen::Rng rng(41);
    for (int trial = 0; trial < 8; ++trial) {
        const ArcSet F = gen::arcset(rng);
        OptimizerConfig opt;
        opt.seed = rng();
        double prev = 3.0;
        for (int n = 2; n <= 14; n += 3) {
            const auto r = fekete_points(F, n, opt);
            CHECK(r.converged);
            CHECK(r.d_n <= 2.0);
            CHECK(r.d_n <= prev + 1e-8);
            prev = r.d_n;
            for (double p : r.points) CHECK(inside(F, p));
            int total = 0;
            for (int c : r.allocation) total += c;
            CHECK(total == n);
            // The bound is a sup over F, so it dominates |prod (z - z_j)| at any sampled point of F.
            const double bound = chebyshev_upper_bound(F, n, r);
            for (const auto& iv : F.intervals()) {
                for (int s = 0; s < 50; ++s) {
                    const double th = gen::uniform(rng, iv.lo, iv.hi);
                    double prod = 1.0;
                    for (double p : r.points) prod *= chord(th, p);
                    CHECK(prod <= bound * (1.0 + 1e-9));
                }
            }
        }
    }
}

TEST_CASE("property: rotation changes d_n only within optimizer tolerance")
{
    gen::Rng rng(42);
    for (int trial = 0; trial < 5; ++trial) {
        const ArcSet F = gen::arcset(rng, 2);
        const double theta = gen::uniform(rng, -kPi, kPi);
        const double a = fekete_points(F, 12).d_n;
        const double b = fekete_points(rotate(F, theta), 12).d_n;
        CHECK(a == doctest::Approx(b).epsilon(1e-8));
    }
}

TEST_CASE("property: inclusion is monotone for d_n")
{
    gen::Rng rng(43);
    for (int trial = 0; trial < 5; ++trial) {
        const double beta = gen::uniform(rng, 0.5, 4.0);
        const double c = gen::uniform(rng, -kPi, kPi);
        const double small = fekete_points(gamma_arc(beta, c), 10).d_n;
        const double large = fekete_points(gamma_arc(beta + 0.4, c), 10).d_n;
        CHECK(small <= large + 1e-8);
    }
}
