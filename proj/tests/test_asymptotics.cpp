#include "generators.hpp"
#include "predlab/asymptotics.hpp"
#include "predlab/error.hpp"

#include <doctest.h>

#include <cmath>

using namespace predlab;

TEST_CASE("root limit of geometric sequences")
{
    const auto exact = gen::log_series(1.0, 0.0, 0.5, 64);
    CHECK(root_limit(exact, root_window(exact.size())).estimate == doctest::Approx(0.5).epsilon(1e-12));
    const auto poly = gen::log_series(1.0, 2.0, 0.5, 64);
    const auto r = root_limit(poly, root_window(poly.size()));
    CHECK(std::abs(r.estimate - 0.5) <= 0.01);
    // The raw last root still carries the 64^{2/64} prefactor.
    CHECK(r.secondary == doctest::Approx(std::pow(64.0, 2.0 / 64) * 0.5).epsilon(1e-12));
}

TEST_CASE("power law recovers exact parameters")
{
    std::vector<double> logs;
    for (int n = 0; n <= 200; ++n) logs.push_back(std::log(0.2) - 1.5 * std::log(std::max(n, 1)));
    const auto r = power_law_fit(logs, {20, 200});
    CHECK(r.estimate == doctest::Approx(1.5).epsilon(1e-10));
    CHECK(r.secondary == doctest::Approx(0.2).epsilon(1e-10));
    CHECK(r.residual < 1e-10);
}

TEST_CASE("ratio limit")
{
    const auto f = gen::log_series(2.0, -0.5, 1.0, 50);
    std::vector<double> fg;
    for (double v : f) fg.push_back(v + std::log(3.0));
    const auto r = ratio_limit(fg, f, {10, 50});
    CHECK(r.estimate == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(r.secondary == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(r.spread < 1e-12);
}

TEST_CASE("ratio limit tail diagnostic on a slowly converging ratio")
{
    std::vector<double> f, fg;
    for (int n = 0; n <= 400; ++n) {
        const double x = std::max(n, 1);
        f.push_back(-std::log(x));
        fg.push_back(-std::log(x) + std::log(0.25 + 0.8 * std::pow(x, -0.5)));
    }
    const auto r = ratio_limit(fg, f, {100, 400});
    CHECK(r.estimate == doctest::Approx(0.25 + 0.8 / 20.0).epsilon(1e-12));
    CHECK(r.extrapolated == doctest::Approx(0.25).epsilon(1e-6));
    CHECK(r.decay_exponent == doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("precision mismatch and short windows")
{
    PredictionErrorSeries a, b;
    a.precision_bits = 256;
    b.precision_bits = 320;
    for (int n = 0; n < 10; ++n) {
        a.sigma2.emplace_back(1.0, Bits{256});
        b.sigma2.emplace_back(1.0, Bits{320});
    }
    CHECK_THROWS_AS(ratio_limit(a, b, {0, 9}), PrecisionMismatch);
    const auto logs = gen::log_series(1.0, 0.0, 0.9, 20);
    CHECK_THROWS_AS(root_limit(logs, {10, 12}), WindowTooShort);
    CHECK_THROWS_AS(power_law_fit(logs, {10, 16}), WindowTooShort);
    CHECK_THROWS_AS(classify(logs, {10, 16}), WindowTooShort);
}

TEST_CASE("classification examples")
{
    const auto constant = gen::log_series(kTwoPi, 0.0, 1.0, 64);
    auto c = classify(constant, root_window(constant.size()));
    CHECK(c.exponentially_neutral == Verdict::Consistent);
    CHECK(c.exponentially_decreasing == Verdict::Inconsistent);
    CHECK(c.weakly_varying == Verdict::Consistent);

    const auto geometric = gen::log_series(1.0, 0.0, 0.5, 64);
    c = classify(geometric, root_window(geometric.size()));
    CHECK(c.exponentially_decreasing == Verdict::Consistent);
    CHECK(c.weakly_varying == Verdict::Inconsistent);

    const auto power = gen::log_series(1.0, -0.5, 1.0, 400);
    c = classify(power, root_window(power.size()));
    CHECK(c.exponentially_neutral == Verdict::Consistent);
    CHECK(c.weakly_varying == Verdict::Consistent);
}

TEST_CASE("property: exact recovery on synthetic models")
{
    gen::Rng rng(51);
    for (int trial = 0; trial < 100; ++trial) {
        const double C = gen::uniform(rng, 0.01, 10.0);
        const double alpha = gen::uniform(rng, -2.0, 2.0);
        const double q = gen::uniform(rng, 0.1, 1.0);
        const int N = gen::integer(rng, 40, 200);
        const auto logs = gen::log_series(C, alpha, q, N);
        CHECK(root_limit(logs, root_window(logs.size())).estimate == doctest::Approx(q).epsilon(1e-8));

        std::vector<double> pw;
        for (int n = 0; n <= N; ++n) pw.push_back(std::log(C) - 2.0 * alpha * std::log(std::max(n, 1)));
        const auto p = power_law_fit(pw, power_window(pw.size()));
        CHECK(p.estimate == doctest::Approx(2.0 * alpha).epsilon(1e-8));
        CHECK(p.secondary == doctest::Approx(C).epsilon(1e-8));
    }
}

TEST_CASE("property: classification flags are mutually exclusive")
{
    gen::Rng rng(52);
    for (int trial = 0; trial < 200; ++trial) {
        const auto logs = gen::log_series(gen::uniform(rng, 0.1, 10.0), gen::uniform(rng, -3.0, 3.0),
                                          gen::uniform(rng, 0.3, 1.0), gen::integer(rng, 16, 200));
        const auto c = classify(logs, root_window(logs.size()));
        CHECK_FALSE((c.exponentially_neutral == Verdict::Consistent &&
                     c.exponentially_decreasing == Verdict::Consistent));
    }
}

TEST_CASE("property: scaling a density scales every prediction error")
{
    gen::Rng rng(53);
    QuadratureConfig quad;
    quad.precision_bits = 256;
    for (int trial = 0; trial < 6; ++trial) {
        const auto f = gen::regular_density(rng);
        const double c = gen::uniform(rng, 0.1, 10.0);
        const auto s = levinson(autocovariances(f, 24, quad));
        const auto sc = levinson(autocovariances(SpectralDensity::constant(c) * f, 24, quad));
        for (std::size_t n = 0; n < s.size(); ++n)
            CHECK(abs(sc.sigma2[n] / s.sigma2[n] - c).to_double() < 1e-40 * c);
        const auto r = ratio_limit(sc, s, {4, 24});
        CHECK(r.estimate == doctest::Approx(c).epsilon(1e-15));
    }
}
