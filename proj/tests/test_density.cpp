#include "generators.hpp"
#include "predlab/density.hpp"
#include "predlab/error.hpp"
#include "predlab/fejer_riesz.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <functional>

using namespace predlab;

namespace {

QuadratureConfig quad(int k_max, mpfr_prec_t bits = 128)
{
    QuadratureConfig q;
    q.precision_bits = bits;
    q.k_max = k_max;
    return q;
}

/// Trapezoid rule in double precision; spectrally accurate for smooth periodic integrands.
std::complex<double> trapezoid_coefficient(const std::function<double(double)>& f, int k, int points = 8192)
{
    std::complex<double> sum = 0.0;
    const double h = kTwoPi / points;
    for (int j = 0; j < points; ++j) {
        const double x = -kPi + j * h;
        sum += f(x) * std::polar(1.0, -k * x);
    }
    return sum * h;
}

double trapezoid_log_mean(const std::function<double(double)>& f, int points = 1 << 16)
{
    double sum = 0.0;
    const double h = kTwoPi / points;
    for (int j = 0; j < points; ++j) sum += std::log(f(-kPi + (j + 0.5) * h));
    return std::exp(sum * h / kTwoPi);
}

}  // namespace

TEST_CASE("evaluate on simple nodes")
{
    CHECK(evaluate(SpectralDensity::constant(2.5), 1.0) == 2.5);
    const auto ind = SpectralDensity::arc_indicator(gamma_arc(kPi, kPi / 2));
    CHECK(evaluate(ind, kPi / 2) == 1.0);
    CHECK(evaluate(ind, 0.0 - 0.01) == 0.0);
    const auto r = SpectralDensity::rosenblatt(1.0);
    CHECK(evaluate(r, 0.0) == 0.0);
    CHECK(evaluate(r, 0.7) == doctest::Approx(evaluate(r, -0.7)));
}

TEST_CASE("Rosenblatt denominators against the small-lambda asymptote")
{
    // The |sin| form settles toward a constant; the cosh form grows like 1/lambda.
    const double s1 = rosenblatt_asymptote_ratio(1.0, RosenblattForm::CoshAbsSine, 0.01);
    const double s2 = rosenblatt_asymptote_ratio(1.0, RosenblattForm::CoshAbsSine, 0.001);
    CHECK(s2 == doctest::Approx(std::exp(1.0)).epsilon(0.01));
    CHECK(std::abs(s1 - s2) < 0.1);
    const double c1 = rosenblatt_asymptote_ratio(1.0, RosenblattForm::Cosh, 0.01);
    const double c2 = rosenblatt_asymptote_ratio(1.0, RosenblattForm::Cosh, 0.001);
    CHECK(c2 / c1 == doctest::Approx(10.0).epsilon(0.01));
}

TEST_CASE("analytic Fourier coefficients")
{
    const auto one = SpectralDensity::constant(1.0);
    CHECK(fourier_coefficient(one, 0, quad(3)).re.to_double() == doctest::Approx(kTwoPi));
    CHECK(fourier_coefficient(one, 3, quad(3)).abs().to_double() == 0.0);

    const auto ma = SpectralDensity::trig_poly(TrigPolynomial::from_cos_sin({1.25, -1.0}));
    const Complex c1 = fourier_coefficient(ma, 1, quad(1));
    CHECK(c1.re.to_double() == doctest::Approx(-kPi));
    CHECK(c1.im.to_double() == 0.0);

    const double beta = 1.3;
    const auto arc = SpectralDensity::arc_indicator(gamma_arc(beta));
    for (int k = 1; k <= 5; ++k) {
        const Complex c = fourier_coefficient(arc, k, quad(5));
        CHECK(c.re.to_double() == doctest::Approx(2.0 * std::sin(k * beta / 2) / k).epsilon(1e-14));
        // Endpoints are doubles, so the arc is symmetric only to double rounding.
        CHECK(std::abs(c.im.to_double()) < 1e-15);
    }
}

TEST_CASE("quadrature coefficients against closed forms")
{
    // lambda^2 + 1: c_0 = 2pi + 2pi^3/3, c_k = 4 pi (-1)^k / k^2.
    const auto ep = SpectralDensity::even_poly({1.0, 1.0});
    const auto fs = fourier_coefficients(ep, 6, quad(6, 192));
    CHECK(fs.c[0].re.to_double() == doctest::Approx(kTwoPi + 2 * kPi * kPi * kPi / 3).epsilon(1e-15));
    for (int k = 1; k <= 6; ++k)
        CHECK(fs.c[static_cast<std::size_t>(k)].re.to_double() ==
              doctest::Approx(4 * kPi * (k % 2 ? -1.0 : 1.0) / (k * k)).epsilon(1e-14));

    // exp(b sin lambda): c_k = 2 pi I_k(b) (-i)^k.
    const double b = 0.8;
    const auto eo = SpectralDensity::exp_odd({b});
    const auto es = fourier_coefficients(eo, 4, quad(4, 192));
    for (int k = 0; k <= 4; ++k) {
        const std::complex<double> expect =
            kTwoPi * std::cyl_bessel_i(static_cast<double>(k), b) * std::pow(std::complex<double>(0, -1), k);
        const auto got = es.c[static_cast<std::size_t>(k)].to_std();
        CHECK(std::abs(got - expect) < 1e-13);
    }
}

TEST_CASE("Rosenblatt coefficients against a trapezoid oracle")
{
    const auto f = SpectralDensity::rosenblatt(1.0);
    const auto fs = fourier_coefficients(f, 4, quad(4));
    for (int k = 0; k <= 4; ++k) {
        const auto expect = trapezoid_coefficient([&](double x) { return evaluate(f, x); }, k);
        CHECK(std::abs(fs.c[static_cast<std::size_t>(k)].to_std() - expect) < 1e-12);
    }
}

TEST_CASE("geometric means")
{
    CHECK(geometric_mean(SpectralDensity::constant(3.5), quad(0)).to_double() == doctest::Approx(3.5));
    const double expect = std::exp(std::log(1 + kPi * kPi) - 2 + (2 / kPi) * std::atan(kPi));
    CHECK(expect == doctest::Approx(3.2864).epsilon(1e-4));
    const auto ep = SpectralDensity::even_poly({1.0, 1.0});
    CHECK(geometric_mean(ep, quad(0)).to_double() == doctest::Approx(expect).epsilon(1e-14));
    CHECK(geometric_mean(SpectralDensity::exp_odd({0.3, -0.2, 0.9}), quad(0)) == 1.0);
    CHECK(geometric_mean(SpectralDensity::rosenblatt(1.0), quad(0)).is_zero());
    const auto ma = SpectralDensity::trig_poly(TrigPolynomial::from_cos_sin({1.25, -1.0}));
    CHECK(geometric_mean(ma, quad(0)).to_double() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("Szego classification")
{
    CHECK(szego_class(SpectralDensity::constant(1.0)).regular());
    CHECK_FALSE(szego_class(SpectralDensity::rosenblatt(2.0)).regular());
    const auto half = SpectralDensity::arc_indicator(gamma_arc(kPi));
    CHECK_FALSE(szego_class(half * SpectralDensity::constant(3.0)).regular());
    CHECK(szego_class(SpectralDensity::trig_poly(TrigPolynomial::sin_squared(0.0))).regular());
    CHECK(szego_class(SpectralDensity::exp_odd({1.0})).regular());
    CHECK_THROWS_AS(szego_class(SpectralDensity::even_poly({0.0, 1.0})), Unclassifiable);
}

TEST_CASE("support arcs")
{
    const double a = kPi / 3;
    const ArcSet G = gamma_arc(2 * a, kPi / 2);
    CHECK(support_arcs(SpectralDensity::arc_indicator(G)).approx_equal(G));
    const auto prod = SpectralDensity::arc_indicator(G) * SpectralDensity::trig_poly(TrigPolynomial::sin_squared(0.0));
    CHECK(support_arcs(prod).approx_equal(G));
    CHECK(support_arcs(SpectralDensity::constant(1.0)).is_full_circle());
    CHECK(support_arcs(SpectralDensity::rosenblatt(1.0)).is_full_circle());
}

TEST_CASE("property: Hermitian symmetry and real coefficients of even densities")
{
    gen::Rng rng(11);
    for (int trial = 0; trial < 12; ++trial) {
        auto f = gen::regular_density(rng) * SpectralDensity::trig_poly(gen::nonnegative_trig(rng, 2));
        const auto q = quad(4, 128);
        for (int k = 1; k <= 4; ++k) {
            const Complex p = fourier_coefficient(f, k, q);
            const Complex m = fourier_coefficient(f, -k, q);
            CHECK(abs(p.re - m.re).to_double() < 1e-30);
            CHECK(abs(p.im + m.im).to_double() < 1e-30);
        }
        const auto e = gen::regular_density(rng);
        if (is_even(e)) CHECK(abs(fourier_coefficient(e, 3, q).im).to_double() < 1e-30);
    }
}

TEST_CASE("property: geometric mean is multiplicative and matches log quadrature")
{
    gen::Rng rng(12);
    for (int trial = 0; trial < 15; ++trial) {
        const auto f = gen::regular_density(rng);
        const auto g = gen::regular_density(rng);
        const double Gf = geometric_mean(f, quad(0)).to_double();
        const double Gg = geometric_mean(g, quad(0)).to_double();
        CHECK(geometric_mean(f * g, quad(0)).to_double() == doctest::Approx(Gf * Gg).epsilon(1e-12));
        CHECK(Gf == doctest::Approx(trapezoid_log_mean([&](double x) { return evaluate(f, x); })).epsilon(1e-9));
    }
}

TEST_CASE("property: densities are nonnegative on a dense grid")
{
    gen::Rng rng(13);
    std::vector<SpectralDensity> corpus = {SpectralDensity::rosenblatt(1.0),
                                           SpectralDensity::rosenblatt(2.0, RosenblattForm::CoshAbsSine),
                                           SpectralDensity::arc_indicator(gen::arcset(rng))};
    for (int j = 0; j < 8; ++j) corpus.push_back(gen::regular_density(rng));
    corpus.push_back(SpectralDensity::trig_poly(gen::nonnegative_trig(rng, 5)));
    for (const auto& f : corpus) {
        double lowest = 1.0;
        for (int j = 0; j <= 10000; ++j) lowest = std::min(lowest, evaluate(f, -kPi + kTwoPi * j / 10000));
        CHECK(lowest >= -1e-12);
    }
}

TEST_CASE("errors")
{
    CHECK_THROWS_AS(SpectralDensity::constant(-1.0), Error);
    CHECK_THROWS_AS(SpectralDensity::trig_poly(TrigPolynomial::from_cos_sin({0.5, 1.0})), NotNonnegative);
    CHECK_THROWS_AS(fourier_coefficient(SpectralDensity::constant(1.0), 5, quad(2)), InvalidArgument);
}

TEST_CASE("poles are rejected, cancelled poles are not")
{
    const auto pole = SpectralDensity::reciprocal_trig_poly(TrigPolynomial::sin_squared(0.4));
    CHECK_THROWS_AS(fourier_coefficient(pole, 0, quad(0)), QuadratureNonConvergent);
    const auto offset = SpectralDensity::reciprocal_trig_poly(TrigPolynomial::from_cos_sin({1.0, -1.0}));
    CHECK_THROWS_AS(fourier_coefficient(offset, 1, quad(1)), QuadratureNonConvergent);

    // Rosenblatt vanishes to infinite order at 0, sin^2 cancels its own reciprocal.
    const auto tamed = SpectralDensity::product(
        {SpectralDensity::rosenblatt(1.0), SpectralDensity::reciprocal_trig_poly(TrigPolynomial::sin_squared(0.0))});
    CHECK(std::isfinite(fourier_coefficient(tamed, 0, quad(0)).re.to_double()));
    const auto cancelled = SpectralDensity::product({SpectralDensity::trig_poly(TrigPolynomial::sin_squared(0.4)),
                                                     SpectralDensity::reciprocal_trig_poly(TrigPolynomial::sin_squared(0.4))});
    CHECK(fourier_coefficient(cancelled, 0, quad(0)).re.to_double() == doctest::Approx(kTwoPi));
}
