#include "predlab/complex.hpp"
#include "predlab/real.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace predlab;

TEST_CASE("binary operations take the wider precision")
{
    const Real a(1.0, Bits{64});
    const Real b(3.0, Bits{300});
    CHECK((a / b).bits().value == 300);
    CHECK((b - a).bits().value == 300);

    Real c(1.0, Bits{64});
    c /= b;  // compound assignment keeps the left precision
    CHECK(c.bits().value == 64);
}

TEST_CASE("pi and elementary functions at 256 bits")
{
    const Bits bits{256};
    const Real pi = Real::pi(bits);
    // sin(pi) is zero up to the last bits of pi itself.
    CHECK(abs(sin(pi)) < epsilon(bits) * 4.0);
    CHECK(abs(exp(log(pi)) - pi) < epsilon(bits) * 16.0);
    CHECK(abs(atan(Real(1.0, bits)) * 4.0 - pi) < epsilon(bits) * 16.0);
    // 1/3 is not representable in binary; 3 * (1/3) - 1 is a few ulps at most.
    const Real third = Real(1.0, bits) / Real(3.0, bits);
    CHECK(abs(third * 3.0 - 1.0) <= epsilon(bits));
}

TEST_CASE("parse and print round trip")
{
    const Bits bits{200};
    const Real x = Real::parse("0.1234567890123456789012345678901234567890", bits);
    const Real y = Real::parse(x.to_string(x.round_trip_digits()), bits);
    CHECK(x == y);
    CHECK_THROWS_AS(Real::parse("1.2.3", bits), std::invalid_argument);
}

TEST_CASE("log_double survives exponents far outside double range")
{
    const Bits bits{128};
    const Real tiny = pow2(-5000, bits);
    CHECK(tiny.to_double() == 0.0);
    CHECK(tiny.log_double() == doctest::Approx(-5000.0 * std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("moved-from values stay destructible and assignable")
{
    Real a(2.0, Bits{128});
    Real b(std::move(a));
    a = Real(5.0, Bits{64});
    CHECK(a == 5.0);
    CHECK(b == 2.0);
}

TEST_CASE("complex arithmetic")
{
    const Bits bits{128};
    const Complex z(3.0, 4.0, bits);
    CHECK(z.abs() == 5.0);
    CHECK(z.norm() == 25.0);
    const Complex w = z / z;
    CHECK(abs(w.re - 1.0) < epsilon(bits) * 4.0);
    CHECK(abs(w.im) < epsilon(bits) * 4.0);
    const Complex u = Complex::unit(Real::pi(bits) / 2.0);
    CHECK(abs(u.re) < epsilon(bits) * 4.0);
    CHECK(abs(u.im - 1.0) < epsilon(bits) * 4.0);
}
