#ifndef PREDLAB_REAL_HPP
#define PREDLAB_REAL_HPP

/** @file
 * Value-semantic wrapper over an MPFR binary floating-point number.
 *
 * Every Real carries its own precision. Binary operations produce a result at
 * the larger of the operand precisions; compound assignments keep the
 * precision of the left-hand side. No global default precision is consulted,
 * so callers thread the working precision explicitly through a Bits value.
 */

#include <mpfr.h>

#include <algorithm>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

namespace predlab {

/// Binary precision (mantissa bits) of a Real.
struct Bits {
    mpfr_prec_t value = 256;
    constexpr explicit Bits(mpfr_prec_t v) : value(v) {}
    constexpr auto operator<=>(const Bits&) const = default;
};

class Real {
public:
    explicit Real(Bits bits = Bits{64})
    {
        mpfr_init2(v_, bits.value);
        mpfr_set_zero(v_, 1);
    }

    Real(double x, Bits bits)
    {
        mpfr_init2(v_, bits.value);
        mpfr_set_d(v_, x, MPFR_RNDN);
    }

    Real(long x, Bits bits)
    {
        mpfr_init2(v_, bits.value);
        mpfr_set_si(v_, x, MPFR_RNDN);
    }

    Real(int x, Bits bits) : Real(static_cast<long>(x), bits) {}

    /// Parses a decimal string; throws std::invalid_argument on malformed text.
    static Real parse(std::string_view text, Bits bits);

    static Real pi(Bits bits)
    {
        Real r(bits);
        mpfr_const_pi(r.v_, MPFR_RNDN);
        return r;
    }

    Real(const Real& o)
    {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }

    Real(Real&& o) noexcept
    {
        // Steal the limbs; leave o as a valid 2-bit zero so its destructor is safe.
        *v_ = *o.v_;
        mpfr_init2(o.v_, MPFR_PREC_MIN);
    }

    Real& operator=(const Real& o)
    {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }

    Real& operator=(Real&& o) noexcept
    {
        if (this != &o) std::swap(*v_, *o.v_);
        return *this;
    }

    ~Real() { mpfr_clear(v_); }

    [[nodiscard]] Bits bits() const { return Bits{mpfr_get_prec(v_)}; }
    [[nodiscard]] double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    [[nodiscard]] bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    [[nodiscard]] bool is_finite() const { return mpfr_number_p(v_) != 0; }
    [[nodiscard]] int sign() const { return mpfr_sgn(v_); }

    /// Natural log as a double, valid far outside the double exponent range.
    [[nodiscard]] double log_double() const;

    /// Decimal text with the given number of significant digits.
    [[nodiscard]] std::string to_string(int digits) const;

    /// Significant decimal digits sufficient to round-trip this precision.
    [[nodiscard]] int round_trip_digits() const
    {
        return static_cast<int>(static_cast<double>(mpfr_get_prec(v_)) * 0.30102999566398120) + 2;
    }

    mpfr_ptr raw() { return v_; }
    [[nodiscard]] mpfr_srcptr raw() const { return v_; }

    Real& operator+=(const Real& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator-=(const Real& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator*=(const Real& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator/=(const Real& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator+=(double o) { mpfr_add_d(v_, v_, o, MPFR_RNDN); return *this; }
    Real& operator-=(double o) { mpfr_sub_d(v_, v_, o, MPFR_RNDN); return *this; }
    Real& operator*=(double o) { mpfr_mul_d(v_, v_, o, MPFR_RNDN); return *this; }
    Real& operator/=(double o) { mpfr_div_d(v_, v_, o, MPFR_RNDN); return *this; }

    Real operator-() const
    {
        Real r(bits());
        mpfr_neg(r.v_, v_, MPFR_RNDN);
        return r;
    }

    friend Real operator+(const Real& a, const Real& b) { Real r(wider(a, b)); mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    friend Real operator-(const Real& a, const Real& b) { Real r(wider(a, b)); mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    friend Real operator*(const Real& a, const Real& b) { Real r(wider(a, b)); mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    friend Real operator/(const Real& a, const Real& b) { Real r(wider(a, b)); mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }

    friend Real operator+(const Real& a, double b) { Real r(a.bits()); mpfr_add_d(r.v_, a.v_, b, MPFR_RNDN); return r; }
    friend Real operator-(const Real& a, double b) { Real r(a.bits()); mpfr_sub_d(r.v_, a.v_, b, MPFR_RNDN); return r; }
    friend Real operator*(const Real& a, double b) { Real r(a.bits()); mpfr_mul_d(r.v_, a.v_, b, MPFR_RNDN); return r; }
    friend Real operator/(const Real& a, double b) { Real r(a.bits()); mpfr_div_d(r.v_, a.v_, b, MPFR_RNDN); return r; }
    friend Real operator+(double a, const Real& b) { return b + a; }
    friend Real operator-(double a, const Real& b) { Real r(b.bits()); mpfr_d_sub(r.v_, a, b.v_, MPFR_RNDN); return r; }
    friend Real operator*(double a, const Real& b) { return b * a; }
    friend Real operator/(double a, const Real& b) { Real r(b.bits()); mpfr_d_div(r.v_, a, b.v_, MPFR_RNDN); return r; }

    friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
    friend std::partial_ordering operator<=>(const Real& a, const Real& b)
    {
        if (mpfr_unordered_p(a.v_, b.v_)) return std::partial_ordering::unordered;
        const int c = mpfr_cmp(a.v_, b.v_);
        return c < 0 ? std::partial_ordering::less
                     : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
    }
    friend bool operator==(const Real& a, double b) { return mpfr_cmp_d(a.v_, b) == 0; }
    friend std::partial_ordering operator<=>(const Real& a, double b)
    {
        const int c = mpfr_cmp_d(a.v_, b);
        return c < 0 ? std::partial_ordering::less
                     : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
    }

private:
    static Bits wider(const Real& a, const Real& b)
    {
        return Bits{std::max(mpfr_get_prec(a.v_), mpfr_get_prec(b.v_))};
    }

    mpfr_t v_;
};

namespace detail {
template <int (*F)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t)>
inline Real unary(const Real& x)
{
    Real r(x.bits());
    F(r.raw(), x.raw(), MPFR_RNDN);
    return r;
}
}  // namespace detail

inline Real abs(const Real& x) { return detail::unary<mpfr_abs>(x); }
inline Real sqrt(const Real& x) { return detail::unary<mpfr_sqrt>(x); }
inline Real exp(const Real& x) { return detail::unary<mpfr_exp>(x); }
inline Real log(const Real& x) { return detail::unary<mpfr_log>(x); }
inline Real sin(const Real& x) { return detail::unary<mpfr_sin>(x); }
inline Real cos(const Real& x) { return detail::unary<mpfr_cos>(x); }
inline Real tan(const Real& x) { return detail::unary<mpfr_tan>(x); }
inline Real cot(const Real& x) { return detail::unary<mpfr_cot>(x); }
inline Real cosh(const Real& x) { return detail::unary<mpfr_cosh>(x); }
inline Real sinh(const Real& x) { return detail::unary<mpfr_sinh>(x); }
inline Real atan(const Real& x) { return detail::unary<mpfr_atan>(x); }
inline Real atan2(const Real& y, const Real& x)
{
    Real r(Bits{std::max(y.bits().value, x.bits().value)});
    mpfr_atan2(r.raw(), y.raw(), x.raw(), MPFR_RNDN);
    return r;
}
inline Real pow(const Real& x, const Real& y)
{
    Real r(Bits{std::max(x.bits().value, y.bits().value)});
    mpfr_pow(r.raw(), x.raw(), y.raw(), MPFR_RNDN);
    return r;
}
inline Real pow(const Real& x, long n)
{
    Real r(x.bits());
    mpfr_pow_si(r.raw(), x.raw(), n, MPFR_RNDN);
    return r;
}
inline Real hypot(const Real& x, const Real& y)
{
    Real r(Bits{std::max(x.bits().value, y.bits().value)});
    mpfr_hypot(r.raw(), x.raw(), y.raw(), MPFR_RNDN);
    return r;
}
/// a*b + c in one rounding, at the precision of c.
inline void fma_into(Real& acc, const Real& a, const Real& b)
{
    mpfr_fma(acc.raw(), a.raw(), b.raw(), acc.raw(), MPFR_RNDN);
}
inline Real max(const Real& a, const Real& b) { return (a < b) ? b : a; }
inline Real min(const Real& a, const Real& b) { return (b < a) ? b : a; }

/// Unit roundoff 2^(1-bits) as a Real.
inline Real epsilon(Bits bits)
{
    Real r(1.0, bits);
    mpfr_mul_2si(r.raw(), r.raw(), 1 - static_cast<long>(bits.value), MPFR_RNDN);
    return r;
}

/// 2^e at the given precision.
inline Real pow2(long e, Bits bits)
{
    Real r(1.0, bits);
    mpfr_mul_2si(r.raw(), r.raw(), e, MPFR_RNDN);
    return r;
}

}  // namespace predlab

#endif
