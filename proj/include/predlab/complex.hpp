#ifndef PREDLAB_COMPLEX_HPP
#define PREDLAB_COMPLEX_HPP

#include "predlab/real.hpp"

#include <complex>

namespace predlab {

/// Complex number over Real. std::complex is not specified for non-builtin types.
struct Complex {
    Real re;
    Real im;

    explicit Complex(Bits bits = Bits{64}) : re(bits), im(bits) {}
    Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
    Complex(double r, double i, Bits bits) : re(r, bits), im(i, bits) {}

    [[nodiscard]] Bits bits() const { return re.bits(); }

    [[nodiscard]] Complex conj() const { return {re, -im}; }
    [[nodiscard]] Real norm() const { return re * re + im * im; }  ///< |z|^2
    [[nodiscard]] Real abs() const { return hypot(re, im); }
    [[nodiscard]] std::complex<double> to_std() const { return {re.to_double(), im.to_double()}; }

    static Complex polar(const Real& r, const Real& theta) { return {r * cos(theta), r * sin(theta)}; }
    static Complex unit(const Real& theta)
    {
        Real c(theta.bits()), s(theta.bits());
        mpfr_sin_cos(s.raw(), c.raw(), theta.raw(), MPFR_RNDN);
        return {std::move(c), std::move(s)};
    }

    Complex& operator+=(const Complex& o) { re += o.re; im += o.im; return *this; }
    Complex& operator-=(const Complex& o) { re -= o.re; im -= o.im; return *this; }
    Complex& operator*=(const Complex& o)
    {
        Real r = re * o.re - im * o.im;
        im = re * o.im + im * o.re;
        re = std::move(r);
        return *this;
    }
    Complex& operator*=(const Real& s) { re *= s; im *= s; return *this; }
    Complex& operator/=(const Real& s) { re /= s; im /= s; return *this; }

    friend Complex operator+(Complex a, const Complex& b) { return a += b; }
    friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
    friend Complex operator*(Complex a, const Complex& b) { return a *= b; }
    friend Complex operator*(Complex a, const Real& s) { return a *= s; }
    friend Complex operator*(const Real& s, Complex a) { return a *= s; }
    friend Complex operator/(Complex a, const Real& s) { return a /= s; }
    friend Complex operator/(const Complex& a, const Complex& b)
    {
        const Real d = b.norm();
        return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
    }
    Complex operator-() const { return {-re, -im}; }
};

}  // namespace predlab

#endif
