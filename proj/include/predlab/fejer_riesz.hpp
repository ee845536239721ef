#ifndef PREDLAB_FEJER_RIESZ_HPP
#define PREDLAB_FEJER_RIESZ_HPP

#include "predlab/complex.hpp"
#include "predlab/trig_polynomial.hpp"

#include <complex>
#include <vector>

namespace predlab {

/**
 * Outer factor s of a nonnegative trigonometric polynomial t of degree nu:
 * t(lambda) = |s(e^{i lambda})|^2, s has no zeros in the open unit disk and
 * s(0) > 0.
 */
struct SpectralFactor {
    /// s_0..s_nu, coefficients of z^0..z^nu.
    std::vector<Complex> coeffs;
    /// Roots of s, each of modulus >= 1 up to rounding.
    std::vector<std::complex<double>> roots;
    /// |s(0)|^2, the geometric mean of t.
    Real geometric_mean;
    /// sup over the check grid of |t - |s|^2| divided by sup t.
    double reconstruction_error = 0.0;

    [[nodiscard]] int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    [[nodiscard]] std::vector<std::complex<double>> coefficients() const;
};

/**
 * Factorizes t. Roots of z^nu t(z) come from double-precision companion
 * eigenvalues; each cluster of nearby roots is then polished by Newton's method
 * on the (m-1)-th derivative at `bits`.
 *
 * Throws NotNonnegative when t dips below -tol * sup t on the grid and
 * RootPairingFailed when the roots do not pair as r, 1/conj(r) or the
 * reconstruction misses by more than tol * sup t.
 */
SpectralFactor factorize(const TrigPolynomial& t, double tol = 1e-10, Bits bits = Bits{256});

/// |s(0)|^2 for the factor of t.
Real geometric_mean_trig(const TrigPolynomial& t, Bits bits = Bits{256});

}  // namespace predlab

#endif
