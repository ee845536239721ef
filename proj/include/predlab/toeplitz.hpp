#ifndef PREDLAB_TOEPLITZ_HPP
#define PREDLAB_TOEPLITZ_HPP

/** @file
 * Finite prediction errors as minima of Toeplitz quadratic forms.
 *
 * With c_k = integral e^{-ik lambda} f, the Gram matrix of 1, z, ..., z^n in
 * L^2(f) is G_{jm} = c_{m-j}. The monic minimizer Phi_n obeys the Szego
 * recursion
 *     Phi_{n+1}(z) = z Phi_n(z) - rho_n Phi_n^*(z),   Phi_n^*(z) = z^n conj(Phi_n(1/conj z)),
 *     sigma_{n+1}^2 = sigma_n^2 (1 - |rho_n|^2),
 * where rho_n = <z Phi_n, 1> / sigma_n^2 is the reflection coefficient.
 */

#include "predlab/complex.hpp"
#include "predlab/density.hpp"
#include "predlab/quadrature.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace predlab {

struct AutocovarianceSequence {
    /// c_0..c_N
    std::vector<Complex> coeffs;
    mpfr_prec_t precision_bits = 256;
    /// Hex FNV-1a hash of the canonical density description.
    std::string source;
    /// Quadrature error estimate (0 for the analytic fast path).
    Real error_estimate;

    [[nodiscard]] std::size_t size() const { return coeffs.size(); }
    /// c_k for negative k as well.
    [[nodiscard]] Complex at(long k) const;
    [[nodiscard]] Bits bits() const { return Bits{precision_bits}; }
};

struct PredictionErrorSeries {
    /// sigma_0^2..sigma_N^2
    std::vector<Real> sigma2;
    /// rho_0..rho_{N-1}
    std::vector<Complex> reflection;
    mpfr_prec_t precision_bits = 256;
    /// sigma_n^2 - sigma_inf^2 once a limit has been attached.
    std::vector<Real> delta;
    /// Set when the recursion stopped early at this order because positivity was lost.
    std::optional<std::size_t> lost_positivity_at;

    [[nodiscard]] std::size_t size() const { return sigma2.size(); }
    [[nodiscard]] std::vector<double> log_sigma2() const;
};

struct OptimalPolynomial {
    int degree = 0;
    /// Coefficients of z^0..z^n.
    std::vector<Complex> coeffs;
    /// True for p_n^*(z) = z^n conj(p_n(1/conj z)), whose constant term is 1.
    bool reciprocal = false;

    [[nodiscard]] OptimalPolynomial reciprocal_form() const;
    [[nodiscard]] std::vector<std::complex<double>> coefficients() const;
};

/// Canonical one-line text of a density tree, stable across runs.
std::string describe(const SpectralDensity& f);
std::string fnv1a_hex(const std::string& text);

AutocovarianceSequence autocovariances(const SpectralDensity& f, int N, const QuadratureConfig& quad);

/// Throws LostPositivity(n) if sigma_n^2 would be nonpositive.
PredictionErrorSeries levinson(const AutocovarianceSequence& acov);

/// Like levinson, but stops at the first loss of positivity and records the order.
PredictionErrorSeries levinson_truncated(const AutocovarianceSequence& acov);

/// sigma_n^2 as the last LDL^H pivot of the (n+1) x (n+1) Gram matrix.
Real cholesky_sigma(const AutocovarianceSequence& acov, int n);

OptimalPolynomial optimal_polynomial(const AutocovarianceSequence& acov, int n);

/// sum_{j,m} p_j conj(p_m) c_{m-j}, the squared L^2(f) norm of p.
Real quadratic_form(const AutocovarianceSequence& acov, const std::vector<Complex>& p);

/// integral |p(e^{i lambda})|^2 f(lambda) d lambda by direct quadrature.
Real quadrature_energy(const SpectralDensity& f, const std::vector<Complex>& p, const QuadratureConfig& quad);

/// Fills series.delta with sigma_n^2 - limit.
void attach_limit(PredictionErrorSeries& series, const Real& limit);

/**
 * Working precision for a spectrum of transfinite diameter tau < 1:
 * max(256, 2 n log2((1 + sqrt(1 - tau^2)) / tau) + 128). The Toeplitz matrix
 * of order n loses about 2 n log2((1 + sqrt(1 - tau^2)) / tau) bits to
 * conditioning on a single arc; the extra 128 bits are kept for the result.
 */
mpfr_prec_t escalated_precision(int n, double tau);

}  // namespace predlab

#endif
