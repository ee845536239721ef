#ifndef PREDLAB_QUADRATURE_HPP
#define PREDLAB_QUADRATURE_HPP

/** @file
 * Composite Gauss-Legendre quadrature at arbitrary precision.
 *
 * A rule is built in two stages. Each interval is first cut into uniform
 * panels (enough to resolve e^{-ik lambda} up to the requested k), then every
 * panel is bisected until the Gauss-Legendre value on the panel agrees with
 * the sum over its halves. The resulting sampled rule can then be doubled
 * (every panel halved) to estimate the error of any functional built on it.
 */

#include "predlab/real.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace predlab {

struct QuadratureConfig {
    mpfr_prec_t precision_bits = 256;
    /// Largest |k| callers may request from fourier_coefficient.
    int k_max = 0;
    /// Gauss-Legendre nodes per panel.
    int order = 32;
    /// Minimum uniform panel count over a full period.
    int min_panels = 32;
    /// Upper bound on the total number of panels after refinement and doubling.
    int max_panels = 1 << 16;
    /// Maximum bisection depth below a uniform panel.
    int max_depth = 40;
    /// log2 of the relative tolerance; defaults to -(precision_bits - 32).
    std::optional<double> log2_tolerance;

    [[nodiscard]] Bits bits() const { return Bits{precision_bits}; }
    [[nodiscard]] double log2_tol() const
    {
        return log2_tolerance.value_or(-static_cast<double>(precision_bits - 32));
    }
    /// Relative tolerance as a Real.
    [[nodiscard]] Real tolerance() const;
};

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
class GaussLegendre {
public:
    GaussLegendre(int order, Bits bits);
    [[nodiscard]] const std::vector<Real>& nodes() const { return x_; }
    [[nodiscard]] const std::vector<Real>& weights() const { return w_; }
    [[nodiscard]] int order() const { return static_cast<int>(x_.size()); }

private:
    std::vector<Real> x_;
    std::vector<Real> w_;
};

/// x at the given precision, except that the double nearest +-pi maps to +-pi itself.
Real angle(double x, Bits bits);

struct Interval {
    double lo;
    double hi;
};

/// Integrand samples on a composite rule: weight[j] * value[j] sums to the integral.
struct SampledRule {
    std::vector<Interval> panels;
    std::vector<Real> node;
    std::vector<Real> weight;
    std::vector<Real> value;

    [[nodiscard]] Real integral(Bits bits) const;
    [[nodiscard]] std::size_t size() const { return node.size(); }
};

using Integrand = std::function<Real(const Real&)>;

/**
 * Adaptive composite rule for `f` over `intervals`. `panels_per_period` sets
 * the uniform panel density (panels per 2pi of angle) before refinement;
 * `abs_tol` bounds the bisection discrepancy summed over all panels.
 */
SampledRule adaptive_rule(const Integrand& f, const std::vector<Interval>& intervals, int panels_per_period,
                          const Real& abs_tol, const QuadratureConfig& cfg, const GaussLegendre& gl);

/// The rule obtained by halving every panel of `rule`.
SampledRule doubled_rule(const Integrand& f, const SampledRule& rule, const GaussLegendre& gl);

/// Integral of `f` over `intervals`, refined by panel doubling to the relative tolerance of `cfg`.
Real integrate(const Integrand& f, const std::vector<Interval>& intervals, const QuadratureConfig& cfg);

}  // namespace predlab

#endif
