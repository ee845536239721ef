#ifndef PREDLAB_TRIG_POLYNOMIAL_HPP
#define PREDLAB_TRIG_POLYNOMIAL_HPP

#include "predlab/complex.hpp"

#include <complex>
#include <variant>
#include <vector>

namespace predlab {

/**
 * Real trigonometric polynomial
 *     t(lambda) = a_0 + sum_k (a_k cos k lambda + b_k sin k lambda)
 *               = sum_{|k| <= nu} c_k e^{i k lambda},  c_{-k} = conj(c_k),
 * held as a product of factors so that shifted sine powers keep exact zeros
 * at every working precision.
 */
class TrigPolynomial {
public:
    /// Explicit coefficients a_0..a_nu (cosine) and b_0..b_nu (sine; b_0 ignored).
    struct Explicit {
        std::vector<double> cos;
        std::vector<double> sin;
    };
    /// sin^{2 power}(lambda - shift).
    struct ShiftedSine {
        double shift = 0.0;
        int power = 1;
    };
    using Factor = std::variant<Explicit, ShiftedSine>;

    TrigPolynomial() : factors_{Explicit{{1.0}, {}}} {}
    explicit TrigPolynomial(std::vector<Factor> factors);

    static TrigPolynomial constant(double c) { return TrigPolynomial({Explicit{{c}, {}}}); }
    static TrigPolynomial from_cos_sin(std::vector<double> cos, std::vector<double> sin = {})
    {
        return TrigPolynomial({Explicit{std::move(cos), std::move(sin)}});
    }
    static TrigPolynomial sin_squared(double shift, int power = 1)
    {
        return TrigPolynomial({ShiftedSine{shift, power}});
    }
    /// |q(e^{i lambda})|^2 for an algebraic polynomial q with the given coefficients.
    static TrigPolynomial modulus_squared(const std::vector<std::complex<double>>& q);

    [[nodiscard]] const std::vector<Factor>& factors() const { return factors_; }
    [[nodiscard]] int degree() const;

    /// c_0..c_nu at the requested precision (negative indices by conjugation).
    [[nodiscard]] std::vector<Complex> coefficients(Bits bits) const;
    [[nodiscard]] std::vector<std::complex<double>> coefficients() const;

    /// True when every c_k is real, i.e. t is even.
    [[nodiscard]] bool is_even() const;
    [[nodiscard]] bool is_zero() const;

    [[nodiscard]] double evaluate(double lambda) const;

    /// Angles where a ShiftedSine factor vanishes (shift and shift + pi, normalized).
    [[nodiscard]] std::vector<double> symbolic_zeros() const;

    /// Minimum over an equispaced grid of `points` angles, evaluated at `bits`.
    [[nodiscard]] Real grid_minimum(int points, Bits bits) const;
    [[nodiscard]] double grid_sup(int points) const;

    friend TrigPolynomial operator*(const TrigPolynomial& a, const TrigPolynomial& b);

private:
    std::vector<Factor> factors_;
};

/// Evaluates a trigonometric polynomial at working precision from cached coefficients.
class TrigEvaluator {
public:
    TrigEvaluator(const TrigPolynomial& t, Bits bits);
    [[nodiscard]] Real operator()(const Real& lambda) const;
    [[nodiscard]] const std::vector<Complex>& coefficients() const { return c_; }

private:
    std::vector<Complex> c_;
};

}  // namespace predlab

#endif
