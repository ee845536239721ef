#ifndef PREDLAB_DENSITY_HPP
#define PREDLAB_DENSITY_HPP

/** @file
 * Spectral densities on [-pi, pi] as closed-form expression trees.
 *
 * Normalization: the autocovariance of a density f is
 *     c_k = integral_{-pi}^{pi} e^{-ik lambda} f(lambda) d lambda
 * with no 1/(2 pi) factor, so that the Toeplitz minimum over monic degree-n
 * polynomials is the finite prediction error itself and its limit for a
 * regular density is 2 pi G(f).
 */

#include "predlab/arcset.hpp"
#include "predlab/complex.hpp"
#include "predlab/quadrature.hpp"
#include "predlab/trig_polynomial.hpp"

#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace predlab {

/**
 * Reading of the denominator of the Rosenblatt density
 *     f_a(lambda) = e^{(2 lambda - pi) phi(lambda)} / D(lambda),  phi = (a/2) cot lambda,
 * on [0, pi], extended evenly. `Cosh` takes D = cosh(pi phi); `CoshAbsSine`
 * additionally multiplies the density by |sin lambda|.
 */
enum class RosenblattForm { Cosh, CoshAbsSine };

const char* to_string(RosenblattForm form);
RosenblattForm rosenblatt_form_from_string(const std::string& s);

/// Essential bounds m <= f <= M on the support.
struct DensityBounds {
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();
};

class SpectralDensity {
public:
    struct Constant {
        double c;
    };
    struct Rosenblatt {
        double a;
        RosenblattForm form = RosenblattForm::Cosh;
    };
    struct ArcIndicator {
        ArcSet arcs;
    };
    struct TrigPoly {
        TrigPolynomial t;
    };
    struct ReciprocalTrigPoly {
        TrigPolynomial t;
    };
    /// sum_j coeffs[j] lambda^{2j}
    struct EvenPoly {
        std::vector<double> coeffs;
    };
    /// exp(sum_k b_k sin k lambda), b indexed from k = 1.
    struct ExpOdd {
        std::vector<double> sine_coeffs;
    };
    struct Product {
        std::vector<SpectralDensity> factors;
    };
    using Node = std::variant<Constant, Rosenblatt, ArcIndicator, TrigPoly, ReciprocalTrigPoly, EvenPoly, ExpOdd, Product>;

    static SpectralDensity constant(double c);
    static SpectralDensity rosenblatt(double a, RosenblattForm form = RosenblattForm::Cosh);
    static SpectralDensity arc_indicator(ArcSet arcs);
    static SpectralDensity trig_poly(TrigPolynomial t);
    static SpectralDensity reciprocal_trig_poly(TrigPolynomial t);
    static SpectralDensity even_poly(std::vector<double> coeffs);
    static SpectralDensity exp_odd(std::vector<double> sine_coeffs);
    static SpectralDensity product(std::vector<SpectralDensity> factors);

    [[nodiscard]] const Node& node() const { return node_; }
    [[nodiscard]] const std::optional<DensityBounds>& bounds() const { return bounds_; }
    SpectralDensity& with_bounds(DensityBounds b);

    /// Leaves of the expression tree with nested products flattened.
    [[nodiscard]] std::vector<SpectralDensity> leaves() const;

    friend SpectralDensity operator*(const SpectralDensity& a, const SpectralDensity& b);

private:
    explicit SpectralDensity(Node n) : node_(std::move(n)) {}

    Node node_;
    std::optional<DensityBounds> bounds_;
};

struct SzegoClass {
    enum class Kind { Regular, Singular };
    Kind kind;
    std::string reason;

    [[nodiscard]] bool regular() const { return kind == Kind::Regular; }
};

/// Fourier coefficients c_0..c_kmax with the quadrature error estimate.
struct FourierSeries {
    std::vector<Complex> c;
    Real error_estimate;
    std::size_t panels = 0;
    bool analytic = false;
};

double evaluate(const SpectralDensity& f, double lambda);
Real evaluate(const SpectralDensity& f, const Real& lambda);

/// True when f(-lambda) = f(lambda) is known symbolically.
bool is_even(const SpectralDensity& f);

FourierSeries fourier_coefficients(const SpectralDensity& f, int k_max, const QuadratureConfig& quad);
Complex fourier_coefficient(const SpectralDensity& f, int k, const QuadratureConfig& quad);

/// exp((1/2pi) integral ln f); exactly 0 for singular densities.
Real geometric_mean(const SpectralDensity& f, const QuadratureConfig& quad);

SzegoClass szego_class(const SpectralDensity& f);

/// Closure of {e^{i lambda} : f(lambda) > 0}, ignoring isolated zeros.
ArcSet support_arcs(const SpectralDensity& f);

/// Metadata naming any interpretive choices baked into the density (e.g. the Rosenblatt denominator).
std::vector<std::string> interpretation_tags(const SpectralDensity& f);

/// Ratio f_a(lambda) / (2 e^{-a pi/|lambda|} |sin lambda|) for comparing a Rosenblatt form with its small-lambda asymptote.
double rosenblatt_asymptote_ratio(double a, RosenblattForm form, double lambda, Bits bits = Bits{256});

}  // namespace predlab

#endif
