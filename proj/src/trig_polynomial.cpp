#include "predlab/trig_polynomial.hpp"

#include "predlab/arcset.hpp"
#include "predlab/error.hpp"

#include <algorithm>
#include <cmath>

namespace predlab {

namespace {

/// Two-sided coefficient array indexed -nu..nu stored at offset nu.
struct TwoSided {
    int nu = 0;
    std::vector<Complex> c;

    [[nodiscard]] std::vector<Complex> upper() const
    {
        return {c.begin() + nu, c.end()};
    }
};

TwoSided two_sided(const std::vector<Complex>& upper)
{
    TwoSided t;
    t.nu = static_cast<int>(upper.size()) - 1;
    t.c.reserve(2 * upper.size() - 1);
    for (int k = t.nu; k >= 1; --k) t.c.push_back(upper[static_cast<std::size_t>(k)].conj());
    for (const auto& x : upper) t.c.push_back(x);
    return t;
}

TwoSided convolve(const TwoSided& a, const TwoSided& b, Bits bits)
{
    TwoSided r;
    r.nu = a.nu + b.nu;
    r.c.assign(static_cast<std::size_t>(2 * r.nu + 1), Complex(bits));
    for (std::size_t i = 0; i < a.c.size(); ++i)
        for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
    return r;
}

std::vector<Complex> factor_coefficients(const TrigPolynomial::Factor& f, Bits bits)
{
    if (const auto* e = std::get_if<TrigPolynomial::Explicit>(&f)) {
        const std::size_t nu = std::max(e->cos.size(), e->sin.size());
        std::vector<Complex> c(std::max<std::size_t>(nu, 1), Complex(bits));
        if (!e->cos.empty()) c[0].re = Real(e->cos[0], bits);
        for (std::size_t k = 1; k < nu; ++k) {
            const double a = k < e->cos.size() ? e->cos[k] : 0.0;
            const double b = k < e->sin.size() ? e->sin[k] : 0.0;
            c[k] = Complex(Real(a, bits) / 2.0, -Real(b, bits) / 2.0);
        }
        return c;
    }
    const auto& s = std::get<TrigPolynomial::ShiftedSine>(f);
    // sin^2(x - s) = 1/2 - (e^{2i(x-s)} + e^{-2i(x-s)})/4
    std::vector<Complex> base(3, Complex(bits));
    base[0].re = Real(0.5, bits);
    base[2] = Complex::unit(Real(-2.0, bits) * Real(s.shift, bits)) * Real(-0.25, bits);
    TwoSided acc = two_sided({Complex(1.0, 0.0, bits)});
    const TwoSided one = two_sided(base);
    for (int p = 0; p < s.power; ++p) acc = convolve(acc, one, bits);
    return acc.upper();
}

}  // namespace

TrigPolynomial::TrigPolynomial(std::vector<Factor> factors) : factors_(std::move(factors))
{
    if (factors_.empty()) factors_.push_back(Explicit{{1.0}, {}});
    for (const auto& f : factors_) {
        if (const auto* s = std::get_if<ShiftedSine>(&f)) {
            if (s->power < 0) throw InvalidArgument("sine power must be nonnegative");
        } else {
            const auto& e = std::get<Explicit>(f);
            for (double v : e.cos)
                if (!std::isfinite(v)) throw InvalidArgument("non-finite trig coefficient");
            for (double v : e.sin)
                if (!std::isfinite(v)) throw InvalidArgument("non-finite trig coefficient");
        }
    }
}

TrigPolynomial TrigPolynomial::modulus_squared(const std::vector<std::complex<double>>& q)
{
    // |q|^2 = sum_k c_k e^{ik lambda} with c_k = sum_j q_{j+k} conj(q_j).
    const int d = static_cast<int>(q.size()) - 1;
    std::vector<double> a(static_cast<std::size_t>(std::max(d + 1, 1)), 0.0);
    std::vector<double> b(a.size(), 0.0);
    for (int k = 0; k <= d; ++k) {
        std::complex<double> ck = 0.0;
        for (int j = 0; j + k <= d; ++j) ck += q[static_cast<std::size_t>(j + k)] * std::conj(q[static_cast<std::size_t>(j)]);
        if (k == 0) {
            a[0] = ck.real();
        } else {
            a[static_cast<std::size_t>(k)] = 2.0 * ck.real();
            b[static_cast<std::size_t>(k)] = -2.0 * ck.imag();
        }
    }
    return from_cos_sin(std::move(a), std::move(b));
}

int TrigPolynomial::degree() const
{
    return static_cast<int>(coefficients().size()) - 1;
}

std::vector<Complex> TrigPolynomial::coefficients(Bits bits) const
{
    TwoSided acc = two_sided({Complex(1.0, 0.0, bits)});
    for (const auto& f : factors_) acc = convolve(acc, two_sided(factor_coefficients(f, bits)), bits);
    auto up = acc.upper();
    // Trim exactly-zero leading coefficients so degree() is the true degree.
    while (up.size() > 1 && up.back().re.is_zero() && up.back().im.is_zero()) up.pop_back();
    return up;
}

std::vector<std::complex<double>> TrigPolynomial::coefficients() const
{
    std::vector<std::complex<double>> out;
    for (const auto& c : coefficients(Bits{128})) out.push_back(c.to_std());
    return out;
}

bool TrigPolynomial::is_even() const
{
    for (const auto& c : coefficients(Bits{128}))
        if (!c.im.is_zero()) return false;
    return true;
}

bool TrigPolynomial::is_zero() const
{
    for (const auto& c : coefficients(Bits{128}))
        if (!c.re.is_zero() || !c.im.is_zero()) return false;
    return true;
}

double TrigPolynomial::evaluate(double lambda) const
{
    double v = 1.0;
    for (const auto& f : factors_) {
        if (const auto* s = std::get_if<ShiftedSine>(&f)) {
            const double x = std::sin(lambda - s->shift);
            v *= std::pow(x * x, s->power);
        } else {
            const auto& e = std::get<Explicit>(f);
            double t = e.cos.empty() ? 0.0 : e.cos[0];
            for (std::size_t k = 1; k < std::max(e.cos.size(), e.sin.size()); ++k) {
                if (k < e.cos.size()) t += e.cos[k] * std::cos(static_cast<double>(k) * lambda);
                if (k < e.sin.size()) t += e.sin[k] * std::sin(static_cast<double>(k) * lambda);
            }
            v *= t;
        }
    }
    return v;
}

std::vector<double> TrigPolynomial::symbolic_zeros() const
{
    std::vector<double> z;
    for (const auto& f : factors_) {
        if (const auto* s = std::get_if<ShiftedSine>(&f); s && s->power > 0) {
            z.push_back(normalize_angle(s->shift));
            z.push_back(normalize_angle(s->shift + kPi));
        }
    }
    return z;
}

Real TrigPolynomial::grid_minimum(int points, Bits bits) const
{
    const TrigEvaluator ev(*this, bits);
    const Real pi = Real::pi(bits);
    Real lo(bits);
    for (int j = 0; j < points; ++j) {
        const Real lambda = -pi + Real(2.0 * j, bits) * pi / Real(points, bits);
        Real v = ev(lambda);
        if (j == 0 || v < lo) lo = std::move(v);
    }
    return lo;
}

double TrigPolynomial::grid_sup(int points) const
{
    double hi = 0.0;
    for (int j = 0; j < points; ++j) hi = std::max(hi, std::abs(evaluate(-kPi + kTwoPi * j / points)));
    return hi;
}

TrigPolynomial operator*(const TrigPolynomial& a, const TrigPolynomial& b)
{
    std::vector<TrigPolynomial::Factor> f = a.factors_;
    f.insert(f.end(), b.factors_.begin(), b.factors_.end());
    return TrigPolynomial(std::move(f));
}

TrigEvaluator::TrigEvaluator(const TrigPolynomial& t, Bits bits) : c_(t.coefficients(bits)) {}

Real TrigEvaluator::operator()(const Real& lambda) const
{
    // t = c_0 + 2 Re sum_{k>=1} c_k e^{ik lambda}
    Real v = c_[0].re;
    if (c_.size() == 1) return v;
    const Complex z = Complex::unit(lambda);
    Complex p = z;
    Real s(lambda.bits());
    for (std::size_t k = 1; k < c_.size(); ++k) {
        s += c_[k].re * p.re - c_[k].im * p.im;
        if (k + 1 < c_.size()) p *= z;
    }
    return v + s * 2.0;
}

}  // namespace predlab
