#include "predlab/toeplitz.hpp"

#include "predlab/error.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace predlab {

namespace {

std::string num(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string list(const std::vector<double>& v)
{
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + num(v[i]);
    return s + "]";
}

std::string describe_trig(const TrigPolynomial& t)
{
    std::string s;
    for (const auto& f : t.factors()) {
        if (!s.empty()) s += "*";
        if (const auto* e = std::get_if<TrigPolynomial::Explicit>(&f))
            s += "cs(" + list(e->cos) + "," + list(e->sin) + ")";
        else {
            const auto& sh = std::get<TrigPolynomial::ShiftedSine>(f);
            s += "sin2(" + num(sh.shift) + ")^" + std::to_string(sh.power);
        }
    }
    return s;
}

}  // namespace

std::string describe(const SpectralDensity& f)
{
    using D = SpectralDensity;
    std::string s;
    if (const auto* c = std::get_if<D::Constant>(&f.node())) {
        s = "const(" + num(c->c) + ")";
    } else if (const auto* r = std::get_if<D::Rosenblatt>(&f.node())) {
        s = "rosenblatt(" + num(r->a) + "," + to_string(r->form) + ")";
    } else if (const auto* a = std::get_if<D::ArcIndicator>(&f.node())) {
        s = "arcs(";
        if (a->arcs.is_full_circle()) s += "full";
        for (const auto& arc : a->arcs.is_full_circle() ? std::vector<Arc>{} : a->arcs.arcs())
            s += "[" + num(arc.center) + "," + num(arc.length) + "]";
        s += ")";
    } else if (const auto* t = std::get_if<D::TrigPoly>(&f.node())) {
        s = "trig(" + describe_trig(t->t) + ")";
    } else if (const auto* t = std::get_if<D::ReciprocalTrigPoly>(&f.node())) {
        s = "rtrig(" + describe_trig(t->t) + ")";
    } else if (const auto* p = std::get_if<D::EvenPoly>(&f.node())) {
        s = "evenpoly(" + list(p->coeffs) + ")";
    } else if (const auto* e = std::get_if<D::ExpOdd>(&f.node())) {
        s = "expodd(" + list(e->sine_coeffs) + ")";
    } else {
        s = "product(";
        const auto& fs = std::get<D::Product>(f.node()).factors;
        for (std::size_t i = 0; i < fs.size(); ++i) s += (i ? "," : "") + describe(fs[i]);
        s += ")";
    }
    return s;
}

std::string fnv1a_hex(const std::string& text)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Complex AutocovarianceSequence::at(long k) const
{
    const auto i = static_cast<std::size_t>(k < 0 ? -k : k);
    if (i >= coeffs.size()) throw InvalidArgument("autocovariance index " + std::to_string(k) + " out of range");
    return k < 0 ? coeffs[i].conj() : coeffs[i];
}

std::vector<double> PredictionErrorSeries::log_sigma2() const
{
    std::vector<double> out;
    out.reserve(sigma2.size());
    for (const auto& s : sigma2) out.push_back(s.log_double());
    return out;
}

AutocovarianceSequence autocovariances(const SpectralDensity& f, int N, const QuadratureConfig& quad)
{
    if (N < 0) throw InvalidArgument("N must be nonnegative");
    FourierSeries fs = fourier_coefficients(f, N, quad);
    if (!fs.c[0].re.is_finite()) throw QuadratureNonConvergent("c_0 is not finite; density not integrable");
    return {std::move(fs.c), quad.precision_bits, fnv1a_hex(describe(f)), std::move(fs.error_estimate)};
}

namespace {

PredictionErrorSeries run_levinson(const AutocovarianceSequence& acov, bool truncate)
{
    const Bits bits = acov.bits();
    PredictionErrorSeries out;
    out.precision_bits = acov.precision_bits;
    if (acov.size() == 0) return out;

    Real s2 = acov.coeffs[0].re;
    if (s2.sign() <= 0) {
        if (truncate) {
            out.lost_positivity_at = 0;
            return out;
        }
        throw LostPositivity(0);
    }
    out.sigma2.push_back(s2);

    std::vector<Complex> phi{Complex(1.0, 0.0, bits)};
    const std::size_t N = acov.size() - 1;
    for (std::size_t n = 0; n < N; ++n) {
        // rho = sum_j phi_j conj(c_{j+1}) / sigma_n^2
        Complex num(bits);
        for (std::size_t j = 0; j <= n; ++j) num += phi[j] * acov.coeffs[j + 1].conj();
        const Complex rho = num / s2;
        const Real shrink = 1.0 - rho.norm();
        if (shrink.sign() <= 0) {
            if (truncate) {
                out.lost_positivity_at = n + 1;
                return out;
            }
            throw LostPositivity(n + 1);
        }
        // new_j = phi_{j-1} - rho conj(phi_{n-j})
        std::vector<Complex> next(n + 2, Complex(bits));
        for (std::size_t j = 0; j <= n + 1; ++j) {
            if (j >= 1) next[j] = phi[j - 1];
            if (j <= n) next[j] -= rho * phi[n - j].conj();
        }
        phi = std::move(next);
        s2 *= shrink;
        out.sigma2.push_back(s2);
        out.reflection.push_back(rho);
    }
    return out;
}

}  // namespace

PredictionErrorSeries levinson(const AutocovarianceSequence& acov)
{
    return run_levinson(acov, false);
}

PredictionErrorSeries levinson_truncated(const AutocovarianceSequence& acov)
{
    return run_levinson(acov, true);
}

Real cholesky_sigma(const AutocovarianceSequence& acov, int n)
{
    if (n < 0 || static_cast<std::size_t>(n) + 1 > acov.size())
        throw InvalidArgument("order " + std::to_string(n) + " needs " + std::to_string(n + 1) + " autocovariances");
    const Bits bits = acov.bits();
    const auto m = static_cast<std::size_t>(n) + 1;
    // Hermitian Gram matrix A_{jk} = c_{k-j}; LDL^H with unit lower L.
    std::vector<std::vector<Complex>> L(m, std::vector<Complex>(m, Complex(bits)));
    std::vector<Real> D(m, Real(bits));
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = j; i < m; ++i) {
            // A_{ij} - sum_k L_{ik} D_k conj(L_{jk})
            Complex v = acov.at(static_cast<long>(j) - static_cast<long>(i));
            for (std::size_t k = 0; k < j; ++k) v -= L[i][k] * L[j][k].conj() * D[k];
            if (i == j) {
                D[j] = v.re;
                if (D[j].sign() <= 0) throw LostPositivity(j);
                L[j][j] = Complex(1.0, 0.0, bits);
            } else {
                L[i][j] = v / D[j];
            }
        }
    }
    return D[m - 1];
}

OptimalPolynomial optimal_polynomial(const AutocovarianceSequence& acov, int n)
{
    if (n < 0 || static_cast<std::size_t>(n) + 1 > acov.size())
        throw InvalidArgument("order " + std::to_string(n) + " needs " + std::to_string(n + 1) + " autocovariances");
    AutocovarianceSequence head{{acov.coeffs.begin(), acov.coeffs.begin() + n + 1}, acov.precision_bits, acov.source,
                                acov.error_estimate};
    const PredictionErrorSeries s = levinson(head);
    const Bits bits = acov.bits();
    std::vector<Complex> phi{Complex(1.0, 0.0, bits)};
    for (std::size_t k = 0; k < s.reflection.size(); ++k) {
        const Complex& rho = s.reflection[k];
        std::vector<Complex> next(k + 2, Complex(bits));
        for (std::size_t j = 0; j <= k + 1; ++j) {
            if (j >= 1) next[j] = phi[j - 1];
            if (j <= k) next[j] -= rho * phi[k - j].conj();
        }
        phi = std::move(next);
    }
    return {n, std::move(phi), false};
}

OptimalPolynomial OptimalPolynomial::reciprocal_form() const
{
    OptimalPolynomial r{degree, {}, !reciprocal};
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) r.coeffs.push_back(it->conj());
    return r;
}

std::vector<std::complex<double>> OptimalPolynomial::coefficients() const
{
    std::vector<std::complex<double>> out;
    for (const auto& c : coeffs) out.push_back(c.to_std());
    return out;
}

Real quadratic_form(const AutocovarianceSequence& acov, const std::vector<Complex>& p)
{
    Complex s(acov.bits());
    for (std::size_t j = 0; j < p.size(); ++j)
        for (std::size_t m = 0; m < p.size(); ++m)
            s += p[j] * p[m].conj() * acov.at(static_cast<long>(m) - static_cast<long>(j));
    return s.re;
}

Real quadrature_energy(const SpectralDensity& f, const std::vector<Complex>& p, const QuadratureConfig& quad)
{
    const Bits bits = quad.bits();
    const Integrand g = [&](const Real& x) {
        const Complex z = Complex::unit(x);
        Complex v = p.back();
        for (std::size_t j = p.size() - 1; j-- > 0;) {
            v *= z;
            v += p[j];
        }
        const Real fx = evaluate(f, x);
        return fx.is_zero() ? Real(bits) : v.norm() * fx;
    };
    std::vector<Interval> intervals;
    for (const auto& iv : support_arcs(f).intervals()) {
        if (iv.hi <= kPi) {
            intervals.push_back({iv.lo, iv.hi});
        } else {
            intervals.push_back({iv.lo, kPi});
            intervals.push_back({-kPi, iv.hi - kTwoPi});
        }
    }
    QuadratureConfig q = quad;
    q.min_panels = std::max(q.min_panels, 4 * static_cast<int>(p.size()));
    return integrate(g, intervals, q);
}

void attach_limit(PredictionErrorSeries& series, const Real& limit)
{
    series.delta.clear();
    for (const auto& s : series.sigma2) series.delta.push_back(s - limit);
}

mpfr_prec_t escalated_precision(int n, double tau)
{
    if (!(tau > 0.0) || tau >= 1.0) return 256;
    // The Gram matrix loses 2 n g bits, g the Green function of the gap at its midpoint
    // for a single arc of the same capacity, which bounds the symmetric multi-arc cases.
    const double g = std::log2((1.0 + std::sqrt(1.0 - tau * tau)) / tau);
    const double need = 2.0 * n * g + 128.0;
    return std::max<mpfr_prec_t>(256, static_cast<mpfr_prec_t>(std::ceil(need)));
}

}  // namespace predlab
