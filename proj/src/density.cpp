#include "predlab/density.hpp"

#include "predlab/error.hpp"
#include "predlab/fejer_riesz.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

namespace predlab {

namespace {

/// Below this distance from 0 or pi the Rosenblatt density is returned as 0.
constexpr double kRosenblattCutoff = 0x1p-20;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double rosenblatt_double(double a, RosenblattForm form, double lambda)
{
    const double x = std::abs(lambda);
    if (x < kRosenblattCutoff || kPi - x < kRosenblattCutoff) return 0.0;
    // log f = (2x - pi) phi - log cosh(pi phi), with log cosh(y) = |y| + log1p(e^{-2|y|}) - log 2
    const double phi = 0.5 * a / std::tan(x);
    const double y = std::abs(kPi * phi);
    const double lf = (2.0 * x - kPi) * phi - y - std::log1p(std::exp(-2.0 * y)) + std::log(2.0);
    double v = std::exp(lf);
    if (form == RosenblattForm::CoshAbsSine) v *= std::sin(x);
    return v;
}

Real rosenblatt_real(double a, RosenblattForm form, const Real& lambda)
{
    const Bits bits = lambda.bits();
    const Real x = abs(lambda);
    const Real pi = Real::pi(bits);
    if (x < kRosenblattCutoff || pi - x < kRosenblattCutoff) return Real(bits);
    const Real phi = cot(x) * (0.5 * a);
    const Real y = abs(pi * phi);
    Real e = exp(y * -2.0);
    mpfr_log1p(e.raw(), e.raw(), MPFR_RNDN);
    Real lf = (x * 2.0 - pi) * phi - y - e;
    Real ln2(bits);
    mpfr_const_log2(ln2.raw(), MPFR_RNDN);
    lf += ln2;
    Real v = exp(lf);
    if (form == RosenblattForm::CoshAbsSine) v *= sin(x);
    return v;
}

double even_poly_double(const std::vector<double>& c, double lambda)
{
    const double u = lambda * lambda;
    double v = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * u + *it;
    return v;
}

double exp_odd_double(const std::vector<double>& b, double lambda)
{
    double s = 0.0;
    for (std::size_t k = 0; k < b.size(); ++k) s += b[k] * std::sin(static_cast<double>(k + 1) * lambda);
    return std::exp(s);
}

/// Real-valued evaluator with per-leaf caches, built once per precision.
class Evaluator {
public:
    Evaluator(const SpectralDensity& f, Bits bits) : bits_(bits)
    {
        for (const auto& leaf : f.leaves()) leaves_.push_back(compile(leaf));
    }

    Real operator()(const Real& lambda) const
    {
        Real v(1.0, bits_);
        for (const auto& leaf : leaves_) {
            Real x = leaf(lambda);
            if (x.is_zero()) return Real(bits_);
            v *= x;
        }
        return v;
    }

private:
    using LeafFn = std::function<Real(const Real&)>;

    [[nodiscard]] LeafFn trig(const TrigPolynomial& t) const
    {
        // Factor-wise, so that shifted sine powers vanish exactly at their zeros.
        std::vector<LeafFn> parts;
        for (const auto& factor : t.factors()) {
            if (const auto* s = std::get_if<TrigPolynomial::ShiftedSine>(&factor)) {
                const double shift = s->shift;
                const long p = s->power;
                const Bits b = bits_;
                parts.emplace_back([shift, p, b](const Real& x) {
                    const Real v = sin(x - Real(shift, b));
                    return pow(v * v, p);
                });
            } else {
                auto ev = std::make_shared<TrigEvaluator>(TrigPolynomial({factor}), bits_);
                parts.emplace_back([ev](const Real& x) { return (*ev)(x); });
            }
        }
        const Bits b = bits_;
        return [parts, b](const Real& x) {
            Real v(1.0, b);
            for (const auto& p : parts) v *= p(x);
            return v;
        };
    }

    [[nodiscard]] LeafFn compile(const SpectralDensity& leaf) const
    {
        const Bits b = bits_;
        return std::visit(
            overloaded{
                [b](const SpectralDensity::Constant& c) -> LeafFn {
                    return [v = Real(c.c, b)](const Real&) { return v; };
                },
                [](const SpectralDensity::Rosenblatt& r) -> LeafFn {
                    return [r](const Real& x) { return rosenblatt_real(r.a, r.form, x); };
                },
                [b](const SpectralDensity::ArcIndicator& a) -> LeafFn {
                    return [arcs = a.arcs, b](const Real& x) {
                        return Real(arcs.contains(x.to_double(), kArcTolerance) ? 1.0 : 0.0, b);
                    };
                },
                [this](const SpectralDensity::TrigPoly& t) -> LeafFn {
                    auto fn = trig(t.t);
                    return [fn](const Real& x) {
                        Real v = fn(x);
                        if (v.sign() < 0) v = Real(v.bits());
                        return v;
                    };
                },
                [this](const SpectralDensity::ReciprocalTrigPoly& t) -> LeafFn {
                    auto fn = trig(t.t);
                    return [fn](const Real& x) { return 1.0 / fn(x); };
                },
                [b](const SpectralDensity::EvenPoly& p) -> LeafFn {
                    return [c = p.coeffs, b](const Real& x) {
                        const Real u = x * x;
                        Real v(b);
                        for (auto it = c.rbegin(); it != c.rend(); ++it) {
                            v *= u;
                            v += *it;
                        }
                        return v;
                    };
                },
                [b](const SpectralDensity::ExpOdd& e) -> LeafFn {
                    return [s = e.sine_coeffs, b](const Real& x) {
                        Real acc(b);
                        for (std::size_t k = 0; k < s.size(); ++k)
                            if (s[k] != 0.0) acc += sin(x * static_cast<double>(k + 1)) * s[k];
                        return exp(acc);
                    };
                },
                [](const SpectralDensity::Product&) -> LeafFn {
                    throw InvalidArgument("product node among flattened leaves");
                },
            },
            leaf.node());
    }

    Bits bits_;
    std::vector<LeafFn> leaves_;
};

bool has_real_root(const std::vector<double>& c)
{
    // Sign change or touching zero of p(lambda) on a fine grid of [0, pi].
    constexpr int kGrid = 8192;
    double scale = 0.0;
    for (double x : c) scale = std::max(scale, std::abs(x));
    double prev = even_poly_double(c, 0.0);
    if (prev <= 1e-14 * scale) return true;
    for (int j = 1; j <= kGrid; ++j) {
        const double v = even_poly_double(c, kPi * j / kGrid);
        if (v <= 1e-14 * scale || (v > 0) != (prev > 0)) return true;
        prev = v;
    }
    return false;
}

void check_nonnegative(const TrigPolynomial& t)
{
    const Real lo = t.grid_minimum(4096, Bits{160});
    if (lo < -1e-30)
        throw NotNonnegative("trigonometric polynomial reaches " + lo.to_string(6) + " on the check grid");
}

/// Support intervals as disjoint sub-intervals of [-pi, pi] (wrapping arcs split at pi).
std::vector<Interval> support_intervals(const ArcSet& support)
{
    std::vector<Interval> out;
    for (const auto& iv : support.intervals()) {
        if (iv.length() <= 0.0) continue;
        if (iv.hi <= kPi) {
            out.push_back({iv.lo, iv.hi});
        } else {
            out.push_back({iv.lo, kPi});
            out.push_back({-kPi, iv.hi - kTwoPi});
        }
    }
    std::sort(out.begin(), out.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    return out;
}

std::vector<Interval> split_at(const std::vector<Interval>& in, std::vector<double> points)
{
    std::sort(points.begin(), points.end());
    std::vector<Interval> out;
    for (const auto& iv : in) {
        double lo = iv.lo;
        for (double p : points) {
            if (p > lo + 1e-14 && p < iv.hi - 1e-14) {
                out.push_back({lo, p});
                lo = p;
            }
        }
        out.push_back({lo, iv.hi});
    }
    return out;
}

std::vector<double> breakpoints(const SpectralDensity& f)
{
    std::vector<double> pts{0.0};
    for (const auto& leaf : f.leaves()) {
        const TrigPolynomial* t = nullptr;
        if (const auto* p = std::get_if<SpectralDensity::TrigPoly>(&leaf.node())) t = &p->t;
        if (const auto* p = std::get_if<SpectralDensity::ReciprocalTrigPoly>(&leaf.node())) t = &p->t;
        if (t == nullptr) continue;
        for (double z : t->symbolic_zeros()) pts.push_back(z);
    }
    return pts;
}

/// Sum over the rule of w v e^{-ik lambda}, or of 2 w v cos(k lambda) when `even`.
std::vector<Complex> accumulate(const SampledRule& rule, int k_max, bool even, Bits bits)
{
    const auto K = static_cast<std::size_t>(k_max) + 1;
    std::vector<Complex> acc(K, Complex(bits));
    Real wv(bits), c(bits), s(bits), t0(bits), t1(bits), t2(bits), pr(bits), pi_(bits), tmp(bits);
    for (std::size_t j = 0; j < rule.size(); ++j) {
        mpfr_mul(wv.raw(), rule.weight[j].raw(), rule.value[j].raw(), MPFR_RNDN);
        if (wv.is_zero()) continue;
        if (even) {
            mpfr_mul_2ui(wv.raw(), wv.raw(), 1, MPFR_RNDN);
            mpfr_cos(c.raw(), rule.node[j].raw(), MPFR_RNDN);
            // Chebyshev recurrence T_{k+1} = 2 c T_k - T_{k-1}
            mpfr_set_ui(t0.raw(), 1, MPFR_RNDN);
            mpfr_set(t1.raw(), c.raw(), MPFR_RNDN);
            mpfr_add(acc[0].re.raw(), acc[0].re.raw(), wv.raw(), MPFR_RNDN);
            for (std::size_t k = 1; k < K; ++k) {
                mpfr_fma(acc[k].re.raw(), wv.raw(), t1.raw(), acc[k].re.raw(), MPFR_RNDN);
                mpfr_mul(t2.raw(), c.raw(), t1.raw(), MPFR_RNDN);
                mpfr_mul_2ui(t2.raw(), t2.raw(), 1, MPFR_RNDN);
                mpfr_sub(t2.raw(), t2.raw(), t0.raw(), MPFR_RNDN);
                mpfr_swap(t0.raw(), t1.raw());
                mpfr_swap(t1.raw(), t2.raw());
            }
        } else {
            mpfr_sin_cos(s.raw(), c.raw(), rule.node[j].raw(), MPFR_RNDN);
            mpfr_neg(s.raw(), s.raw(), MPFR_RNDN);  // e^{-i lambda} = c + i s
            mpfr_set(pr.raw(), wv.raw(), MPFR_RNDN);
            mpfr_set_zero(pi_.raw(), 1);
            for (std::size_t k = 0; k < K; ++k) {
                mpfr_add(acc[k].re.raw(), acc[k].re.raw(), pr.raw(), MPFR_RNDN);
                mpfr_add(acc[k].im.raw(), acc[k].im.raw(), pi_.raw(), MPFR_RNDN);
                if (k + 1 == K) break;
                // (pr + i pi_) *= (c + i s)
                mpfr_mul(tmp.raw(), pr.raw(), s.raw(), MPFR_RNDN);
                mpfr_mul(pr.raw(), pr.raw(), c.raw(), MPFR_RNDN);
                mpfr_fms(pr.raw(), pi_.raw(), s.raw(), pr.raw(), MPFR_RNDN);
                mpfr_neg(pr.raw(), pr.raw(), MPFR_RNDN);
                mpfr_fma(pi_.raw(), pi_.raw(), c.raw(), tmp.raw(), MPFR_RNDN);
            }
        }
    }
    return acc;
}

/// Fast path: f = const * t(lambda) * 1_E with E a finite union of arcs.
std::optional<FourierSeries> analytic_series(const SpectralDensity& f, int k_max, Bits bits)
{
    Real scale(1.0, bits);
    TrigPolynomial t;
    ArcSet support = ArcSet::full_circle();
    for (const auto& leaf : f.leaves()) {
        if (const auto* c = std::get_if<SpectralDensity::Constant>(&leaf.node())) {
            scale *= c->c;
        } else if (const auto* p = std::get_if<SpectralDensity::TrigPoly>(&leaf.node())) {
            t = t * p->t;
        } else if (const auto* a = std::get_if<SpectralDensity::ArcIndicator>(&leaf.node())) {
            support = support.intersect(a->arcs);
        } else {
            return std::nullopt;
        }
    }
    const std::vector<Complex> tc = t.coefficients(bits);
    const int nu = static_cast<int>(tc.size()) - 1;
    auto t_at = [&](int j) { return j >= 0 ? tc[static_cast<std::size_t>(j)] : tc[static_cast<std::size_t>(-j)].conj(); };

    // A_m = integral over the support of e^{-im lambda}
    auto intervals = support_intervals(support);
    const int m_max = k_max + nu;
    std::vector<Complex> A(static_cast<std::size_t>(2 * m_max + 1), Complex(bits));
    auto A_at = [&](int m) -> Complex& { return A[static_cast<std::size_t>(m + m_max)]; };
    if (support.is_full_circle()) {
        A_at(0).re = Real::pi(bits) * 2.0;
        intervals.clear();
    }
    for (const auto& iv : intervals) {
        const Real lo = angle(iv.lo, bits), hi = angle(iv.hi, bits);
        A_at(0).re += hi - lo;
        for (int m = 1; m <= m_max; ++m) {
            // i (e^{-im hi} - e^{-im lo}) / m, and A_{-m} = conj(A_m)
            const Complex d = Complex::unit(hi * static_cast<double>(-m)) - Complex::unit(lo * static_cast<double>(-m));
            const Complex v(-d.im / static_cast<double>(m), d.re / static_cast<double>(m));
            A_at(m) += v;
            A_at(-m) += v.conj();
        }
    }
    FourierSeries out{{}, Real(bits), 0, true};
    for (int k = 0; k <= k_max; ++k) {
        Complex ck(bits);
        for (int j = -nu; j <= nu; ++j) ck += t_at(j) * A_at(k - j);
        out.c.push_back(ck * scale);
    }
    return out;
}

}  // namespace

const char* to_string(RosenblattForm form)
{
    return form == RosenblattForm::Cosh ? "cosh" : "cosh_abs_sin";
}

RosenblattForm rosenblatt_form_from_string(const std::string& s)
{
    if (s == "cosh") return RosenblattForm::Cosh;
    if (s == "cosh_abs_sin") return RosenblattForm::CoshAbsSine;
    throw InvalidArgument("unknown Rosenblatt form '" + s + "'");
}

SpectralDensity SpectralDensity::constant(double c)
{
    if (!(c > 0.0) || !std::isfinite(c)) throw InvalidArgument("constant density must be positive and finite");
    return SpectralDensity(Constant{c});
}

SpectralDensity SpectralDensity::rosenblatt(double a, RosenblattForm form)
{
    if (!(a > 0.0) || !std::isfinite(a)) throw InvalidArgument("Rosenblatt parameter a must be positive");
    return SpectralDensity(Rosenblatt{a, form});
}

SpectralDensity SpectralDensity::arc_indicator(ArcSet arcs)
{
    return SpectralDensity(ArcIndicator{std::move(arcs)});
}

SpectralDensity SpectralDensity::trig_poly(TrigPolynomial t)
{
    check_nonnegative(t);
    return SpectralDensity(TrigPoly{std::move(t)});
}

SpectralDensity SpectralDensity::reciprocal_trig_poly(TrigPolynomial t)
{
    check_nonnegative(t);
    if (t.is_zero()) throw InvalidArgument("reciprocal of the zero polynomial");
    return SpectralDensity(ReciprocalTrigPoly{std::move(t)});
}

SpectralDensity SpectralDensity::even_poly(std::vector<double> coeffs)
{
    if (coeffs.empty()) throw InvalidArgument("even polynomial needs at least one coefficient");
    for (double c : coeffs)
        if (!std::isfinite(c)) throw InvalidArgument("non-finite polynomial coefficient");
    for (int j = 0; j <= 4096; ++j)
        if (even_poly_double(coeffs, kPi * j / 4096) < -1e-30)
            throw NotNonnegative("even polynomial is negative on [-pi, pi]");
    return SpectralDensity(EvenPoly{std::move(coeffs)});
}

SpectralDensity SpectralDensity::exp_odd(std::vector<double> sine_coeffs)
{
    for (double c : sine_coeffs)
        if (!std::isfinite(c)) throw InvalidArgument("non-finite sine coefficient");
    return SpectralDensity(ExpOdd{std::move(sine_coeffs)});
}

SpectralDensity SpectralDensity::product(std::vector<SpectralDensity> factors)
{
    if (factors.empty()) throw InvalidArgument("empty product");
    return SpectralDensity(Product{std::move(factors)});
}

SpectralDensity& SpectralDensity::with_bounds(DensityBounds b)
{
    if (!(b.lower >= 0.0) || !(b.upper >= b.lower)) throw InvalidArgument("bounds must satisfy 0 <= m <= M");
    bounds_ = b;
    return *this;
}

std::vector<SpectralDensity> SpectralDensity::leaves() const
{
    std::vector<SpectralDensity> out;
    if (const auto* p = std::get_if<Product>(&node_)) {
        for (const auto& f : p->factors) {
            auto sub = f.leaves();
            out.insert(out.end(), sub.begin(), sub.end());
        }
    } else {
        out.push_back(*this);
    }
    return out;
}

SpectralDensity operator*(const SpectralDensity& a, const SpectralDensity& b)
{
    return SpectralDensity::product({a, b});
}

double evaluate(const SpectralDensity& f, double lambda)
{
    return std::visit(
        overloaded{
            [](const SpectralDensity::Constant& c) { return c.c; },
            [lambda](const SpectralDensity::Rosenblatt& r) { return rosenblatt_double(r.a, r.form, lambda); },
            [lambda](const SpectralDensity::ArcIndicator& a) {
                return a.arcs.contains(lambda, kArcTolerance) ? 1.0 : 0.0;
            },
            [lambda](const SpectralDensity::TrigPoly& t) { return std::max(0.0, t.t.evaluate(lambda)); },
            [lambda](const SpectralDensity::ReciprocalTrigPoly& t) { return 1.0 / t.t.evaluate(lambda); },
            [lambda](const SpectralDensity::EvenPoly& p) { return even_poly_double(p.coeffs, lambda); },
            [lambda](const SpectralDensity::ExpOdd& e) { return exp_odd_double(e.sine_coeffs, lambda); },
            [lambda](const SpectralDensity::Product& p) {
                double v = 1.0;
                for (const auto& g : p.factors) {
                    const double x = evaluate(g, lambda);
                    if (x == 0.0) return 0.0;
                    v *= x;
                }
                return v;
            },
        },
        f.node());
}

Real evaluate(const SpectralDensity& f, const Real& lambda)
{
    return Evaluator(f, lambda.bits())(lambda);
}

bool is_even(const SpectralDensity& f)
{
    return std::visit(
        overloaded{
            [](const SpectralDensity::Constant&) { return true; },
            [](const SpectralDensity::Rosenblatt&) { return true; },
            [](const SpectralDensity::ArcIndicator& a) { return a.arcs.approx_equal(a.arcs.conjugate()); },
            [](const SpectralDensity::TrigPoly& t) { return t.t.is_even(); },
            [](const SpectralDensity::ReciprocalTrigPoly& t) { return t.t.is_even(); },
            [](const SpectralDensity::EvenPoly&) { return true; },
            [](const SpectralDensity::ExpOdd& e) {
                return std::all_of(e.sine_coeffs.begin(), e.sine_coeffs.end(), [](double b) { return b == 0.0; });
            },
            [](const SpectralDensity::Product& p) {
                return std::all_of(p.factors.begin(), p.factors.end(), [](const auto& g) { return is_even(g); });
            },
        },
        f.node());
}

FourierSeries fourier_coefficients(const SpectralDensity& f, int k_max, const QuadratureConfig& quad)
{
    if (k_max < 0) throw InvalidArgument("k_max must be nonnegative");
    const Bits bits = quad.bits();
    if (auto fast = analytic_series(f, k_max, bits)) return std::move(*fast);

    const bool even = is_even(f);
    std::vector<Interval> intervals = support_intervals(support_arcs(f));
    if (even) {
        std::vector<Interval> half;
        for (const auto& iv : intervals)
            if (iv.hi > 0.0) half.push_back({std::max(iv.lo, 0.0), iv.hi});
        intervals = std::move(half);
    }
    intervals = split_at(intervals, breakpoints(f));

    const Evaluator ev(f, bits);
    const Integrand integrand = [&ev](const Real& x) { return ev(x); };
    const GaussLegendre gl(quad.order, bits);
    const Real rel = quad.tolerance();

    // c_0 from a coarse pass sets the absolute tolerance (f >= 0).
    Real scale(bits);
    {
        QuadratureConfig capped = quad;
        capped.max_panels = std::min(quad.max_panels, 4096);
        const SampledRule coarse = adaptive_rule(integrand, intervals, quad.min_panels, Real(1e-8, bits), capped, gl);
        scale = coarse.integral(bits);
        if (!scale.is_finite()) throw QuadratureNonConvergent("density is not integrable");
        // A pole of order >= 1 drives bisection to full depth and keeps a fixed share of the
        // mass in the panel at the pole; integrable endpoint behavior leaves it vanishingly small.
        const std::size_t m = static_cast<std::size_t>(gl.order());
        const double deep = std::ldexp(kTwoPi, -(quad.max_depth - 8));
        for (std::size_t i = 0; i < coarse.panels.size() && scale.sign() > 0; ++i) {
            if (coarse.panels[i].hi - coarse.panels[i].lo >= deep) continue;
            Real inner(bits);
            for (std::size_t j = i * m; j < (i + 1) * m; ++j) fma_into(inner, coarse.weight[j], coarse.value[j]);
            if ((inner / scale).to_double() > 1e-3)
                throw QuadratureNonConvergent("density is not integrable near " +
                                              std::to_string(coarse.panels[i].lo));
        }
        if (even) scale *= 2.0;
    }
    if (scale.is_zero()) scale = Real(1.0, bits);
    const Real abs_tol = rel * scale;

    const int per_period = std::max(quad.min_panels, 4 * k_max);
    SampledRule rule = adaptive_rule(integrand, intervals, per_period, even ? abs_tol / 2.0 : abs_tol, quad, gl);
    std::vector<Complex> c = accumulate(rule, k_max, even, bits);
    while (true) {
        SampledRule finer = doubled_rule(integrand, rule, gl);
        std::vector<Complex> fine = accumulate(finer, k_max, even, bits);
        Real err(bits);
        for (std::size_t k = 0; k < c.size(); ++k) err = max(err, (fine[k] - c[k]).abs());
        if (!err.is_finite()) throw QuadratureNonConvergent("non-finite Fourier coefficient; density not integrable");
        if (err <= abs_tol) return FourierSeries{std::move(fine), std::move(err), finer.panels.size(), false};
        if (static_cast<int>(finer.panels.size()) > quad.max_panels)
            throw QuadratureNonConvergent("Fourier coefficient error " + err.to_string(6) + " above " +
                                          abs_tol.to_string(6) + " at " + std::to_string(finer.panels.size()) +
                                          " panels");
        rule = std::move(finer);
        c = std::move(fine);
    }
}

Complex fourier_coefficient(const SpectralDensity& f, int k, const QuadratureConfig& quad)
{
    if (std::abs(k) > quad.k_max)
        throw InvalidArgument("|k| = " + std::to_string(std::abs(k)) + " exceeds k_max = " + std::to_string(quad.k_max));
    FourierSeries s = fourier_coefficients(f, std::abs(k), quad);
    Complex c = std::move(s.c.back());
    return k < 0 ? c.conj() : c;
}

SzegoClass szego_class(const SpectralDensity& f)
{
    using K = SzegoClass::Kind;
    return std::visit(
        overloaded{
            [](const SpectralDensity::Constant&) { return SzegoClass{K::Regular, "constant"}; },
            [](const SpectralDensity::Rosenblatt& r) {
                std::ostringstream os;
                os << "rosenblatt(a=" << r.a << ") has infinite-order zeros";
                return SzegoClass{K::Singular, os.str()};
            },
            [](const SpectralDensity::ArcIndicator& a) {
                if (a.arcs.is_full_circle()) return SzegoClass{K::Regular, "arc indicator of the full circle"};
                return SzegoClass{K::Singular, "arc indicator vanishes on a set of positive measure"};
            },
            [](const SpectralDensity::TrigPoly& t) {
                if (t.t.is_zero()) return SzegoClass{K::Singular, "zero trigonometric polynomial"};
                return SzegoClass{K::Regular, "trigonometric polynomial"};
            },
            [](const SpectralDensity::ReciprocalTrigPoly&) {
                return SzegoClass{K::Regular, "reciprocal trigonometric polynomial"};
            },
            [](const SpectralDensity::EvenPoly& p) {
                if (has_real_root(p.coeffs))
                    throw Unclassifiable("even polynomial with a real root in [-pi, pi]");
                return SzegoClass{K::Regular, "even polynomial without real roots"};
            },
            [](const SpectralDensity::ExpOdd&) { return SzegoClass{K::Regular, "exponential of an odd function"}; },
            [](const SpectralDensity::Product& p) {
                std::optional<Unclassifiable> pending;
                for (const auto& g : p.factors) {
                    try {
                        SzegoClass c = szego_class(g);
                        if (!c.regular()) return c;
                    } catch (const Unclassifiable& e) {
                        if (!pending) pending = e;
                    }
                }
                if (pending) throw *pending;
                return SzegoClass{K::Regular, "product of regular factors"};
            },
        },
        f.node());
}

Real geometric_mean(const SpectralDensity& f, const QuadratureConfig& quad)
{
    const Bits bits = quad.bits();
    if (!szego_class(f).regular()) return Real(bits);
    return std::visit(
        overloaded{
            [bits](const SpectralDensity::Constant& c) { return Real(c.c, bits); },
            [bits](const SpectralDensity::Rosenblatt&) { return Real(bits); },
            [bits](const SpectralDensity::ArcIndicator&) { return Real(1.0, bits); },  // full circle
            [bits](const SpectralDensity::TrigPoly& t) { return geometric_mean_trig(t.t, bits); },
            [bits](const SpectralDensity::ReciprocalTrigPoly& t) { return 1.0 / geometric_mean_trig(t.t, bits); },
            [&quad](const SpectralDensity::EvenPoly& p) {
                const Bits b = quad.bits();
                const auto& c = p.coeffs;
                const Integrand lnp = [&c, b](const Real& x) {
                    const Real u = x * x;
                    Real v(b);
                    for (auto it = c.rbegin(); it != c.rend(); ++it) {
                        v *= u;
                        v += *it;
                    }
                    return log(v);
                };
                const Real I = integrate(lnp, {{0.0, kPi}}, quad);
                return exp(I / Real::pi(b));
            },
            [bits](const SpectralDensity::ExpOdd&) { return Real(1.0, bits); },
            [&quad, bits](const SpectralDensity::Product& p) {
                Real g(1.0, bits);
                for (const auto& h : p.factors) g *= geometric_mean(h, quad);
                return g;
            },
        },
        f.node());
}

ArcSet support_arcs(const SpectralDensity& f)
{
    ArcSet s = ArcSet::full_circle();
    for (const auto& leaf : f.leaves()) {
        if (const auto* a = std::get_if<SpectralDensity::ArcIndicator>(&leaf.node())) {
            s = s.intersect(a->arcs);
        } else if (const auto* t = std::get_if<SpectralDensity::TrigPoly>(&leaf.node()); t && t->t.is_zero()) {
            return ArcSet{};
        }
    }
    return s;
}

std::vector<std::string> interpretation_tags(const SpectralDensity& f)
{
    std::vector<std::string> tags;
    for (const auto& leaf : f.leaves())
        if (const auto* r = std::get_if<SpectralDensity::Rosenblatt>(&leaf.node()))
            tags.push_back(std::string("rosenblatt_denominator=") + to_string(r->form));
    std::sort(tags.begin(), tags.end());
    tags.erase(std::unique(tags.begin(), tags.end()), tags.end());
    return tags;
}

double rosenblatt_asymptote_ratio(double a, RosenblattForm form, double lambda, Bits bits)
{
    const Real x(lambda, bits);
    const Real f = rosenblatt_real(a, form, x);
    const Real ref = exp(Real::pi(bits) * (-a) / abs(x)) * abs(sin(x)) * 2.0;
    return (f / ref).to_double();
}

}  // namespace predlab
