#include "predlab/quadrature.hpp"

#include "predlab/error.hpp"

#include <cmath>
#include <string>

namespace predlab {

Real angle(double x, Bits bits)
{
    if (x == M_PI) return Real::pi(bits);
    if (x == -M_PI) return -Real::pi(bits);
    return Real(x, bits);
}

Real QuadratureConfig::tolerance() const
{
    const double l = log2_tol();
    Real t = pow2(static_cast<long>(std::floor(l)), bits());
    t *= std::exp2(l - std::floor(l));
    return t;
}

GaussLegendre::GaussLegendre(int order, Bits bits)
{
    if (order < 1) throw InvalidArgument("Gauss-Legendre order must be positive");
    const Bits work{bits.value + 32};
    const Real tol = epsilon(bits);
    const int n = order;
    x_.assign(static_cast<std::size_t>(n), Real(bits));
    w_.assign(static_cast<std::size_t>(n), Real(bits));
    for (int i = 0; i < (n + 1) / 2; ++i) {
        Real x(std::cos(M_PI * (i + 0.75) / (n + 0.5)), work);
        Real dp(work);
        for (int iter = 0; iter < 100; ++iter) {
            // Three-term recurrence for P_n(x) and its derivative.
            Real p0(1.0, work), p1 = x;
            for (int k = 2; k <= n; ++k) {
                Real p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
                p0 = std::move(p1);
                p1 = std::move(p2);
            }
            if (n == 1) p0 = Real(1.0, work);
            dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
            const Real dx = p1 / dp;
            x -= dx;
            if (abs(dx) < tol) break;
        }
        if (n == 1) {
            x = Real(0.0, work);
            dp = Real(1.0, work);
        }
        const Real w = 2.0 / ((1.0 - x * x) * dp * dp);
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        x_[hi] = Real(bits);
        mpfr_set(x_[hi].raw(), x.raw(), MPFR_RNDN);
        mpfr_neg(x_[lo].raw(), x_[hi].raw(), MPFR_RNDN);
        mpfr_set(w_[hi].raw(), w.raw(), MPFR_RNDN);
        mpfr_set(w_[lo].raw(), w.raw(), MPFR_RNDN);
    }
}

Real SampledRule::integral(Bits bits) const
{
    Real s(bits);
    for (std::size_t j = 0; j < node.size(); ++j) fma_into(s, weight[j], value[j]);
    return s;
}

namespace {

struct PanelSample {
    Interval iv;
    std::vector<Real> node;
    std::vector<Real> weight;
    std::vector<Real> value;
    Real integral;
};

PanelSample sample_panel(const Integrand& f, Interval iv, const GaussLegendre& gl)
{
    const Bits bits = gl.nodes().front().bits();
    PanelSample p{iv, {}, {}, {}, Real(bits)};
    const Real lo = angle(iv.lo, bits), hi = angle(iv.hi, bits);
    const Real mid = (lo + hi) / 2.0;
    const Real half = (hi - lo) / 2.0;
    const auto n = static_cast<std::size_t>(gl.order());
    p.node.reserve(n);
    p.weight.reserve(n);
    p.value.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        p.node.push_back(mid + half * gl.nodes()[i]);
        p.weight.push_back(half * gl.weights()[i]);
        p.value.push_back(f(p.node.back()));
        fma_into(p.integral, p.weight.back(), p.value.back());
    }
    return p;
}

void append(SampledRule& rule, PanelSample&& p)
{
    rule.panels.push_back(p.iv);
    for (auto& x : p.node) rule.node.push_back(std::move(x));
    for (auto& x : p.weight) rule.weight.push_back(std::move(x));
    for (auto& x : p.value) rule.value.push_back(std::move(x));
}

void refine(const Integrand& f, PanelSample&& p, int depth, const Real& tol_per_length, const QuadratureConfig& cfg,
            const GaussLegendre& gl, SampledRule& out)
{
    const double mid = 0.5 * (p.iv.lo + p.iv.hi);
    PanelSample left = sample_panel(f, {p.iv.lo, mid}, gl);
    PanelSample right = sample_panel(f, {mid, p.iv.hi}, gl);
    const Real diff = abs(p.integral - left.integral - right.integral);
    const Real allowed = tol_per_length * (p.iv.hi - p.iv.lo);
    if (diff <= allowed) {
        append(out, std::move(p));
        return;
    }
    if (depth >= cfg.max_depth || static_cast<int>(out.panels.size()) >= cfg.max_panels) {
        append(out, std::move(left));
        append(out, std::move(right));
        return;
    }
    refine(f, std::move(left), depth + 1, tol_per_length, cfg, gl, out);
    refine(f, std::move(right), depth + 1, tol_per_length, cfg, gl, out);
}

}  // namespace

SampledRule adaptive_rule(const Integrand& f, const std::vector<Interval>& intervals, int panels_per_period,
                          const Real& abs_tol, const QuadratureConfig& cfg, const GaussLegendre& gl)
{
    double total = 0.0;
    for (const auto& iv : intervals) total += iv.hi - iv.lo;
    SampledRule out;
    if (total <= 0.0) return out;
    const Real tol_per_length = abs_tol / total;
    for (const auto& iv : intervals) {
        const double len = iv.hi - iv.lo;
        if (len <= 0.0) continue;
        const int n = std::max(1, static_cast<int>(std::ceil(len / (2.0 * M_PI) * panels_per_period)));
        for (int i = 0; i < n; ++i) {
            const double a = iv.lo + len * i / n;
            const double b = (i + 1 == n) ? iv.hi : iv.lo + len * (i + 1) / n;
            refine(f, sample_panel(f, {a, b}, gl), 0, tol_per_length, cfg, gl, out);
        }
    }
    return out;
}

SampledRule doubled_rule(const Integrand& f, const SampledRule& rule, const GaussLegendre& gl)
{
    SampledRule out;
    for (const auto& iv : rule.panels) {
        const double mid = 0.5 * (iv.lo + iv.hi);
        append(out, sample_panel(f, {iv.lo, mid}, gl));
        append(out, sample_panel(f, {mid, iv.hi}, gl));
    }
    return out;
}

Real integrate(const Integrand& f, const std::vector<Interval>& intervals, const QuadratureConfig& cfg)
{
    const Bits bits = cfg.bits();
    const GaussLegendre gl(cfg.order, bits);
    const Real rel = cfg.tolerance();

    // Scale from a coarse pass, so the bisection tolerance is relative.
    Real scale(bits);
    for (const auto& iv : intervals) {
        const PanelSample p = sample_panel([&](const Real& x) { return abs(f(x)); }, iv, gl);
        scale += p.integral;
    }
    if (scale.is_zero()) scale = Real(1.0, bits);

    SampledRule rule = adaptive_rule(f, intervals, cfg.min_panels, rel * scale, cfg, gl);
    Real value = rule.integral(bits);
    while (true) {
        SampledRule finer = doubled_rule(f, rule, gl);
        Real fine = finer.integral(bits);
        const Real err = abs(fine - value);
        if (err <= rel * scale) return fine;
        if (static_cast<int>(finer.panels.size()) > cfg.max_panels)
            throw QuadratureNonConvergent("integral error estimate " + err.to_string(6) + " above tolerance at " +
                                          std::to_string(finer.panels.size()) + " panels");
        rule = std::move(finer);
        value = std::move(fine);
    }
}

}  // namespace predlab
