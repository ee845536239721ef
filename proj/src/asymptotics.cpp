#include "predlab/asymptotics.hpp"

#include "predlab/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace predlab {

namespace {

void check_window(std::size_t size, Window w, int min_points, int min_lo)
{
    if (w.count() < min_points)
        throw WindowTooShort("window [" + std::to_string(w.lo) + ", " + std::to_string(w.hi) + "] has fewer than " +
                             std::to_string(min_points) + " points");
    if (w.lo < min_lo || static_cast<std::size_t>(w.hi) >= size)
        throw InvalidArgument("window [" + std::to_string(w.lo) + ", " + std::to_string(w.hi) +
                              "] outside a series of length " + std::to_string(size));
}

void check_finite(const std::vector<double>& v, Window w)
{
    for (int n = w.lo; n <= w.hi; ++n)
        if (!std::isfinite(v[static_cast<std::size_t>(n)]))
            throw InvalidArgument("sigma_n^2 is not positive at n = " + std::to_string(n));
}

/// Least squares; returns coefficients and RMS residual.
std::pair<Eigen::VectorXd, double> lstsq(const Eigen::MatrixXd& A, const Eigen::VectorXd& y)
{
    Eigen::VectorXd c = A.colPivHouseholderQr().solve(y);
    const double rms = std::sqrt((A * c - y).squaredNorm() / static_cast<double>(y.size()));
    return {c, rms};
}

struct PowerTail {
    double limit;
    double exponent;
    double rms;
};

/// Linear least squares for (q, b) in q_n = q + b n^{-p} at fixed p.
PowerTail fit_tail(const std::vector<double>& n, const std::vector<double>& q, double p)
{
    const auto m = static_cast<Eigen::Index>(n.size());
    Eigen::MatrixXd A(m, 2);
    Eigen::VectorXd y(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        A(i, 0) = 1.0;
        A(i, 1) = std::pow(n[static_cast<std::size_t>(i)], -p);
        y(i) = q[static_cast<std::size_t>(i)];
    }
    const auto [c, rms] = lstsq(A, y);
    return {c(0), p, rms};
}

// Variable projection over p in [0.25, 4]: grid, then golden section around the best cell.
// Below 0.25 the model degenerates into a near-constant plus offset and the limit is meaningless.
PowerTail extrapolate_tail(const std::vector<double>& n, const std::vector<double>& q)
{
    PowerTail best{q.back(), 0.0, 1e300};
    double best_p = 0.0;
    for (int i = 5; i <= 80; ++i) {
        const PowerTail t = fit_tail(n, q, 0.05 * i);
        if (t.rms < best.rms) {
            best = t;
            best_p = 0.05 * i;
        }
    }
    double a = std::max(0.25, best_p - 0.05), b = std::min(4.0, best_p + 0.05);
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 60; ++it) {
        const double x1 = b - r * (b - a), x2 = a + r * (b - a);
        if (fit_tail(n, q, x1).rms < fit_tail(n, q, x2).rms) b = x2;
        else a = x1;
    }
    const PowerTail t = fit_tail(n, q, 0.5 * (a + b));
    return t.rms < best.rms ? t : best;
}

}  // namespace

const char* to_string(RateReport::Kind k)
{
    switch (k) {
    case RateReport::Kind::RootLimit: return "root_limit";
    case RateReport::Kind::PowerLaw: return "power_law";
    case RateReport::Kind::RatioLimit: return "ratio_limit";
    }
    return "?";
}

const char* to_string(Verdict v)
{
    switch (v) {
    case Verdict::Consistent: return "consistent";
    case Verdict::Inconsistent: return "inconsistent";
    case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

Window root_window(std::size_t series_size)
{
    const int N = static_cast<int>(series_size) - 1;
    return {std::max(1, N / 2), N};
}

Window power_window(std::size_t series_size)
{
    const int N = static_cast<int>(series_size) - 1;
    return {std::max(1, N / 4), N};
}

RateReport root_limit(const std::vector<double>& log_sigma2, Window w)
{
    check_window(log_sigma2.size(), w, 4, 1);
    check_finite(log_sigma2, w);
    const int m = w.count();
    Eigen::MatrixXd A(m, 3);
    Eigen::VectorXd y(m);
    std::vector<double> r;
    for (int i = 0; i < m; ++i) {
        const double n = w.lo + i;
        const double lr = log_sigma2[static_cast<std::size_t>(w.lo + i)] / (2.0 * n);
        A(i, 0) = 1.0;
        A(i, 1) = 1.0 / n;
        A(i, 2) = std::log(n) / n;
        y(i) = lr;
        r.push_back(std::exp(lr));
    }
    const auto [c, rms] = lstsq(A, y);
    RateReport rep{RateReport::Kind::RootLimit, w};
    rep.estimate = std::exp(c(0));
    rep.secondary = r.back();
    rep.richardson = (w.hi * r.back() - w.lo * r.front()) / static_cast<double>(w.hi - w.lo);
    rep.residual = rms;
    const auto [lo, hi] = std::minmax_element(r.begin(), r.end());
    rep.spread = *hi - *lo;
    rep.trend = r.back() - r[r.size() / 2];
    return rep;
}

RateReport root_limit(const PredictionErrorSeries& s, Window w)
{
    return root_limit(s.log_sigma2(), w);
}

RateReport power_law_fit(const std::vector<double>& log_sigma2, Window w)
{
    check_window(log_sigma2.size(), w, 8, 1);
    check_finite(log_sigma2, w);
    const int m = w.count();
    Eigen::MatrixXd A(m, 2);
    Eigen::VectorXd y(m);
    for (int i = 0; i < m; ++i) {
        const double n = w.lo + i;
        A(i, 0) = 1.0;
        A(i, 1) = -std::log(n);
        y(i) = log_sigma2[static_cast<std::size_t>(w.lo + i)];
    }
    const auto [c, rms] = lstsq(A, y);
    RateReport rep{RateReport::Kind::PowerLaw, w};
    rep.estimate = c(1);
    rep.secondary = std::exp(c(0));
    rep.residual = rms;
    // Local exponents -d ln sigma^2 / d ln n over the window.
    std::vector<double> local;
    for (int n = w.lo; n < w.hi; ++n)
        local.push_back(-(log_sigma2[static_cast<std::size_t>(n + 1)] - log_sigma2[static_cast<std::size_t>(n)]) /
                        std::log((n + 1.0) / n));
    const auto [lo, hi] = std::minmax_element(local.begin(), local.end());
    rep.spread = *hi - *lo;
    rep.trend = local.back() - local[local.size() / 2];
    return rep;
}

RateReport power_law_fit(const PredictionErrorSeries& s, Window w)
{
    return power_law_fit(s.log_sigma2(), w);
}

RateReport ratio_limit(const std::vector<double>& log_fg, const std::vector<double>& log_f, Window w)
{
    check_window(std::min(log_fg.size(), log_f.size()), w, 4, 0);
    check_finite(log_fg, w);
    check_finite(log_f, w);
    std::vector<double> q;
    for (int n = w.lo; n <= w.hi; ++n)
        q.push_back(std::exp(log_fg[static_cast<std::size_t>(n)] - log_f[static_cast<std::size_t>(n)]));
    RateReport rep{RateReport::Kind::RatioLimit, w};
    rep.estimate = q.back();
    double sum = 0.0;
    for (double x : q) sum += x;
    rep.secondary = sum / static_cast<double>(q.size());
    const auto [lo, hi] = std::minmax_element(q.begin(), q.end());
    rep.spread = *hi - *lo;
    rep.trend = q.back() - q[q.size() / 2];
    rep.extrapolated = q.back();
    if (rep.spread > 0.0 && q.size() >= 6) {
        std::vector<double> ns;
        for (int n = w.lo; n <= w.hi; ++n) ns.push_back(std::max(1, n));
        const PowerTail t = extrapolate_tail(ns, q);
        if (std::isfinite(t.limit)) {
            rep.extrapolated = t.limit;
            rep.decay_exponent = t.exponent;
        }
    }
    return rep;
}

RateReport ratio_limit(const PredictionErrorSeries& fg, const PredictionErrorSeries& f, Window w)
{
    if (fg.precision_bits != f.precision_bits)
        throw PrecisionMismatch("series computed at " + std::to_string(fg.precision_bits) + " and " +
                                std::to_string(f.precision_bits) + " bits");
    // The quotient is formed at full precision before leaving the Real domain.
    check_window(std::min(fg.size(), f.size()), w, 4, 0);
    std::vector<double> a(fg.size(), 0.0), b(fg.size(), 0.0);
    for (int n = w.lo; n <= w.hi; ++n) {
        const auto u = static_cast<std::size_t>(n);
        a[u] = (fg.sigma2[u] / f.sigma2[u]).log_double();
    }
    return ratio_limit(a, b, w);
}

SequenceClass classify(const std::vector<double>& log_sigma2, Window w)
{
    check_window(log_sigma2.size(), w, 8, 1);
    SequenceClass c;
    c.root = root_limit(log_sigma2, w);
    const double est = c.root.estimate;
    const double band = 3.0 * c.root.spread + 1e-12;
    const bool decreasing = est < 1.0 - band;
    const bool neutral = std::abs(est - 1.0) <= band;
    c.exponentially_decreasing = decreasing ? Verdict::Consistent : (neutral ? Verdict::Inconsistent : Verdict::Inconclusive);
    c.exponentially_neutral = neutral ? Verdict::Consistent : (decreasing ? Verdict::Inconsistent : Verdict::Inconclusive);

    // |sigma_{n+1}/sigma_n - 1| over the last quarter of the window.
    const int from = std::max(w.lo, w.hi - std::max(2, w.count() / 4));
    double lo = 1e300, hi = 0.0;
    for (int n = from; n < w.hi; ++n) {
        const double d = std::abs(std::exp(0.5 * (log_sigma2[static_cast<std::size_t>(n + 1)] -
                                                  log_sigma2[static_cast<std::size_t>(n)])) -
                                  1.0);
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    if (hi < 0.05) c.weakly_varying = Verdict::Consistent;
    else if (lo > 0.05) c.weakly_varying = Verdict::Inconsistent;
    return c;
}

SequenceClass classify(const PredictionErrorSeries& s, Window w)
{
    return classify(s.log_sigma2(), w);
}

}  // namespace predlab
