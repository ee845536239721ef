#ifndef PREDLAB_ASYMPTOTICS_HPP
#define PREDLAB_ASYMPTOTICS_HPP

/** @file
 * Limit quantities read off finite prediction-error series.
 *
 * Series are passed as ln sigma_n^2 for n = 0..N so that values far below the
 * double range stay usable. Windows are inclusive index ranges [lo, hi].
 */

#include "predlab/toeplitz.hpp"

#include <string>
#include <vector>

namespace predlab {

struct Window {
    int lo;
    int hi;
    [[nodiscard]] int count() const { return hi - lo + 1; }
};

struct RateReport {
    enum class Kind { RootLimit, PowerLaw, RatioLimit };
    Kind kind;
    Window window;
    /// Root limit: extrapolated root. Power law: exponent a. Ratio: last ratio.
    double estimate = 0.0;
    /// Root limit: (sigma^2_{hi})^{1/(2 hi)}. Power law: constant C. Ratio: mean over the window.
    double secondary = 0.0;
    /// Root limit: two-point Richardson value in 1/n. Unused otherwise.
    double richardson = 0.0;
    /// RMS residual of the fit (root limit, power law); 0 for ratios.
    double residual = 0.0;
    /// max - min of the windowed per-n estimates.
    double spread = 0.0;
    /// Per-n estimate at hi minus the one at the window midpoint.
    double trend = 0.0;
    /// Ratio only: q of the least-squares fit q_n = q + b n^{-p}, p in [0.25, 4]; a diagnostic.
    double extrapolated = 0.0;
    /// Ratio only: the fitted p.
    double decay_exponent = 0.0;
};

const char* to_string(RateReport::Kind k);

enum class Verdict { Consistent, Inconsistent, Inconclusive };
const char* to_string(Verdict v);

struct SequenceClass {
    Verdict exponentially_neutral = Verdict::Inconclusive;
    Verdict exponentially_decreasing = Verdict::Inconclusive;
    Verdict weakly_varying = Verdict::Inconclusive;
    /// The root-limit report the exponential flags were read from.
    RateReport root;
};

/// Default windows: [N/2, N] for roots, [N/4, N] for power laws (N the last index).
Window root_window(std::size_t series_size);
Window power_window(std::size_t series_size);

/**
 * r_n = (sigma_n^2)^{1/(2n)} on the window, extrapolated by least squares on
 *     ln r_n = ln r + b / n + c ln(n) / n,
 * exact for sigma_n = C n^alpha q^n. Needs at least 4 points.
 */
RateReport root_limit(const std::vector<double>& log_sigma2, Window w);
RateReport root_limit(const PredictionErrorSeries& s, Window w);

/// Least squares of ln sigma_n^2 = ln C - a ln n. Needs at least 8 points.
RateReport power_law_fit(const std::vector<double>& log_sigma2, Window w);
RateReport power_law_fit(const PredictionErrorSeries& s, Window w);

/// sigma_n^2(fg) / sigma_n^2(f) on the window. Throws PrecisionMismatch if the series differ in precision.
RateReport ratio_limit(const PredictionErrorSeries& fg, const PredictionErrorSeries& f, Window w);
RateReport ratio_limit(const std::vector<double>& log_fg, const std::vector<double>& log_f, Window w);

/**
 * Decreasing is consistent when the root limit is below 1 - 3 spread, neutral
 * when it is within 3 spread of 1; each is inconsistent when the other holds.
 * Weakly varying reads |sigma_{n+1}/sigma_n - 1| over the last quarter of the
 * window against 0.05. Needs at least 8 points.
 */
SequenceClass classify(const std::vector<double>& log_sigma2, Window w);
SequenceClass classify(const PredictionErrorSeries& s, Window w);

}  // namespace predlab

#endif
