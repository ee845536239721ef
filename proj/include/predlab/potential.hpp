#ifndef PREDLAB_POTENTIAL_HPP
#define PREDLAB_POTENTIAL_HPP

/** @file
 * Fekete points, Chebyshev bounds and transfinite diameter estimates for
 * finite unions of arcs.
 *
 * For points z_j = e^{i theta_j} the objective
 *     S(theta) = sum_{j<k} ln |2 sin((theta_j - theta_k)/2)|
 * is concave as long as the cyclic order of the points is fixed, so the
 * search splits into a discrete part (how many points sit on each arc) and a
 * concave maximization inside each such cell.
 */

#include "predlab/arcset.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace predlab {

struct OptimizerConfig {
    /// Independent starting allocations (the first one is deterministic).
    int starts = 8;
    std::uint64_t seed = 0x5eed;
    /// Angle resolution of the one-dimensional line searches.
    double angle_tol = 1e-10;
    /// Bound on the projected gradient of S at a converged configuration.
    double stationarity_tol = 1e-8;
    int max_sweeps = 50;
    int max_newton = 200;
};

struct FeketeResult {
    int n = 0;
    /// Angles, grouped by arc and increasing within each arc.
    std::vector<double> points;
    double d_n = 0.0;
    /// S at the optimum; d_n = exp(2 S / (n (n - 1))).
    double log_energy = 0.0;
    int iterations = 0;
    bool converged = false;
    /// Number of points on each arc of F.
    std::vector<int> allocation;
};

struct TauEstimate {
    enum class Method { FeketeExtrapolated, ChebyshevBound };
    double tau_hat = 0.0;
    Method method = Method::FeketeExtrapolated;
    int n_used = 0;
    double uncertainty = 0.0;
    /// (sup_F |prod (z - z_j)|)^{1/n} at n_used.
    double chebyshev_root = 0.0;
    /// The d_n values entering the fit, keyed by n.
    std::vector<std::pair<int, double>> d;
};

const char* to_string(TauEstimate::Method m);

/// Throws OptimizerStalled when no start reaches the stationarity tolerance.
FeketeResult fekete_points(const ArcSet& F, int n, const OptimizerConfig& opt = {});

/// max over a grid of 256 n points per arc (refined locally) of |prod (z - z_j)| with z_j the points of fk.
double chebyshev_upper_bound(const ArcSet& F, int n, const FeketeResult& fk);

/**
 * d_n at n in {n_max/4, n_max/2, n_max}, extrapolated with
 *     ln d_n = ln tau + c ln(n) / (n - 1),
 * which is exact for the full circle (d_n = n^{1/(n-1)}).
 */
TauEstimate tau_estimate(const ArcSet& F, int n_max, const OptimizerConfig& opt = {});

}  // namespace predlab

#endif
