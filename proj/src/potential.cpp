#include "predlab/potential.hpp"

#include "predlab/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

namespace predlab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Uniform on [0, 1) from the top 53 bits, identical on every platform.
double uniform(std::mt19937_64& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1p-53;
}

double log_chord(double a, double b)
{
    return std::log(std::abs(2.0 * std::sin(0.5 * (a - b))));
}

/// Points with box bounds, grouped by arc.
struct Cell {
    std::vector<double> x;
    std::vector<double> lo, hi;
    /// Arc index of each point.
    std::vector<int> arc;
};

double energy(const std::vector<double>& x)
{
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = i + 1; j < x.size(); ++j) {
            const double v = log_chord(x[i], x[j]);
            if (!std::isfinite(v)) return kNegInf;
            s += v;
        }
    return s;
}

void gradient_hessian(const std::vector<double>& x, Eigen::VectorXd& g, Eigen::MatrixXd& H)
{
    const auto n = static_cast<Eigen::Index>(x.size());
    g.setZero(n);
    H.setZero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double h = 0.5 * (x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)]);
            const double s = std::sin(h), c = std::cos(h);
            const double cot = 0.5 * c / s;
            const double w = 0.25 / (s * s);
            g(i) += cot;
            g(j) -= cot;
            H(i, i) -= w;
            H(j, j) -= w;
            H(i, j) += w;
            H(j, i) += w;
        }
}

/// Allowed interval for point i: its box, shrunk to the neighbors on the same arc.
std::pair<double, double> room(const Cell& c, std::size_t i)
{
    double L = c.lo[i], R = c.hi[i];
    if (i > 0 && c.arc[i - 1] == c.arc[i]) L = std::max(L, c.x[i - 1]);
    if (i + 1 < c.x.size() && c.arc[i + 1] == c.arc[i]) R = std::min(R, c.x[i + 1]);
    return {L, R};
}

bool ordered(const Cell& c, const std::vector<double>& x)
{
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
        if (c.arc[i] == c.arc[i + 1] && !(x[i] < x[i + 1])) return false;
    return true;
}

/// One sweep of exact coordinate maximization; dS/dtheta_i is decreasing on its room.
void coordinate_sweep(Cell& c, double tol)
{
    const std::size_t n = c.x.size();
    for (std::size_t i = 0; i < n; ++i) {
        auto [L, R] = room(c, i);
        if (R - L <= 0.0) continue;
        auto deriv = [&](double t, double* d2) {
            double g = 0.0, h = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                if (k == i) continue;
                const double a = 0.5 * (t - c.x[k]);
                const double s = std::sin(a);
                g += 0.5 * std::cos(a) / s;
                h -= 0.25 / (s * s);
            }
            if (d2) *d2 = h;
            return g;
        };
        const bool left_is_bound = !(i > 0 && c.arc[i - 1] == c.arc[i] && c.x[i - 1] >= c.lo[i]);
        const bool right_is_bound = !(i + 1 < n && c.arc[i + 1] == c.arc[i] && c.x[i + 1] <= c.hi[i]);
        if (right_is_bound && deriv(R, nullptr) >= 0.0) {
            c.x[i] = R;
            continue;
        }
        if (left_is_bound && deriv(L, nullptr) <= 0.0) {
            c.x[i] = L;
            continue;
        }
        // Root of the derivative in (L, R) by Newton safeguarded with bisection.
        double a = L, b = R;
        double t = std::clamp(c.x[i], a + 0.25 * (b - a), b - 0.25 * (b - a));
        for (int it = 0; it < 200 && b - a > tol; ++it) {
            double h;
            const double g = deriv(t, &h);
            if (g > 0.0) a = t;
            else b = t;
            double next = t - g / h;
            if (!(next > a && next < b)) next = 0.5 * (a + b);
            if (std::abs(next - t) < 0.1 * tol) {
                t = next;
                break;
            }
            t = next;
        }
        c.x[i] = t;
    }
}

/// max |dS/dtheta_i| over points not held at an arc endpoint by an outward gradient.
double projected_gradient(const Cell& c, const std::vector<double>& x)
{
    Eigen::VectorXd g;
    Eigen::MatrixXd H;
    gradient_hessian(x, g, H);
    double pg = 0.0;
    for (std::size_t u = 0; u < x.size(); ++u) {
        const auto i = static_cast<Eigen::Index>(u);
        const bool fixed = c.hi[u] - c.lo[u] <= 0.0;
        const bool at_lo = x[u] <= c.lo[u] + 1e-13 && g(i) < 0.0;
        const bool at_hi = x[u] >= c.hi[u] - 1e-13 && g(i) > 0.0;
        if (!(fixed || at_lo || at_hi)) pg = std::max(pg, std::abs(g(i)));
    }
    return pg;
}

struct NewtonOutcome {
    int iterations = 0;
    double projected_gradient = 0.0;
};

/// Projected Newton ascent with the active set at the arc endpoints.
NewtonOutcome projected_newton(Cell& c, const OptimizerConfig& opt)
{
    const auto n = static_cast<Eigen::Index>(c.x.size());
    Eigen::VectorXd g;
    Eigen::MatrixXd H;
    NewtonOutcome out;
    double S = energy(c.x);
    for (int it = 0; it < opt.max_newton; ++it) {
        out.iterations = it + 1;
        gradient_hessian(c.x, g, H);
        const double eps = 1e-13;
        std::vector<Eigen::Index> free;
        double pg = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto u = static_cast<std::size_t>(i);
            const bool fixed = c.hi[u] - c.lo[u] <= 0.0;
            const bool at_lo = c.x[u] <= c.lo[u] + eps && g(i) < 0.0;
            const bool at_hi = c.x[u] >= c.hi[u] - eps && g(i) > 0.0;
            if (fixed || at_lo || at_hi) continue;
            free.push_back(i);
            pg = std::max(pg, std::abs(g(i)));
        }
        out.projected_gradient = pg;
        if (free.empty() || pg <= opt.stationarity_tol * 1e-3) break;

        const auto m = static_cast<Eigen::Index>(free.size());
        Eigen::MatrixXd A(m, m);
        Eigen::VectorXd b(m);
        for (Eigen::Index r = 0; r < m; ++r) {
            b(r) = g(free[static_cast<std::size_t>(r)]);
            for (Eigen::Index k = 0; k < m; ++k)
                A(r, k) = -H(free[static_cast<std::size_t>(r)], free[static_cast<std::size_t>(k)]);
        }
        // -H is a weighted graph Laplacian; the shift removes the rotation null space when every point is free.
        A.diagonal().array() += 1e-12 * std::max(1.0, A.diagonal().cwiseAbs().maxCoeff());
        Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
        Eigen::VectorXd d = ldlt.solve(b);
        if (ldlt.info() != Eigen::Success || !d.allFinite()) d = b;

        // Close to the optimum the energy gain drops below the rounding of S; there a step
        // is judged by the projected gradient instead.
        const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
        const double noise = 8.0 * std::numeric_limits<double>::epsilon() * pairs * std::max(1.0, std::abs(S) / pairs + 1.0);
        double t = 1.0;
        bool moved = false;
        for (int ls = 0; ls < 60; ++ls, t *= 0.5) {
            std::vector<double> y = c.x;
            double gain = 0.0;
            for (Eigen::Index r = 0; r < m; ++r) {
                const auto u = static_cast<std::size_t>(free[static_cast<std::size_t>(r)]);
                y[u] = std::clamp(c.x[u] + t * d(r), c.lo[u], c.hi[u]);
                gain += g(free[static_cast<std::size_t>(r)]) * (y[u] - c.x[u]);
            }
            if (!ordered(c, y)) continue;
            const double Sy = energy(y);
            if (gain <= noise && Sy >= S - noise) {
                if (projected_gradient(c, y) < pg) {
                    c.x = std::move(y);
                    S = std::max(S, Sy);
                    moved = true;
                    break;
                }
                continue;
            }
            if (Sy >= S + 1e-4 * gain) {
                moved = Sy > S || gain > 0.0;
                c.x = std::move(y);
                S = Sy;
                break;
            }
        }
        if (!moved) break;
    }
    return out;
}

struct Problem {
    std::vector<AngleInterval> arcs;
    int n;
    OptimizerConfig opt;
};

struct CellResult {
    double S = kNegInf;
    std::vector<double> x;
    int iterations = 0;
    bool converged = false;
};

CellResult solve_cell(const Problem& p, const std::vector<int>& alloc)
{
    Cell c;
    for (std::size_t a = 0; a < p.arcs.size(); ++a) {
        const int m = alloc[a];
        const double lo = p.arcs[a].lo, hi = p.arcs[a].hi;
        for (int i = 0; i < m; ++i) {
            // Chebyshev-Lobatto spacing, endpoints included.
            const double x = m == 1 ? 0.5 * (lo + hi)
                                    : 0.5 * (lo + hi) - 0.5 * (hi - lo) * std::cos(kPi * i / (m - 1));
            c.x.push_back(x);
            c.lo.push_back(lo);
            c.hi.push_back(hi);
            c.arc.push_back(static_cast<int>(a));
        }
    }
    CellResult r;
    if (energy(c.x) == kNegInf) return r;
    const int sweeps = std::min(p.opt.max_sweeps, 5);
    for (int s = 0; s < sweeps; ++s) coordinate_sweep(c, p.opt.angle_tol);
    const NewtonOutcome nw = projected_newton(c, p.opt);
    r.S = energy(c.x);
    r.x = std::move(c.x);
    r.iterations = sweeps + nw.iterations;
    r.converged = nw.projected_gradient <= p.opt.stationarity_tol * std::max(1.0, static_cast<double>(p.n));
    return r;
}

/// Local search over allocations by moving one point between arcs.
struct SearchResult {
    CellResult best;
    std::vector<int> alloc;
    int iterations = 0;
};

SearchResult local_search(const Problem& p, std::vector<int> alloc, std::map<std::vector<int>, CellResult>& memo)
{
    auto value = [&](const std::vector<int>& a) -> const CellResult& {
        auto it = memo.find(a);
        if (it == memo.end()) it = memo.emplace(a, solve_cell(p, a)).first;
        return it->second;
    };
    auto feasible = [&](const std::vector<int>& a) {
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i] < 0 || (a[i] > 1 && p.arcs[i].length() <= 0.0)) return false;
        return true;
    };
    SearchResult out;
    out.alloc = alloc;
    out.best = value(alloc);
    const std::size_t k = alloc.size();
    for (int round = 0; round < 4 * p.n; ++round) {
        std::vector<int> best_alloc;
        double best_S = out.best.S;
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) {
                if (i == j || out.alloc[i] == 0) continue;
                std::vector<int> a = out.alloc;
                --a[i];
                ++a[j];
                if (!feasible(a)) continue;
                const CellResult& r = value(a);
                if (r.S > best_S + 1e-12 * std::max(1.0, std::abs(best_S))) {
                    best_S = r.S;
                    best_alloc = a;
                }
            }
        if (best_alloc.empty()) break;
        out.alloc = best_alloc;
        out.best = value(best_alloc);
        ++out.iterations;
    }
    out.iterations += out.best.iterations;
    return out;
}

/// Largest-remainder allocation of n points proportional to weights.
std::vector<int> proportional(const std::vector<double>& w, int n, const std::vector<AngleInterval>& arcs)
{
    double total = 0.0;
    for (double x : w) total += x;
    std::vector<int> a(w.size(), 0);
    std::vector<std::pair<double, std::size_t>> rem;
    int used = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double share = total > 0.0 ? n * w[i] / total : static_cast<double>(n) / static_cast<double>(w.size());
        a[i] = static_cast<int>(std::floor(share));
        used += a[i];
        rem.emplace_back(share - a[i], i);
    }
    std::stable_sort(rem.begin(), rem.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
    for (std::size_t r = 0; used < n; r = (r + 1) % rem.size(), ++used) ++a[rem[r].second];
    // Single points carry at most one point; move the excess to the longest arc.
    std::size_t longest = 0;
    for (std::size_t i = 0; i < arcs.size(); ++i)
        if (arcs[i].length() > arcs[longest].length()) longest = i;
    for (std::size_t i = 0; i < arcs.size(); ++i)
        if (arcs[i].length() <= 0.0 && a[i] > 1) {
            a[longest] += a[i] - 1;
            a[i] = 1;
        }
    return a;
}

double max_log_modulus_on(double lo, double hi, int grid, const std::vector<double>& roots)
{
    auto logp = [&](double t) {
        double s = 0.0;
        for (double r : roots) s += log_chord(t, r);
        return s;
    };
    if (hi - lo <= 0.0) return logp(lo);
    std::vector<double> v(static_cast<std::size_t>(grid) + 1);
    for (int j = 0; j <= grid; ++j) v[static_cast<std::size_t>(j)] = logp(lo + (hi - lo) * j / grid);
    double best = *std::max_element(v.begin(), v.end());
    // Golden-section refinement around each local grid maximum within 1e-6 of the best.
    const double h = (hi - lo) / grid;
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int j = 0; j <= grid; ++j) {
        const auto u = static_cast<std::size_t>(j);
        const bool local = (j == 0 || v[u] >= v[u - 1]) && (j == grid || v[u] >= v[u + 1]);
        if (!local || v[u] < best - 1e-6 * std::max(1.0, std::abs(best))) continue;
        double a = std::max(lo, lo + h * (j - 1)), b = std::min(hi, lo + h * (j + 1));
        double c = b - phi * (b - a), d = a + phi * (b - a);
        double fc = logp(c), fd = logp(d);
        for (int it = 0; it < 80 && b - a > 1e-14; ++it) {
            if (fc > fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - phi * (b - a);
                fc = logp(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + phi * (b - a);
                fd = logp(d);
            }
        }
        best = std::max({best, fc, fd});
    }
    return best;
}

}  // namespace

const char* to_string(TauEstimate::Method m)
{
    return m == TauEstimate::Method::FeketeExtrapolated ? "fekete_extrapolated" : "chebyshev_bound";
}

FeketeResult fekete_points(const ArcSet& F, int n, const OptimizerConfig& opt)
{
    if (n < 2) throw InvalidArgument("Fekete points need n >= 2");
    if (F.empty()) throw InvalidArgument("empty arc set");
    FeketeResult out;
    out.n = n;

    if (F.is_full_circle()) {
        // The n-th roots of unity are optimal; d_n = n^{1/(n-1)}.
        for (int j = 0; j < n; ++j) out.points.push_back(normalize_angle(-kPi + kTwoPi * j / n + kPi / n));
        out.log_energy = energy(out.points);
        out.d_n = std::exp(2.0 * out.log_energy / (static_cast<double>(n) * (n - 1)));
        out.converged = true;
        out.allocation = {n};
        return out;
    }

    Problem p{F.intervals(), n, opt};
    if (p.arcs.size() == 1 && p.arcs[0].length() <= 0.0) {
        out.points.assign(static_cast<std::size_t>(n), p.arcs[0].lo);
        out.log_energy = kNegInf;
        out.d_n = 0.0;
        out.converged = true;
        out.allocation = {n};
        return out;
    }

    std::vector<double> w;
    for (const auto& a : p.arcs) w.push_back(a.length());
    std::mt19937_64 rng(opt.seed);
    std::map<std::vector<int>, CellResult> memo;
    SearchResult best;
    bool have = false;
    int iterations = 0;
    for (int s = 0; s < std::max(1, opt.starts); ++s) {
        std::vector<double> ws = w;
        if (s > 0)
            for (auto& x : ws) x *= 0.25 + 1.5 * uniform(rng);
        SearchResult r = local_search(p, proportional(ws, n, p.arcs), memo);
        iterations += r.iterations;
        // Strictly better only, so ties keep the lowest start index.
        if (!have || r.best.S > best.best.S) {
            best = std::move(r);
            have = true;
        }
    }
    if (!best.best.converged || best.best.S == kNegInf)
        throw OptimizerStalled("no start reached stationarity for n = " + std::to_string(n));
    out.points = best.best.x;
    out.log_energy = best.best.S;
    out.d_n = std::exp(2.0 * out.log_energy / (static_cast<double>(n) * (n - 1)));
    out.iterations = iterations;
    out.converged = true;
    out.allocation = best.alloc;
    return out;
}

double chebyshev_upper_bound(const ArcSet& F, int n, const FeketeResult& fk)
{
    if (fk.n != n || static_cast<int>(fk.points.size()) != n)
        throw InvalidArgument("Fekete result does not have n points");
    double best = kNegInf;
    for (const auto& iv : F.intervals()) best = std::max(best, max_log_modulus_on(iv.lo, iv.hi, 256 * n, fk.points));
    return std::exp(best);
}

TauEstimate tau_estimate(const ArcSet& F, int n_max, const OptimizerConfig& opt)
{
    if (n_max < 8) throw InvalidArgument("tau_estimate needs n_max >= 8");
    TauEstimate out;
    out.n_used = n_max;
    const auto iv = F.intervals();
    if (F.empty()) throw InvalidArgument("empty arc set");
    if (!F.is_full_circle() && iv.size() == 1 && iv[0].length() <= 0.0) {
        out.n_used = 0;
        return out;  // a single point has capacity 0
    }
    const std::vector<int> ns{n_max / 4, n_max / 2, n_max};
    FeketeResult last;
    for (int n : ns) {
        FeketeResult r = fekete_points(F, n, opt);
        out.d.emplace_back(n, r.d_n);
        if (n == n_max) last = std::move(r);
    }
    // Least squares for ln d_n = ln tau + c x_n with x_n = ln(n)/(n - 1).
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [n, d] : out.d) {
        const double x = std::log(static_cast<double>(n)) / (n - 1);
        const double y = std::log(d);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double m = static_cast<double>(out.d.size());
    const double c = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    out.tau_hat = std::exp((sy - c * sx) / m);
    out.uncertainty = std::abs(last.d_n - out.tau_hat);
    out.chebyshev_root = std::pow(chebyshev_upper_bound(F, n_max, last), 1.0 / n_max);
    return out;
}

}  // namespace predlab
