#include "predlab/fejer_riesz.hpp"

#include "predlab/arcset.hpp"
#include "predlab/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace predlab {

namespace {

/// Roots closer than this (relative) are treated as one multiple root.
constexpr double kClusterTol = 1e-6;
/// A polished cluster this close to the unit circle is on it.
constexpr double kCircleTol = 1e-8;

using Poly = std::vector<Complex>;

Complex horner(const Poly& p, const Complex& z)
{
    Complex v = p.back();
    for (std::size_t j = p.size() - 1; j-- > 0;) {
        v *= z;
        v += p[j];
    }
    return v;
}

Poly derivative(const Poly& p)
{
    Poly d;
    for (std::size_t j = 1; j < p.size(); ++j) d.push_back(p[j] * Real(static_cast<long>(j), p[j].bits()));
    return d;
}

Poly multiply(const Poly& a, const Poly& b, Bits bits)
{
    Poly r(a.size() + b.size() - 1, Complex(bits));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

std::vector<std::complex<double>> companion_roots(const Poly& p)
{
    const auto n = static_cast<Eigen::Index>(p.size()) - 1;
    const std::complex<double> lead = p.back().to_std();
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) C(0, j) = -p[static_cast<std::size_t>(n - 1 - j)].to_std() / lead;
    for (Eigen::Index j = 1; j < n; ++j) C(j, j - 1) = 1.0;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
    if (es.info() != Eigen::Success) throw RootPairingFailed("companion eigenvalue iteration did not converge");
    std::vector<std::complex<double>> r;
    for (Eigen::Index j = 0; j < n; ++j) r.push_back(es.eigenvalues()(j));
    return r;
}

struct Cluster {
    Complex root;
    int multiplicity;
};

std::vector<Cluster> clustered_roots(const Poly& p, Bits bits)
{
    const auto approx = companion_roots(p);
    const std::size_t n = approx.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(approx[i] - approx[j]) < kClusterTol * std::max(1.0, std::abs(approx[i])))
                parent[find(i)] = find(j);

    std::vector<Cluster> out;
    const Real eps = epsilon(bits);
    for (std::size_t i = 0; i < n; ++i) {
        if (find(i) != i) continue;
        std::complex<double> sum = 0.0;
        int m = 0;
        for (std::size_t j = 0; j < n; ++j)
            if (find(j) == i) {
                sum += approx[j];
                ++m;
            }
        // Newton on P^{(m-1)}, which has a simple root at an m-fold root of P.
        Poly q = p;
        for (int d = 1; d < m; ++d) q = derivative(q);
        const Poly dq = derivative(q);
        Complex z(sum.real() / m, sum.imag() / m, bits);
        for (int it = 0; it < 200; ++it) {
            const Complex den = horner(dq, z);
            if (den.norm().is_zero()) break;
            const Complex step = horner(q, z) / den;
            z -= step;
            if (step.abs() <= eps * max(z.abs(), Real(1.0, bits))) break;
        }
        out.push_back({std::move(z), m});
    }
    return out;
}

struct Factor {
    Poly s;
    std::vector<Complex> roots;
};

/// Factor of one explicit factor of t.
Factor factor_explicit(const TrigPolynomial& t, Bits bits)
{
    const std::vector<Complex> c = t.coefficients(bits);
    const int nu = static_cast<int>(c.size()) - 1;
    if (nu == 0) {
        if (c[0].re.sign() <= 0) throw NotNonnegative("constant factor is not positive");
        return {{Complex(sqrt(c[0].re), Real(bits))}, {}};
    }
    // z^nu t(z) = sum_j c_{j - nu} z^j
    Poly lifted;
    for (int j = 0; j <= 2 * nu; ++j) {
        const int k = j - nu;
        lifted.push_back(k >= 0 ? c[static_cast<std::size_t>(k)] : c[static_cast<std::size_t>(-k)].conj());
    }
    std::vector<Complex> chosen;
    int inside = 0, outside = 0;
    for (auto& cl : clustered_roots(lifted, bits)) {
        const double rho = cl.root.abs().to_double();
        if (std::abs(rho - 1.0) < kCircleTol) {
            if (cl.multiplicity % 2 != 0)
                throw RootPairingFailed("odd multiplicity " + std::to_string(cl.multiplicity) +
                                        " for a root on the unit circle");
            for (int j = 0; j < cl.multiplicity / 2; ++j) chosen.push_back(cl.root);
        } else if (rho > 1.0) {
            for (int j = 0; j < cl.multiplicity; ++j) chosen.push_back(cl.root);
            outside += cl.multiplicity;
        } else {
            inside += cl.multiplicity;
        }
    }
    if (inside != outside || static_cast<int>(chosen.size()) != nu)
        throw RootPairingFailed(std::to_string(outside) + " roots outside the circle against " +
                                std::to_string(inside) + " inside for degree " + std::to_string(nu));

    // s = K prod (z - r_j), |K|^2 = |c_nu| / prod |r_j|, phase fixed by s(0) > 0.
    Real prod_abs(1.0, bits);
    Complex s0(1.0, 0.0, bits);
    Poly s{Complex(1.0, 0.0, bits)};
    for (const auto& r : chosen) {
        prod_abs *= r.abs();
        s0 *= -r;
        s = multiply(s, {-r, Complex(1.0, 0.0, bits)}, bits);
    }
    const Real K_abs = sqrt(c.back().abs() / prod_abs);
    const Complex phase = s0.conj() / s0.abs();
    const Complex K = phase * K_abs;
    for (auto& x : s) x = K * x;
    return {std::move(s), std::move(chosen)};
}

/// (1 - e^{-2i shift} z^2) / 2, the factor of sin^2(lambda - shift).
Factor factor_shifted_sine(double shift, Bits bits)
{
    const Complex e = Complex::unit(Real(-2.0 * shift, bits));
    Poly s{Complex(0.5, 0.0, bits), Complex(bits), e * Real(-0.5, bits)};
    const Complex r = Complex::unit(Real(shift, bits));
    return {std::move(s), {r, -r}};
}

}  // namespace

std::vector<std::complex<double>> SpectralFactor::coefficients() const
{
    std::vector<std::complex<double>> out;
    for (const auto& c : coeffs) out.push_back(c.to_std());
    return out;
}

SpectralFactor factorize(const TrigPolynomial& t, double tol, Bits bits)
{
    constexpr int kGrid = 8192;
    const double sup = t.grid_sup(kGrid);
    if (sup == 0.0) throw InvalidArgument("cannot factorize the zero polynomial");
    const Real lo = t.grid_minimum(kGrid, bits);
    if (lo.to_double() < -tol * sup)
        throw NotNonnegative("polynomial reaches " + lo.to_string(6) + " on the check grid");

    SpectralFactor out{{Complex(1.0, 0.0, bits)}, {}, Real(bits), 0.0};
    for (const auto& f : t.factors()) {
        if (const auto* s = std::get_if<TrigPolynomial::ShiftedSine>(&f)) {
            const Factor one = factor_shifted_sine(s->shift, bits);
            for (int p = 0; p < s->power; ++p) {
                out.coeffs = multiply(out.coeffs, one.s, bits);
                for (const auto& r : one.roots) out.roots.push_back(r.to_std());
            }
        } else {
            const Factor one = factor_explicit(TrigPolynomial({f}), bits);
            out.coeffs = multiply(out.coeffs, one.s, bits);
            for (const auto& r : one.roots) out.roots.push_back(r.to_std());
        }
    }
    while (out.coeffs.size() > 1 && out.coeffs.back().norm().to_double() == 0.0) out.coeffs.pop_back();
    out.geometric_mean = out.coeffs.front().norm();

    // Reconstruction check against t on the grid.
    std::vector<std::complex<double>> sd = out.coefficients();
    double worst = 0.0;
    for (int j = 0; j < kGrid; ++j) {
        const double lambda = -kPi + kTwoPi * j / kGrid;
        const std::complex<double> z = std::polar(1.0, lambda);
        std::complex<double> v = 0.0;
        for (std::size_t k = sd.size(); k-- > 0;) v = v * z + sd[k];
        worst = std::max(worst, std::abs(std::norm(v) - t.evaluate(lambda)));
    }
    out.reconstruction_error = worst / sup;
    if (out.reconstruction_error > tol)
        throw RootPairingFailed("reconstruction error " + std::to_string(out.reconstruction_error) + " above tolerance");
    return out;
}

Real geometric_mean_trig(const TrigPolynomial& t, Bits bits)
{
    return factorize(t, 1e-10, bits).geometric_mean;
}

}  // namespace predlab
