#pragma once

// Test-only reference computations. None of these reuse the library's
// algorithms: they are brute-force or extended-precision routes used to
// produce and check expected values.

#include "bec2/fock.hpp"
#include "bec2/model.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

namespace oracle
{

using Complex = std::complex<double>;
using Big = boost::multiprecision::cpp_bin_float_50;

/// Truncated two-mode ladder operators on |na> (x) |nb>, na, nb <= nmax,
/// built as Kronecker products of single-mode matrices.
struct TwoModeOps
{
    int nmax;
    Eigen::MatrixXcd a, ad, b, bd;

    explicit TwoModeOps(int nmax_) : nmax(nmax_)
    {
        const int d = nmax + 1;
        Eigen::MatrixXcd single = Eigen::MatrixXcd::Zero(d, d);
        for (int n = 1; n < d; ++n)
            single(n - 1, n) = std::sqrt(static_cast<double>(n));
        const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
        a = kron(single, id);
        b = kron(id, single);
        ad = a.adjoint();
        bd = b.adjoint();
    }

    static Eigen::MatrixXcd kron(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y)
    {
        Eigen::MatrixXcd out(x.rows() * y.rows(), x.cols() * y.cols());
        for (Eigen::Index i = 0; i < x.rows(); ++i)
            for (Eigen::Index j = 0; j < x.cols(); ++j)
                out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
        return out;
    }

    int index(int na, int nb) const { return na * (nmax + 1) + nb; }

    /// Restrict an operator to the sector na + nb = two_j, in ascending na.
    Eigen::MatrixXcd restrict_to(const Eigen::MatrixXcd& op, int two_j) const
    {
        Eigen::MatrixXcd out(two_j + 1, two_j + 1);
        for (int r = 0; r <= two_j; ++r)
            for (int c = 0; c <= two_j; ++c)
                out(r, c) = op(index(r, two_j - r), index(c, two_j - c));
        return out;
    }
};

/// The model Hamiltonian written directly with truncated ladder matrices
/// (nmax = 2j + 2 keeps every intermediate of a 4-operator word in range).
inline Eigen::MatrixXcd kron_hamiltonian(const bec2::CanonicalParams& c)
{
    const TwoModeOps o(c.two_j + 2);
    const Complex e1 = std::polar(1.0, c.phi);
    const Complex e2 = std::polar(1.0, 2.0 * c.phi);
    const Eigen::Index d = o.a.rows();
    Eigen::MatrixXcd h = c.a0 * Eigen::MatrixXcd::Identity(d, d);
    h += c.delta_omega * (o.ad * o.a - o.bd * o.b);
    Eigen::MatrixXcd hop = c.lam * e1 * o.ad * o.b;
    h += hop + hop.adjoint();
    h += c.u_cross * o.ad * o.bd * o.a * o.b;
    Eigen::MatrixXcd pair = c.lambda2 * e2 * o.ad * o.ad * o.b * o.b;
    h += pair + pair.adjoint();
    Eigen::MatrixXcd half = c.mu * e1 * (o.ad * o.ad * o.a * o.b - o.bd * o.ad * o.b * o.b);
    h += half + half.adjoint();
    return o.restrict_to(h, c.two_j);
}

inline Big big_factorial(int n)
{
    Big r = 1;
    for (int i = 2; i <= n; ++i)
        r *= i;
    return r;
}

/// Alternating factorial sum for d^j_{m,m0}(theta), summed over
/// every s for which no factorial argument is negative. Evaluated in 50 digits.
inline double factorial_sum_d(int two_j, int two_m, int two_m0, double theta)
{
    const int jpm0 = (two_j + two_m0) / 2, jmm0 = (two_j - two_m0) / 2;
    const int jpm = (two_j + two_m) / 2, jmm = (two_j - two_m) / 2;
    const int m_minus_m0 = (two_m - two_m0) / 2;
    const Big half = Big(theta) / 2;
    const Big c = boost::multiprecision::cos(half);
    const Big s = boost::multiprecision::sin(half);
    const Big root = boost::multiprecision::sqrt(big_factorial(jpm0) * big_factorial(jmm0) *
                                                 big_factorial(jpm) * big_factorial(jmm));
    Big sum = 0;
    for (int k = 0; k <= two_j; ++k)
    {
        const int d1 = jpm0 - k, d3 = jmm - k, d4 = k + m_minus_m0;
        if (d1 < 0 || d3 < 0 || d4 < 0)
            continue;
        const int cpow = two_j - 2 * k - m_minus_m0;
        const int spow = 2 * k + m_minus_m0;
        Big term = root / (big_factorial(d1) * big_factorial(k) * big_factorial(d3) * big_factorial(d4));
        term *= boost::multiprecision::pow(c, cpow) * boost::multiprecision::pow(s, spow);
        if ((k + m_minus_m0) % 2 != 0)
            term = -term;
        sum += term;
    }
    return static_cast<double>(sum);
}

/// log of C(2j, j + k) cos(theta/2)^{2(j+k)} sin(theta/2)^{2(j-k)}.
inline double log_binomial_probability(int two_j, int two_k, double theta)
{
    const int up = (two_j + two_k) / 2, down = (two_j - two_k) / 2;
    return std::lgamma(two_j + 1.0) - std::lgamma(up + 1.0) - std::lgamma(down + 1.0) +
           2.0 * up * std::log(std::abs(std::cos(theta / 2))) +
           2.0 * down * std::log(std::abs(std::sin(theta / 2)));
}

/// Dense matrix exponential by scaling and squaring a Taylor series.
inline Eigen::MatrixXcd expm_taylor(const Eigen::MatrixXcd& g)
{
    const double norm = g.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = 0;
    double scaled = norm;
    while (scaled > 0.25)
    {
        scaled /= 2.0;
        ++squarings;
    }
    const Eigen::MatrixXcd x = g / std::pow(2.0, squarings);
    const Eigen::Index n = g.rows();
    Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(n, n);
    Eigen::MatrixXcd sum = term;
    for (int k = 1; k < 30; ++k)
    {
        term = term * x / static_cast<double>(k);
        sum += term;
    }
    for (int i = 0; i < squarings; ++i)
        sum = sum * sum;
    return sum;
}

/// Von Neumann entropy of mode a from the full two-mode density matrix.
inline double partial_trace_entropy(const bec2::StateVector& s)
{
    const int two_j = s.basis.two_j();
    const int d = two_j + 1;
    // Product-space amplitudes psi(na, nb).
    Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(d, d);
    for (int na = 0; na <= two_j; ++na)
        psi(na, two_j - na) = s.amps(na);
    const Eigen::MatrixXcd rho_a = psi * psi.adjoint();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho_a);
    double sbits = 0.0;
    for (double p : es.eigenvalues())
        if (p > 1e-300)
            sbits -= p * std::log2(p);
    return sbits;
}

/// Every k minimizing a1 k + a2 k^2, compared with a relative 1e-12 tie tolerance.
inline std::vector<int> brute_force_minimizers(double a1, double a2, int two_j)
{
    std::vector<double> e;
    for (int tk = -two_j; tk <= two_j; tk += 2)
        e.push_back(a1 * 0.5 * tk + a2 * 0.25 * tk * tk);
    const double lo = *std::min_element(e.begin(), e.end());
    std::vector<int> out;
    for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i] - lo <= 1e-12 * std::max(std::abs(lo), std::abs(e[i])))
            out.push_back(2 * static_cast<int>(i) - two_j);
    return out;
}

inline std::mt19937_64& rng()
{
    static std::mt19937_64 gen(20240611);
    return gen;
}

inline double uniform(double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline int uniform_int(int lo, int hi)
{
    return std::uniform_int_distribution<int>(lo, hi)(rng());
}

inline bec2::CanonicalParams random_canonical(int two_j)
{
    bec2::CanonicalParams c;
    c.a0 = uniform(-3, 3);
    c.delta_omega = uniform(-3, 3);
    c.lam = uniform(-3, 3);
    c.phi = uniform(0, 2 * std::numbers::pi);
    c.u_cross = uniform(-3, 3);
    c.mu = uniform(-3, 3);
    c.lambda2 = uniform(-3, 3);
    c.two_j = two_j;
    return c;
}

inline bec2::ExactParams random_exact(int max_two_j, double coeff = 10.0)
{
    return {uniform(-coeff, coeff), uniform(-coeff, coeff), uniform(0.01, std::numbers::pi - 0.01),
            uniform(0, 2 * std::numbers::pi), uniform_int(0, max_two_j)};
}

inline Eigen::VectorXcd random_unit(Eigen::Index n, bool real_only = false)
{
    Eigen::VectorXcd v(n);
    std::normal_distribution<double> g;
    for (Eigen::Index i = 0; i < n; ++i)
        v(i) = real_only ? Complex(g(rng()), 0.0) : Complex(g(rng()), g(rng()));
    return v / v.norm();
}

inline double max_abs_diff(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y)
{
    return (x - y).cwiseAbs().maxCoeff();
}

} // namespace oracle
