#include "bec2/exact.hpp"

#include "bec2/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <limits>
#include <numbers>
#include <numeric>

namespace bec2
{

WignerRow wigner_row(int two_j, int two_k0, double theta, WignerMethod method)
{
    WignerRow row{two_j, two_k0, theta, {}, method};
    row.amps = method == WignerMethod::Recurrence
                   ? wigner::row_by_recurrence<double>(two_j, two_k0, theta)
                   : wigner::row_by_generator_exponential<double>(two_j, two_k0, theta);
    return row;
}

Eigen::VectorXd EnergyLadder::energies() const
{
    Eigen::VectorXd e(two_j + 1);
    for (int i = 0; i <= two_j; ++i)
        e(i) = energy(2 * i - two_j);
    return e;
}

StateVector eigenstate(const ExactParams& x, int two_k)
{
    x.validate();
    const FockBasis basis(x.two_j);
    const Eigen::VectorXd d = wigner_row(x.two_j, two_k, -x.theta).amps;
    Eigen::VectorXcd amps(basis.dim());
    for (Eigen::Index i = 0; i < basis.dim(); ++i)
        amps(i) = d(i) * std::polar(1.0, 0.5 * (basis.two_k(i) - two_k) * x.phi);
    return {basis, std::move(amps)};
}

std::vector<int> ground_minimizers(double a1, double a2, int two_j)
{
    const EnergyLadder ladder{a1, a2, two_j};
    double best = std::numeric_limits<double>::infinity();
    for (int tk = -two_j; tk <= two_j; tk += 2)
        best = std::min(best, ladder.energy(tk));
    std::vector<int> out;
    for (int tk = -two_j; tk <= two_j; tk += 2)
    {
        const double e = ladder.energy(tk);
        if (e - best <= 1e-12 * std::max(std::abs(best), std::abs(e)))
            out.push_back(tk);
    }
    return out;
}

namespace
{

/// Prefer smaller |k|, then the negative member of a +-k pair.
bool preferred(int lhs, int rhs)
{
    if (std::abs(lhs) != std::abs(rhs))
        return std::abs(lhs) < std::abs(rhs);
    return lhs < rhs;
}

GroundIndex closed_form_ground(double a1, double a2, int two_j)
{
    const EnergyLadder ladder{a1, a2, two_j};
    auto tie = [&](int x, int y) {
        const double ex = ladder.energy(x);
        const double ey = ladder.energy(y);
        return std::abs(ex - ey) <= 1e-12 * std::max(std::abs(ex), std::abs(ey));
    };

    if (a2 > 0.0)
    {
        const double vertex = -a1 / (2.0 * a2);
        if (std::abs(vertex) > 0.5 * two_j)
            return {vertex > 0.0 ? two_j : -two_j, false};
        // Allowed projections bracketing the vertex (k - j integer).
        const double offset = 0.5 * two_j;
        const int lo = 2 * static_cast<int>(std::floor(vertex + offset)) - two_j;
        const int hi = std::min(lo + 2, two_j);
        if (lo == hi)
            return {lo, false};
        if (tie(lo, hi))
            return {preferred(lo, hi) ? lo : hi, true};
        return {ladder.energy(lo) < ladder.energy(hi) ? lo : hi, false};
    }
    if (a2 < 0.0)
    {
        if (a1 == 0.0 || tie(two_j, -two_j))
            return {-two_j, two_j != 0};
        return {a1 < 0.0 ? two_j : -two_j, false};
    }
    return {a1 < 0.0 ? two_j : -two_j, false};
}

} // namespace

GroundIndex ground_index(double a1, double a2, int two_j)
{
    if (two_j < 0)
        throw InvalidArgument("two_j must be nonnegative");
    if (a1 == 0.0 && a2 == 0.0)
        throw AllDegenerate("a1 = a2 = 0: every projection is a ground state");

    const GroundIndex g = closed_form_ground(a1, a2, two_j);
    const std::vector<int> all = ground_minimizers(a1, a2, two_j);
    const bool found = std::find(all.begin(), all.end(), g.two_k0) != all.end();
    if (!found || g.degenerate != (all.size() > 1))
        throw std::logic_error("ground_index: closed form disagrees with exhaustive search");
    return g;
}

Eigen::VectorXd ground_distribution(const ExactParams& x, int two_k0)
{
    x.validate();
    return wigner_row(x.two_j, two_k0, x.theta).probabilities();
}

Eigen::VectorXcd eigenbasis_coefficients(const ExactParams& x, const StateVector& s)
{
    if (s.basis.two_j() != x.two_j)
        throw BasisMismatch("state and parameters live on different sectors");
    const FockBasis& basis = s.basis;
    Eigen::VectorXcd c(basis.dim());
    for (Eigen::Index i = 0; i < basis.dim(); ++i)
        c(i) = eigenstate(x, basis.two_k(i)).amps.dot(s.amps);
    return c;
}

StateVector state_from_eigenbasis(const ExactParams& x, const Eigen::VectorXcd& coeffs)
{
    const FockBasis basis(x.two_j);
    if (coeffs.size() != basis.dim())
        throw BasisMismatch("coefficient vector length does not match the sector");
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(basis.dim());
    for (Eigen::Index i = 0; i < basis.dim(); ++i)
        if (coeffs(i) != Complex(0.0))
            amps += coeffs(i) * eigenstate(x, basis.two_k(i)).amps;
    return {basis, std::move(amps)};
}

RelativePopulation::RelativePopulation(const ExactParams& x, const Eigen::VectorXcd& coeffs)
    : phi_(x.phi)
{
    x.validate();
    const FockBasis basis(x.two_j);
    if (coeffs.size() != basis.dim())
        throw BadCoefficients("coefficient vector length does not match the sector");
    if (std::abs(coeffs.norm() - 1.0) > 1e-8)
        throw BadCoefficients("coefficients must be normalized");

    const EnergyLadder ladder{x.a1, x.a2, x.two_j};
    double jz = 0.0;
    for (Eigen::Index i = 0; i < basis.dim(); ++i)
        jz += basis.k(i) * std::norm(coeffs(i));
    static_ = 2.0 * std::cos(x.theta) * jz;
    prefactor_ = -2.0 * std::sin(x.theta);

    const Eigen::Index n = basis.dim();
    weights_.resize(n - 1);
    frequencies_.resize(n - 1);
    for (Eigen::Index i = 1; i < n; ++i)
    {
        const double lower = std::sqrt(static_cast<double>(i) * static_cast<double>(x.two_j - i + 1));
        weights_(i - 1) = lower * std::conj(coeffs(i)) * coeffs(i - 1);
        frequencies_(i - 1) = ladder.energy(basis.two_k(i)) - ladder.energy(basis.two_k(i - 1));
    }
}

double RelativePopulation::operator()(double t) const
{
    double osc = 0.0;
    for (Eigen::Index i = 0; i < weights_.size(); ++i)
        osc += (weights_(i) * std::polar(1.0, phi_ + frequencies_(i) * t)).real();
    return static_ + prefactor_ * osc;
}

double RelativePopulation::oscillation_envelope(double t) const
{
    Complex sum = 0.0;
    for (Eigen::Index i = 0; i < weights_.size(); ++i)
        sum += weights_(i) * std::polar(1.0, frequencies_(i) * t);
    return std::abs(prefactor_) * std::abs(sum);
}

double mean_m_analytic(const ExactParams& x, const Eigen::VectorXcd& coeffs, double t)
{
    return RelativePopulation(x, coeffs)(t);
}

double collapse_time(double a2, int n)
{
    if (a2 == 0.0)
        throw NoCollisions("a2 = 0: the spectrum is linear and phases never dephase");
    if (n < 0)
        throw InvalidArgument("collapse index must be nonnegative");
    return (2.0 * n + 1.0) * std::numbers::pi / (2.0 * std::abs(a2));
}

std::optional<Rational> rational_approximation(double x, std::int64_t cap, double rel_tol)
{
    if (!std::isfinite(x))
        return std::nullopt;
    const double target = std::abs(x);
    const double tol = rel_tol * std::max(1.0, target);
    // Convergents h/k of the continued fraction of |x|.
    std::int64_t h_prev = 1, h = static_cast<std::int64_t>(std::floor(target));
    std::int64_t k_prev = 0, k = 1;
    double frac = target - std::floor(target);
    while (true)
    {
        if (std::abs(target - static_cast<double>(h) / static_cast<double>(k)) <= tol)
        {
            const std::int64_t sign = x < 0.0 ? -1 : 1;
            return Rational{sign * h, k};
        }
        if (frac <= 0.0)
            return std::nullopt;
        const double inv = 1.0 / frac;
        const double a_real = std::floor(inv);
        if (a_real > static_cast<double>(cap))
            return std::nullopt;
        const auto a = static_cast<std::int64_t>(a_real);
        const std::int64_t h_next = a * h + h_prev;
        const std::int64_t k_next = a * k + k_prev;
        if (k_next > cap)
            return std::nullopt;
        h_prev = h;
        h = h_next;
        k_prev = k;
        k = k_next;
        frac = inv - a_real;
    }
}

RevivalPeriod revival_period(Rational ratio, double a2)
{
    if (a2 == 0.0)
        throw NoCollisions("a2 = 0: no revivals");
    if (ratio.den == 0)
        throw InvalidArgument("rational with zero denominator");
    std::int64_t p = ratio.num;
    std::int64_t q = ratio.den;
    if (q < 0)
    {
        p = -p;
        q = -q;
    }
    const std::int64_t g = std::gcd(p, q);
    if (g > 1)
    {
        p /= g;
        q /= g;
    }
    RevivalPeriod r;
    r.p = p;
    r.q = q;
    r.p_r = ((p - q) % 2 == 0) ? q : 2 * q;
    r.t1 = static_cast<double>(r.p_r) * std::numbers::pi / std::abs(a2);
    return r;
}

std::optional<RevivalPeriod> revival_period(double a1, double a2)
{
    if (a2 == 0.0)
        throw NoCollisions("a2 = 0: no revivals");
    const auto ratio = rational_approximation(a1 / a2, kRevivalDenominatorCap, kRevivalRelTolerance);
    if (!ratio)
        return std::nullopt;
    RevivalPeriod r = revival_period(*ratio, a2);
    r.reconstructed = true;
    return r;
}

} // namespace bec2
