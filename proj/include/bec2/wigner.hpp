#pragma once

// Wigner small-d rows <j,k| exp[(theta/2)(J+ - J-)] |j,k0> for every k, written
// for a generic real type so the same code runs in double and long double.

#include "bec2/errors.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <string>

namespace bec2::wigner
{

template <typename Real>
using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

namespace detail
{

/// <i+1| J+ |i> in the 2j+1 dimensional sector.
template <typename Real>
Real raise(int two_j, int i)
{
    using std::sqrt;
    return sqrt(static_cast<Real>(i + 1) * static_cast<Real>(two_j - i));
}

template <typename Real>
int sign_pow(Real base, int exponent)
{
    return (base < Real(0) && exponent % 2 != 0) ? -1 : 1;
}

inline void check_projection(int two_j, int two_k0)
{
    if (two_j < 0)
        throw InvalidArgument("two_j must be nonnegative");
    if (std::abs(two_k0) > two_j || (two_j + two_k0) % 2 != 0)
        throw ProjectionOutOfRange("projection 2k0 = " + std::to_string(two_k0) +
                                   " is not allowed for 2j = " + std::to_string(two_j));
}

constexpr double kRescaleAbove = 1e150;

} // namespace detail

/// The rotated state U0|k0> is the eigenvector of cos(theta) Jz - sin(theta) Jx
/// with eigenvalue k0, i.e. the solution of a three-term recurrence. It is run
/// inward from both ends, where it is dominant, and the two halves are matched
/// near the mean projection k0 cos(theta). End signs come from the closed forms
///   d(k=j)  =  sqrt(C) cos(theta/2)^(j+k0) sin(theta/2)^(j-k0)
///   d(k=-j) =  sqrt(C) cos(theta/2)^(j-k0) (-sin(theta/2))^(j+k0).
template <typename Real>
RealVector<Real> row_by_recurrence(int two_j, int two_k0, Real theta)
{
    using std::abs;
    using std::cos;
    using std::sin;

    detail::check_projection(two_j, two_k0);
    const int n = two_j + 1;
    RealVector<Real> v = RealVector<Real>::Zero(n);
    const int up = (two_j + two_k0) / 2;   // j + k0
    const int down = (two_j - two_k0) / 2; // j - k0

    const Real s = sin(theta);
    const Real c = cos(theta);
    if (two_j == 0)
    {
        v(0) = Real(1);
        return v;
    }
    if (s == Real(0))
    {
        // theta a multiple of pi with an exactly representable sine (theta == 0 in practice)
        v((two_k0 + two_j) / 2) = c > Real(0) ? Real(1) : Real(-1);
        return v;
    }

    const Real k0 = Real(two_k0) / Real(2);
    const Real half_s = s / Real(2);
    auto kk = [two_j](int i) { return (Real(2 * i) - Real(two_j)) / Real(2); };
    // k cos(theta) - k0 with the integer part split off, so small theta and
    // theta near pi keep their leading digits.
    const Real sh = sin(theta / 2);
    const Real ch = cos(theta / 2);
    auto diag = [&](int i) {
        return c >= Real(0) ? (kk(i) - k0) - Real(2) * kk(i) * sh * sh
                            : -(kk(i) + k0) + Real(2) * kk(i) * ch * ch;
    };

    // Matching index near the mean projection.
    int m = static_cast<int>(std::lround(static_cast<double>(Real(two_j) / Real(2) + k0 * c)));
    m = std::clamp(m, 0, n - 2);

    // Downward from the top end, filling indices m..n-1.
    RealVector<Real> top = RealVector<Real>::Zero(n);
    top(n - 1) = Real(detail::sign_pow(cos(theta / 2), up) * detail::sign_pow(sin(theta / 2), down));
    for (int i = n - 1; i > m; --i)
    {
        const Real next = i + 1 < n ? detail::raise<Real>(two_j, i) * top(i + 1) : Real(0);
        top(i - 1) = (diag(i) * top(i) - half_s * next) / (half_s * detail::raise<Real>(two_j, i - 1));
        if (abs(top(i - 1)) > Real(detail::kRescaleAbove))
            top.segment(i - 1, n - i + 1) /= Real(detail::kRescaleAbove);
    }

    // Upward from the bottom end, filling indices 0..m+1.
    RealVector<Real> bottom = RealVector<Real>::Zero(n);
    bottom(0) = Real(detail::sign_pow(cos(theta / 2), down) * detail::sign_pow(-sin(theta / 2), up));
    for (int i = 0; i < m + 1; ++i)
    {
        const Real prev = i > 0 ? detail::raise<Real>(two_j, i - 1) * bottom(i - 1) : Real(0);
        bottom(i + 1) = (diag(i) * bottom(i) - half_s * prev) / (half_s * detail::raise<Real>(two_j, i));
        if (abs(bottom(i + 1)) > Real(detail::kRescaleAbove))
            bottom.segment(0, i + 2) /= Real(detail::kRescaleAbove);
    }

    // Least-squares scale of the bottom half onto the top half over {m, m+1}.
    const Real num = top(m) * bottom(m) + top(m + 1) * bottom(m + 1);
    const Real den = bottom(m) * bottom(m) + bottom(m + 1) * bottom(m + 1);
    const Real ratio = num / den;

    v.segment(m, n - m) = top.segment(m, n - m);
    v.segment(0, m) = ratio * bottom.segment(0, m);
    v /= v.norm();
    return v;
}

/// Bessel J_0..J_count-1 at x >= 0 by Miller's backward recurrence, normalized
/// with J_0 + 2 sum J_2k = 1.
template <typename Real>
RealVector<Real> bessel_sequence(Real x, int count)
{
    using std::abs;
    using std::cbrt;
    using std::ceil;
    RealVector<Real> out = RealVector<Real>::Zero(count);
    if (x == Real(0))
    {
        out(0) = Real(1);
        return out;
    }
    const int start = std::max(count, static_cast<int>(ceil(static_cast<double>(x + Real(30) * cbrt(x) + Real(60)))));
    RealVector<Real> j = RealVector<Real>::Zero(start + 2);
    j(start) = Real(1e-300L);
    for (int k = start; k > 0; --k)
    {
        j(k - 1) = Real(2 * k) / x * j(k) - j(k + 1);
        if (abs(j(k - 1)) > Real(detail::kRescaleAbove))
            j.segment(k - 1, start + 3 - k) /= Real(detail::kRescaleAbove);
    }
    Real norm = j(0);
    for (int k = 2; k <= start; k += 2)
        norm += Real(2) * j(k);
    for (int k = 0; k < count; ++k)
        out(k) = j(k) / norm;
    return out;
}

/// exp(G) e_k0 with G = (theta/2)(J+ - J-) real skew tridiagonal, via the
/// Chebyshev-Bessel series exp(G) = sum_n eps_n J_n(R) P_n(G/R), R = |theta| j,
/// P_0 = 1, P_1 = y, P_{n+1} = 2 y P_n + P_{n-1}. Renormalized at the end.
template <typename Real>
RealVector<Real> row_by_generator_exponential(int two_j, int two_k0, Real theta)
{
    using std::abs;
    using std::cbrt;
    detail::check_projection(two_j, two_k0);
    const int n = two_j + 1;
    RealVector<Real> e = RealVector<Real>::Zero(n);
    e((two_k0 + two_j) / 2) = Real(1);
    const Real radius = abs(theta) * Real(two_j) / Real(2);
    if (radius == Real(0))
        return e;

    RealVector<Real> off(n > 1 ? n - 1 : 0); // y(i+1, i) = off(i), y(i, i+1) = -off(i)
    for (int i = 0; i + 1 < n; ++i)
        off(i) = theta / Real(2) * detail::raise<Real>(two_j, i) / radius;
    auto apply_y = [&](const RealVector<Real>& x) {
        RealVector<Real> out = RealVector<Real>::Zero(n);
        for (int i = 0; i + 1 < n; ++i)
        {
            out(i + 1) += off(i) * x(i);
            out(i) -= off(i) * x(i + 1);
        }
        return out;
    };

    const int terms = static_cast<int>(static_cast<double>(radius + Real(25) * cbrt(radius) + Real(40)));
    const RealVector<Real> bessel = bessel_sequence<Real>(radius, terms);

    RealVector<Real> p_prev = e;
    RealVector<Real> p_curr = apply_y(e);
    RealVector<Real> sum = bessel(0) * p_prev + Real(2) * bessel(1) * p_curr;
    for (int k = 2; k < terms; ++k)
    {
        RealVector<Real> p_next = Real(2) * apply_y(p_curr) + p_prev;
        sum += Real(2) * bessel(k) * p_next;
        p_prev = std::move(p_curr);
        p_curr = std::move(p_next);
    }
    return sum / sum.norm();
}

} // namespace bec2::wigner
