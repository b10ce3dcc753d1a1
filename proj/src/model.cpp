#include "bec2/model.hpp"

#include "bec2/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

namespace bec2
{

namespace
{

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool finite(double v) { return std::isfinite(v); }

double wrap_phase(double phi)
{
    double w = std::fmod(phi, kTwoPi);
    if (w < 0.0)
        w += kTwoPi;
    return w >= kTwoPi ? 0.0 : w;
}

/// Collision-block shape at angle theta: coefficients of (a0, u, mu, Lambda)
/// per unit a2.
std::array<double, 4> collision_shape(double theta, int two_j)
{
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double n = two_j;
    return {(c * c * n * n + s * s * n) / 4.0, (1.0 - 3.0 * c * c) / 2.0, c * s / 2.0,
            s * s / 4.0};
}

struct Fit
{
    double a1 = 0.0;
    double a2 = 0.0;
    double theta = 0.0;
    double defect = 0.0;
};

double defect_of(const CanonicalParams& c, const ExactParams& x)
{
    const auto target = coefficients(c);
    const auto model = coefficients(exact_to_canonical(x));
    double sum = 0.0;
    for (std::size_t i = 0; i < target.size(); ++i)
        sum += (target[i] - model[i]) * (target[i] - model[i]);
    return std::sqrt(sum);
}

/// Least-squares a1 and a2 for a fixed angle.
Fit fit_at(const CanonicalParams& c, double theta)
{
    Fit f;
    f.theta = theta;
    f.a1 = 2.0 * (c.delta_omega * std::cos(theta) + c.lam * std::sin(theta));
    const auto shape = collision_shape(theta, c.two_j);
    const std::array<double, 4> y{c.a0, c.u_cross, c.mu, c.lambda2};
    double fy = 0.0;
    double ff = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
    {
        fy += shape[i] * y[i];
        ff += shape[i] * shape[i];
    }
    f.a2 = ff > 0.0 ? fy / ff : 0.0;
    f.defect = defect_of(c, ExactParams{f.a1, f.a2, theta, c.phi, c.two_j});
    return f;
}

/// Fit with the linear block's own angle and sign convention (a1 >= 0 iff lam >= 0).
std::optional<Fit> linear_candidate(const CanonicalParams& c)
{
    if (c.delta_omega == 0.0 && c.lam == 0.0)
        return std::nullopt;
    // +0.0 keeps atan2 on the [0, pi] branch for lam == -0.0
    const double lam = c.lam == 0.0 ? 0.0 : c.lam;
    const double dw = c.delta_omega == 0.0 ? 0.0 : c.delta_omega;
    const bool flip = lam < 0.0;
    const double theta = flip ? std::atan2(-lam, -dw) : std::atan2(lam, dw);
    Fit f = fit_at(c, std::clamp(theta, 0.0, std::numbers::pi));
    f.a1 = (flip ? -2.0 : 2.0) * std::hypot(c.delta_omega, c.lam);
    f.defect = defect_of(c, ExactParams{f.a1, f.a2, f.theta, c.phi, c.two_j});
    return f;
}

/// Angle from the collision block alone: a2 = 6 Lambda - u, a2 cos 2theta =
/// -2 Lambda - u, a2 sin 2theta = 4 mu.
std::optional<Fit> collision_candidate(const CanonicalParams& c)
{
    const double a2 = 6.0 * c.lambda2 - c.u_cross;
    if (a2 == 0.0)
        return std::nullopt;
    const double sgn = a2 > 0.0 ? 1.0 : -1.0;
    double two_theta = std::atan2(sgn * 4.0 * c.mu, sgn * (-2.0 * c.lambda2 - c.u_cross));
    if (two_theta < 0.0)
        two_theta += kTwoPi;
    return fit_at(c, 0.5 * two_theta);
}

/// Grid scan plus golden-section refinement of the fitted defect over theta.
Fit scanned_candidate(const CanonicalParams& c)
{
    constexpr int kGrid = 181;
    const double step = std::numbers::pi / (kGrid - 1);
    int best = 0;
    double best_defect = fit_at(c, 0.0).defect;
    for (int i = 1; i < kGrid; ++i)
    {
        const double d = fit_at(c, i * step).defect;
        if (d < best_defect)
        {
            best_defect = d;
            best = i;
        }
    }
    double lo = std::max(0.0, (best - 1) * step);
    double hi = std::min(std::numbers::pi, (best + 1) * step);
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - ratio * (hi - lo);
    double x2 = lo + ratio * (hi - lo);
    double f1 = fit_at(c, x1).defect;
    double f2 = fit_at(c, x2).defect;
    for (int it = 0; it < 100 && hi - lo > 1e-15; ++it)
    {
        if (f1 < f2)
        {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = fit_at(c, x1).defect;
        }
        else
        {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = fit_at(c, x2).defect;
        }
    }
    Fit refined = fit_at(c, 0.5 * (lo + hi));
    Fit on_grid = fit_at(c, best * step);
    return refined.defect <= on_grid.defect ? refined : on_grid;
}

Fit best_fit(const CanonicalParams& c)
{
    Fit best = scanned_candidate(c);
    for (const auto& cand : {linear_candidate(c), collision_candidate(c)})
        if (cand && cand->defect <= best.defect)
            best = *cand;
    return best;
}

} // namespace

std::optional<double> collision_angle(const CanonicalParams& c)
{
    const auto cand = collision_candidate(c);
    if (!cand)
        return std::nullopt;
    return cand->theta;
}

void CanonicalParams::validate() const
{
    if (two_j < 0)
        throw InvalidArgument("two_j must be nonnegative");
    for (double v : {a0, delta_omega, lam, phi, u_cross, mu, lambda2})
        if (!finite(v))
            throw InvalidArgument("canonical coefficients must be finite");
    if (phi < 0.0 || phi >= kTwoPi)
        throw InvalidArgument("phi must lie in [0, 2pi)");
}

void ExactParams::validate() const
{
    if (two_j < 0)
        throw InvalidArgument("two_j must be nonnegative");
    for (double v : {a1, a2, theta, phi})
        if (!finite(v))
            throw InvalidArgument("exact coordinates must be finite");
    if (theta < 0.0 || theta > std::numbers::pi)
        throw InvalidArgument("theta must lie in [0, pi]");
}

std::array<double, 6> coefficients(const CanonicalParams& c)
{
    return {c.a0, c.delta_omega, c.lam, c.u_cross, c.mu, c.lambda2};
}

double coefficient_scale(const CanonicalParams& c)
{
    double s = 0.0;
    for (double v : coefficients(c))
        s = std::max(s, std::abs(v));
    return s;
}

CanonicalParams exact_to_canonical(const ExactParams& x)
{
    x.validate();
    const double c = std::cos(x.theta);
    const double s = std::sin(x.theta);
    const double n = x.two_j;

    CanonicalParams out;
    out.a0 = x.a2 * (c * c * n * n + s * s * n) / 4.0;
    out.delta_omega = x.a1 * c / 2.0;
    out.lam = x.a1 * s / 2.0;
    out.phi = wrap_phase(x.phi);
    out.u_cross = x.a2 * (1.0 - 3.0 * c * c) / 2.0;
    out.mu = x.a2 * c * s / 2.0;
    out.lambda2 = x.a2 * s * s / 4.0;
    out.two_j = x.two_j;
    return out;
}

double solvability_residual(const CanonicalParams& c)
{
    c.validate();
    return best_fit(c).defect;
}

Inversion canonical_to_exact(const CanonicalParams& c, double tol)
{
    c.validate();
    if (!(tol > 0.0))
        throw InvalidArgument("tolerance must be positive");

    const double scale = coefficient_scale(c);
    const double allowed = tol * scale;
    // Analytic candidates first: on the manifold they are exact, while the scan
    // is only accurate to its refinement tolerance.
    std::optional<Fit> chosen;
    for (const auto& cand : {linear_candidate(c), collision_candidate(c)})
        if (!chosen && cand && cand->defect <= allowed)
            chosen = cand;
    if (!chosen)
    {
        const Fit fit = best_fit(c);
        if (fit.defect > allowed)
            throw NotSolvable("parameters are off the solvable manifold (residual " +
                              std::to_string(fit.defect) + ", allowed " + std::to_string(allowed) +
                              ")");
        chosen = fit;
    }
    const Fit& fit = *chosen;

    Inversion inv;
    inv.residual = fit.defect;
    if (c.delta_omega != 0.0 || c.lam != 0.0)
    {
        inv.angle_source = AngleSource::Linear;
        inv.params = ExactParams{fit.a1, fit.a2, fit.theta, c.phi, c.two_j};
    }
    else if (c.u_cross != 0.0 || c.mu != 0.0 || c.lambda2 != 0.0 || c.a0 != 0.0)
    {
        inv.angle_source = AngleSource::Collision;
        inv.params = ExactParams{0.0, fit.a2, fit.theta, c.phi, c.two_j};
    }
    else
    {
        inv.angle_source = AngleSource::Arbitrary;
        inv.params = ExactParams{0.0, 0.0, 0.0, c.phi, c.two_j};
    }
    return inv;
}

} // namespace bec2
