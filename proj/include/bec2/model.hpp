#pragma once

#include <array>
#include <optional>

namespace bec2
{

/// Coefficients of the two-mode Hamiltonian
///
///   H = a0 + delta_omega (a'a - b'b) + lam (e^{i phi} a'b + h.c.) + u_cross a'b'ab
///       + lambda2 (e^{2i phi} a'a'bb + h.c.) + mu ((a'a'ab - a'b'bb) e^{i phi} + h.c.)
///
/// on the sector of 2j particles. `u_cross` is the coefficient of the operator
/// a'b'ab itself (see quarter_u_from_cross() for the other common normalization).
struct CanonicalParams
{
    double a0 = 0.0;
    double delta_omega = 0.0;
    double lam = 0.0;
    double phi = 0.0;
    double u_cross = 0.0;
    double mu = 0.0;
    double lambda2 = 0.0;
    int two_j = 0;

    void validate() const;
};

/// Coordinates on the solvable manifold: H = U^dag (a1 Jz + a2 Jz^2) U with
/// U = exp[(theta/2)(e^{i phi} J+ - e^{-i phi} J-)].
struct ExactParams
{
    double a1 = 0.0;
    double a2 = 0.0;
    double theta = 0.0;
    double phi = 0.0;
    int two_j = 0;

    void validate() const;
};

/// How the rotation angle was obtained when inverting the mapping.
enum class AngleSource
{
    Linear,     ///< atan2 of the Josephson/detuning block
    Collision,  ///< linear block vanishes; angle read off the collision block
    Arbitrary,  ///< every coefficient vanishes; theta = 0 chosen
};

struct Inversion
{
    ExactParams params;
    AngleSource angle_source = AngleSource::Linear;
    double residual = 0.0;
};

CanonicalParams exact_to_canonical(const ExactParams& x);

/// Throws NotSolvable when the best fit misses by more than tol * scale.
Inversion canonical_to_exact(const CanonicalParams& c, double tol = 1e-9);

/// Euclidean distance from c to the closest manifold point with the same j and phi.
double solvability_residual(const CanonicalParams& c);

/// Rotation angle implied by the collision block alone (a2 = 6 lambda2 - u_cross,
/// a2 cos 2theta = -2 lambda2 - u_cross, a2 sin 2theta = 4 mu); empty when a2 = 0.
std::optional<double> collision_angle(const CanonicalParams& c);

/// Largest absolute coefficient; the reference for all relative manifold tolerances.
double coefficient_scale(const CanonicalParams& c);

/// Coefficient vector (a0, delta_omega, lam, u_cross, mu, lambda2).
std::array<double, 6> coefficients(const CanonicalParams& c);

/// The cross-collision constant in the normalization that multiplies the
/// collision term A2 (1 - 3 cos^2 theta) / 4; it is half the operator coefficient.
inline double quarter_u_from_cross(double u_cross) { return 0.5 * u_cross; }
inline double cross_from_quarter_u(double quarter_u) { return 2.0 * quarter_u; }

} // namespace bec2
