#pragma once

#include "bec2/fock.hpp"
#include "bec2/model.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <vector>

namespace bec2
{

enum class WignerMethod
{
    Recurrence,           ///< two-sided three-term recurrence, O(j)
    GeneratorExponential, ///< Chebyshev-Bessel propagation of the skew generator, O(theta j^2)
};

/// amps[i] = <j, k_i| exp[(theta/2)(J+ - J-)] |j, k0>, k_i = i - j.
struct WignerRow
{
    int two_j = 0;
    int two_k0 = 0;
    double theta = 0.0;
    Eigen::VectorXd amps;
    WignerMethod method = WignerMethod::Recurrence;

    Eigen::VectorXd probabilities() const { return amps.array().square(); }
};

WignerRow wigner_row(int two_j, int two_k0, double theta,
                     WignerMethod method = WignerMethod::Recurrence);

/// Spectrum a1 k + a2 k^2 over k = -j..j in basis order.
struct EnergyLadder
{
    double a1 = 0.0;
    double a2 = 0.0;
    int two_j = 0;

    double energy(int two_k) const
    {
        const double k = 0.5 * two_k;
        return a1 * k + a2 * k * k;
    }
    /// E(k-1) - E(k)
    double gap(int two_k) const { return -a1 - a2 * (two_k - 1); }
    Eigen::VectorXd energies() const;
};

/// Eigenstate U^dag |j, k> of the manifold Hamiltonian with parameters x.
StateVector eigenstate(const ExactParams& x, int two_k);

struct GroundIndex
{
    int two_k0 = 0;
    bool degenerate = false;
};

/// Minimizer of a1 k + a2 k^2 over the allowed projections. Ties resolve to the
/// smaller |k|, then the negative one, with `degenerate` set.
GroundIndex ground_index(double a1, double a2, int two_j);

/// All minimizers by exhaustive search (relative tie tolerance 1e-12).
std::vector<int> ground_minimizers(double a1, double a2, int two_j);

/// Number distribution of U^dag |j, k0>, indexed like the Fock basis.
Eigen::VectorXd ground_distribution(const ExactParams& x, int two_k0);

/// Eigenbasis coefficients C_k of a state: psi = sum_k C_k U^dag |j,k>.
Eigen::VectorXcd eigenbasis_coefficients(const ExactParams& x, const StateVector& s);

/// Fock amplitudes of sum_k C_k U^dag |j,k>.
StateVector state_from_eigenbasis(const ExactParams& x, const Eigen::VectorXcd& coeffs);

/// <a'a - b'b>(t) for the state sum_k C_k U^dag |j,k> evolving under the manifold
/// Hamiltonian. Throws BadCoefficients when |C| deviates from 1 by more than 1e-8.
double mean_m_analytic(const ExactParams& x, const Eigen::VectorXcd& coeffs, double t);

/// Precomputed form of mean_m_analytic() for evaluating many times.
class RelativePopulation
{
public:
    RelativePopulation(const ExactParams& x, const Eigen::VectorXcd& coeffs);

    double operator()(double t) const;
    /// cos(theta) * 2 sum k |C_k|^2, the time-independent part.
    double static_part() const { return static_; }
    /// Modulus of the complex oscillating sum at time t (envelope of the coherent part).
    double oscillation_envelope(double t) const;

private:
    double static_ = 0.0;
    double prefactor_ = 0.0;       // -2 sin(theta)
    double phi_ = 0.0;
    Eigen::VectorXcd weights_;     // alpha_{m-1} conj(C_m) C_{m-1}
    Eigen::VectorXd frequencies_;  // E_m - E_{m-1}
};

/// (2n + 1) pi / (2 |a2|). Throws NoCollisions when a2 == 0.
double collapse_time(double a2, int n);

struct Rational
{
    std::int64_t num = 0;
    std::int64_t den = 1;
};

struct RevivalPeriod
{
    std::int64_t p = 0;
    std::int64_t q = 1;
    std::int64_t p_r = 1;  ///< period counted in revivals
    double t1 = 0.0;       ///< period in time units
    bool reconstructed = false; ///< ratio recovered from floating inputs
};

/// Denominator cap and relative tolerance for recovering a1/a2 from doubles.
inline constexpr std::int64_t kRevivalDenominatorCap = 1'000'000;
inline constexpr double kRevivalRelTolerance = 1e-14;

/// Period of <m>(t) when a1/a2 is rational, std::nullopt otherwise.
/// Throws NoCollisions when a2 == 0.
std::optional<RevivalPeriod> revival_period(double a1, double a2);
/// Exact-ratio overload: a1 / a2 = ratio.
RevivalPeriod revival_period(Rational ratio, double a2);

/// Best rational approximation with denominator <= cap (continued fractions).
std::optional<Rational> rational_approximation(double x, std::int64_t cap, double rel_tol);

} // namespace bec2
