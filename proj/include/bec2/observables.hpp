#pragma once

#include "bec2/fock.hpp"

#include <Eigen/Core>

namespace bec2
{

/// Probabilities over k in basis order.
struct ProbabilityRow
{
    FockBasis basis;
    Eigen::VectorXd probs;
};

struct EntropyValue
{
    double bits = 0.0;
};

ProbabilityRow number_distribution(const StateVector& s);

/// <a'a - b'b>; mean_jz() is the spin-units variant.
double mean_m(const StateVector& s);
double mean_jz(const StateVector& s);

/// Shannon entropy (base 2) of a probability vector; 0 log 0 = 0.
double shannon_bits(const Eigen::VectorXd& probs);

/// Von Neumann entropy of either mode. At fixed total number the reduced state
/// is diagonal in the number basis, so this is the number-distribution entropy.
EntropyValue entanglement_entropy(const StateVector& s);

/// Mode entanglement of the eigenstate U^dag |j, k0> at angle theta.
EntropyValue ground_entropy(double theta, int two_j, int two_k0);

/// Default relative floor for count_peaks().
inline constexpr double kPeakFloor = 1e-6;

/// Strict local maxima above prominence_floor * max(probs); a plateau counts once.
int count_peaks(const ProbabilityRow& p, double prominence_floor = kPeakFloor);
int count_peaks(const Eigen::VectorXd& probs, double prominence_floor = kPeakFloor);

} // namespace bec2
