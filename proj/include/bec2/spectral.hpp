#pragma once

#include "bec2/fock.hpp"
#include "bec2/model.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

namespace bec2
{

struct SpectralDecomposition
{
    FockBasis basis;
    Eigen::VectorXd eigenvalues;    ///< ascending
    Eigen::MatrixXcd eigenvectors;  ///< columns; largest-magnitude entry real positive

    /// max |H V - V diag(E)|
    double residual(const HermitianOperator& h) const;
    /// max |V^dag V - I|
    double orthonormality_defect() const;
};

struct RotationSpec
{
    double theta = 0.0;
    double phi = 0.0;
    int two_j = 0;
};

/// Full Hermitian eigendecomposition. When a diagonal phase transform makes the
/// matrix real (the case for every model Hamiltonian) the real symmetric solver
/// runs instead of the complex one. Throws ConvergenceFailure.
SpectralDecomposition eigh(const HermitianOperator& h);

/// The anti-Hermitian generator (theta/2)(e^{i phi} J+ - e^{-i phi} J-) as a
/// dense matrix.
Eigen::MatrixXcd rotation_generator(const RotationSpec& r);

/// U(theta, phi) = exp of rotation_generator(), via eigh of i * generator.
Eigen::MatrixXcd rotation_unitary(const RotationSpec& r);

/// Largest spin handled by the dense conjugation oracle.
inline constexpr int kOracleMaxTwoJ = 128;

/// U^dag (a1 Jz + a2 Jz^2) U as a full-bandwidth operator. Throws SizeExceeded
/// above kOracleMaxTwoJ.
HermitianOperator conjugate_oracle(const ExactParams& x);

/// exp(-i H t) s0 with hbar = 1. Throws BasisMismatch.
StateVector evolve(const SpectralDecomposition& d, const StateVector& s0, double t);

/// Reuses the eigenbasis projection of one initial state across many times.
/// Holds a pointer to the decomposition, which must outlive it.
class Propagator
{
public:
    Propagator(const SpectralDecomposition& d, const StateVector& s0);

    StateVector at(double t) const;
    /// <op>(t) for a diagonal operator given by its diagonal.
    double expectation_diagonal(const Eigen::VectorXd& diag, double t) const;

private:
    const SpectralDecomposition* d_;
    Eigen::VectorXcd coeffs_;
    Eigen::VectorXcd initial_;
};

} // namespace bec2
