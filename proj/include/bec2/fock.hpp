#pragma once

#include "bec2/errors.hpp"
#include "bec2/model.hpp"

#include <Eigen/Core>

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace bec2
{

using Complex = std::complex<double>;

/// Fixed-number sector of 2j bosons in two modes. Basis vector i has
/// n_a = i, n_b = 2j - i and pseudo-spin projection k = i - j.
class FockBasis
{
public:
    explicit FockBasis(int two_j);

    int two_j() const { return two_j_; }
    double j() const { return 0.5 * two_j_; }
    Eigen::Index dim() const { return two_j_ + 1; }
    int particles() const { return two_j_; }

    /// Twice the projection of basis vector i.
    int two_k(Eigen::Index i) const { return 2 * static_cast<int>(i) - two_j_; }
    double k(Eigen::Index i) const { return 0.5 * two_k(i); }
    /// Throws ProjectionOutOfRange when two_k is not a projection of this spin.
    Eigen::Index index_of(int two_k) const;
    bool contains(int two_k) const;

    bool operator==(const FockBasis&) const = default;

private:
    int two_j_;
};

/// Complex amplitudes over a FockBasis. Only normalizing operations promise
/// unit norm; apply_word() and friends hand back raw vectors.
struct StateVector
{
    FockBasis basis;
    Eigen::VectorXcd amps;

    StateVector(FockBasis b, Eigen::VectorXcd a);

    static StateVector basis_state(const FockBasis& b, int two_k);
    double norm() const { return amps.norm(); }
    StateVector& normalize();
};

/// Hermitian matrix stored as its lower band: band(d, c) holds H(c + d, c).
/// The diagonal is kept real, so Hermiticity holds by construction.
template <typename Scalar>
class BandedHermitian
{
public:
    using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    BandedHermitian(FockBasis basis, Eigen::Index bandwidth)
        : basis_(basis)
        , band_(Dense::Zero(std::min<Eigen::Index>(bandwidth, basis.dim() - 1) + 1, basis.dim()))
    {
    }

    const FockBasis& basis() const { return basis_; }
    Eigen::Index dim() const { return basis_.dim(); }
    Eigen::Index bandwidth() const { return band_.rows() - 1; }

    /// Element (row, col) for any position; zero outside the band.
    Scalar operator()(Eigen::Index row, Eigen::Index col) const
    {
        if (row < col)
            return conj_(at_lower(col, row));
        return at_lower(row, col);
    }

    /// Set H(row, col) and, implicitly, H(col, row). Needs row >= col.
    void set_lower(Eigen::Index row, Eigen::Index col, Scalar v)
    {
        const Eigen::Index d = row - col;
        if (d < 0 || d > bandwidth())
            throw InvalidArgument("BandedHermitian: element outside the stored band");
        band_(d, col) = d == 0 ? Scalar(real_(v)) : v;
    }

    void add_diagonal(double shift)
    {
        for (Eigen::Index c = 0; c < dim(); ++c)
            band_(0, c) += Scalar(shift);
    }

    /// Read-only access to the packed lower band.
    const Dense& band() const { return band_; }

    Dense dense() const
    {
        Dense m = Dense::Zero(dim(), dim());
        for (Eigen::Index d = 0; d <= bandwidth(); ++d)
            for (Eigen::Index c = 0; c + d < dim(); ++c)
            {
                m(c + d, c) = band_(d, c);
                m(c, c + d) = conj_(band_(d, c));
            }
        return m;
    }

    Vector apply(const Vector& v) const
    {
        Vector out = Vector::Zero(dim());
        for (Eigen::Index d = 0; d <= bandwidth(); ++d)
            for (Eigen::Index c = 0; c + d < dim(); ++c)
            {
                out(c + d) += band_(d, c) * v(c);
                if (d != 0)
                    out(c) += conj_(band_(d, c)) * v(c + d);
            }
        return out;
    }

    double max_abs() const { return band_.size() == 0 ? 0.0 : band_.cwiseAbs().maxCoeff(); }

private:
    Scalar at_lower(Eigen::Index row, Eigen::Index col) const
    {
        const Eigen::Index d = row - col;
        return d > bandwidth() ? Scalar(0) : band_(d, col);
    }
    static Scalar conj_(const Scalar& s)
    {
        if constexpr (Eigen::NumTraits<Scalar>::IsComplex)
            return std::conj(s);
        else
            return s;
    }
    static double real_(const Scalar& s)
    {
        if constexpr (Eigen::NumTraits<Scalar>::IsComplex)
            return s.real();
        else
            return s;
    }

    FockBasis basis_;
    Dense band_;
};

using HermitianOperator = BandedHermitian<Complex>;
using RealSymmetricOperator = BandedHermitian<double>;

/// Hermitian operator wrapping a full matrix (bandwidth dim - 1). Only the lower
/// triangle of m is read.
HermitianOperator from_dense(const FockBasis& basis, const Eigen::MatrixXcd& m);

enum class Ladder : std::uint8_t
{
    A,     ///< a
    Adag,  ///< a^dag
    B,     ///< b
    Bdag,  ///< b^dag
};

/// Product of ladder operators, written left to right and applied right to left.
struct OperatorWord
{
    Complex prefactor{1.0, 0.0};
    std::vector<Ladder> ops;

    /// Creations minus annihilations.
    int net_count() const;
    std::string to_string() const;
};

/// Exact ladder algebra on every basis component. Throws SectorViolation if
/// the word changes the particle number.
StateVector apply_word(const OperatorWord& w, const StateVector& s);

/// Every second-quantized term of the model Hamiltonian, identity included.
std::vector<OperatorWord> hamiltonian_words(const CanonicalParams& c);

/// Dense matrix of a sum of words, assembled column by column via apply_word().
Eigen::MatrixXcd assemble_words(const std::vector<OperatorWord>& words, const FockBasis& basis);

/// Closed-form pentadiagonal matrix of the model Hamiltonian.
HermitianOperator build_hamiltonian(const CanonicalParams& c);

/// Physical relative population a'a - b'b (entries 2k).
HermitianOperator m_operator(const FockBasis& basis);
/// Pseudo-spin projection Jz (entries k).
HermitianOperator jz_operator(const FockBasis& basis);

} // namespace bec2
