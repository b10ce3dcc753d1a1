#include "bec2/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <optional>

namespace bec2
{

namespace
{

/// Rotate each eigenvector so its largest-magnitude entry is real positive.
void fix_phases(Eigen::MatrixXcd& v)
{
    for (Eigen::Index c = 0; c < v.cols(); ++c)
    {
        Eigen::Index imax = 0;
        double best = -1.0;
        for (Eigen::Index r = 0; r < v.rows(); ++r)
        {
            const double a = std::abs(v(r, c));
            if (a > best)
            {
                best = a;
                imax = r;
            }
        }
        if (best > 0.0)
        {
            v.col(c) *= std::conj(v(imax, c)) / best;
            v(imax, c) = best;
        }
    }
}

/// Diagonal phases d with conj(d_r) H(r, c) d_c real, if any exist along the band.
std::optional<Eigen::VectorXcd> real_gauge(const HermitianOperator& h)
{
    const Eigen::Index n = h.dim();
    Eigen::VectorXcd d = Eigen::VectorXcd::Ones(n);
    for (Eigen::Index c = 0; c + 1 < n; ++c)
    {
        const Complex sub = h(c + 1, c);
        const double mag = std::abs(sub);
        d(c + 1) = mag > 0.0 ? d(c) * (sub / mag) : d(c);
    }
    const double tol = 64.0 * std::numeric_limits<double>::epsilon() * std::max(h.max_abs(), 1e-300);
    for (Eigen::Index dd = 1; dd <= h.bandwidth(); ++dd)
        for (Eigen::Index c = 0; c + dd < n; ++c)
        {
            const Complex v = std::conj(d(c + dd)) * h.band()(dd, c) * d(c);
            if (std::abs(v.imag()) > tol)
                return std::nullopt;
        }
    return d;
}

} // namespace

double SpectralDecomposition::residual(const HermitianOperator& h) const
{
    const Eigen::MatrixXcd hv = h.dense() * eigenvectors;
    const Eigen::MatrixXcd ve = eigenvectors * eigenvalues.cast<Complex>().asDiagonal();
    return (hv - ve).cwiseAbs().maxCoeff();
}

double SpectralDecomposition::orthonormality_defect() const
{
    const Eigen::Index n = eigenvectors.cols();
    return (eigenvectors.adjoint() * eigenvectors - Eigen::MatrixXcd::Identity(n, n))
        .cwiseAbs()
        .maxCoeff();
}

SpectralDecomposition eigh(const HermitianOperator& h)
{
    const Eigen::Index n = h.dim();
    SpectralDecomposition out{h.basis(), {}, {}};
    if (!h.band().allFinite())
        throw ConvergenceFailure("operator has non-finite entries");

    if (auto gauge = real_gauge(h))
    {
        Eigen::MatrixXd real = Eigen::MatrixXd::Zero(n, n);
        for (Eigen::Index dd = 0; dd <= h.bandwidth(); ++dd)
            for (Eigen::Index c = 0; c + dd < n; ++c)
            {
                const double v = (std::conj((*gauge)(c + dd)) * h.band()(dd, c) * (*gauge)(c)).real();
                real(c + dd, c) = v;
                real(c, c + dd) = v;
            }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(real);
        if (es.info() != Eigen::Success)
            throw ConvergenceFailure("real symmetric eigensolver did not converge");
        out.eigenvalues = es.eigenvalues();
        out.eigenvectors = gauge->asDiagonal() * es.eigenvectors().cast<Complex>();
    }
    else
    {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.dense());
        if (es.info() != Eigen::Success)
            throw ConvergenceFailure("Hermitian eigensolver did not converge");
        out.eigenvalues = es.eigenvalues();
        out.eigenvectors = es.eigenvectors();
    }
    fix_phases(out.eigenvectors);
    return out;
}

Eigen::MatrixXcd rotation_generator(const RotationSpec& r)
{
    const FockBasis basis(r.two_j);
    const Eigen::Index n = basis.dim();
    const Complex e = std::polar(0.5 * r.theta, r.phi);
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index i = 0; i + 1 < n; ++i)
    {
        const double raise = std::sqrt(static_cast<double>((i + 1) * (r.two_j - i)));
        g(i + 1, i) = e * raise;
        g(i, i + 1) = -std::conj(e) * raise;
    }
    return g;
}

Eigen::MatrixXcd rotation_unitary(const RotationSpec& r)
{
    const FockBasis basis(r.two_j);
    const Eigen::MatrixXcd g = rotation_generator(r);
    HermitianOperator k(basis, 1);
    for (Eigen::Index i = 0; i < basis.dim(); ++i)
    {
        k.set_lower(i, i, 0.0);
        if (i + 1 < basis.dim())
            k.set_lower(i + 1, i, Complex(0.0, 1.0) * g(i + 1, i));
    }
    const SpectralDecomposition d = eigh(k);
    const Eigen::VectorXcd phases =
        (Complex(0.0, -1.0) * d.eigenvalues.cast<Complex>()).array().exp();
    return d.eigenvectors * phases.asDiagonal() * d.eigenvectors.adjoint();
}

HermitianOperator conjugate_oracle(const ExactParams& x)
{
    x.validate();
    if (x.two_j > kOracleMaxTwoJ)
        throw SizeExceeded("conjugation oracle is limited to 2j <= " + std::to_string(kOracleMaxTwoJ));
    const FockBasis basis(x.two_j);
    const Eigen::MatrixXcd u = rotation_unitary({x.theta, x.phi, x.two_j});
    Eigen::VectorXd h0(basis.dim());
    for (Eigen::Index i = 0; i < basis.dim(); ++i)
    {
        const double k = basis.k(i);
        h0(i) = x.a1 * k + x.a2 * k * k;
    }
    const Eigen::MatrixXcd m = u.adjoint() * h0.cast<Complex>().asDiagonal() * u;
    return from_dense(basis, m);
}

StateVector evolve(const SpectralDecomposition& d, const StateVector& s0, double t)
{
    return Propagator(d, s0).at(t);
}

Propagator::Propagator(const SpectralDecomposition& d, const StateVector& s0) : d_(&d)
{
    if (!(s0.basis == d.basis))
        throw BasisMismatch("initial state and decomposition live on different sectors");
    coeffs_ = d.eigenvectors.adjoint() * s0.amps;
    initial_ = s0.amps;
}

StateVector Propagator::at(double t) const
{
    if (t == 0.0)
        return {d_->basis, initial_};
    const Eigen::VectorXcd phases =
        (Complex(0.0, -t) * d_->eigenvalues.cast<Complex>()).array().exp();
    return {d_->basis, d_->eigenvectors * phases.cwiseProduct(coeffs_)};
}

double Propagator::expectation_diagonal(const Eigen::VectorXd& diag, double t) const
{
    const StateVector s = at(t);
    return diag.dot(s.amps.cwiseAbs2());
}

} // namespace bec2
