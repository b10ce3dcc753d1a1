#include "bec2/errors.hpp"
#include "bec2/exact.hpp"
#include "bec2/fock.hpp"
#include "bec2/model.hpp"
#include "bec2/observables.hpp"
#include "bec2/spectral.hpp"
#include "support/oracles.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace bec2;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{

constexpr double kPi = std::numbers::pi;

HermitianOperator dense_op(const Eigen::MatrixXcd& m)
{
    return from_dense(FockBasis(static_cast<int>(m.rows()) - 1), m);
}

} // namespace

TEST_CASE("eigh of a diagonal matrix", "[spectral]")
{
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(3, 3);
    m.diagonal() << 3.0, 1.0, 2.0;
    const auto d = eigh(dense_op(m));
    CHECK(d.eigenvalues == Eigen::Vector3d(1, 2, 3));
    Eigen::MatrixXcd perm = Eigen::MatrixXcd::Zero(3, 3);
    perm(1, 0) = perm(2, 1) = perm(0, 2) = 1.0;
    CHECK(oracle::max_abs_diff(d.eigenvectors, perm) == 0.0);
}

TEST_CASE("eigh of the exchange matrix", "[spectral]")
{
    Eigen::MatrixXcd m(2, 2);
    m << 0, 1, 1, 0;
    const auto d = eigh(dense_op(m));
    CHECK_THAT(d.eigenvalues(0), WithinAbs(-1.0, 1e-15));
    CHECK_THAT(d.eigenvalues(1), WithinAbs(1.0, 1e-15));
}

TEST_CASE("property: eigh on random dense Hermitian matrices", "[spectral][property]")
{
    for (int trial = 0; trial < 20; ++trial)
    {
        const int n = oracle::uniform_int(1, 12);
        Eigen::MatrixXcd a(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                a(r, c) = Complex(oracle::uniform(-1, 1), oracle::uniform(-1, 1));
        const Eigen::MatrixXcd m = a + a.adjoint();
        const auto h = dense_op(m);
        const auto d = eigh(h);
        CHECK(d.residual(h) <= 1e-12 * h.max_abs());
        CHECK(d.orthonormality_defect() <= 1e-12);
        for (int i = 1; i < n; ++i)
            CHECK(d.eigenvalues(i) >= d.eigenvalues(i - 1));
        const Eigen::MatrixXcd rebuilt =
            d.eigenvectors * d.eigenvalues.cast<Complex>().asDiagonal() * d.eigenvectors.adjoint();
        CHECK(oracle::max_abs_diff(rebuilt, m) <= 1e-12 * h.max_abs());
    }
}

TEST_CASE("property: eigh on model Hamiltonians", "[spectral][property]")
{
    for (int trial = 0; trial < 30; ++trial)
    {
        const auto c = oracle::random_canonical(oracle::uniform_int(0, 80));
        const auto h = build_hamiltonian(c);
        const auto d = eigh(h);
        CHECK(d.residual(h) <= 1e-10 * h.max_abs());
        CHECK(d.orthonormality_defect() <= 1e-10);
        for (Eigen::Index col = 0; col < d.eigenvectors.cols(); ++col)
        {
            Eigen::Index imax;
            d.eigenvectors.col(col).cwiseAbs().maxCoeff(&imax);
            CHECK(d.eigenvectors(imax, col).imag() == 0.0);
            CHECK(d.eigenvectors(imax, col).real() > 0.0);
        }
    }
}

TEST_CASE("eigh rejects non-finite input", "[spectral]")
{
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(3, 3);
    m(2, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(eigh(dense_op(m)), ConvergenceFailure);
}

TEST_CASE("rotation at zero angle is the identity", "[spectral]")
{
    for (int two_j : {0, 1, 4, 9})
    {
        const auto u = rotation_unitary({0.0, 1.3, two_j});
        CHECK(oracle::max_abs_diff(u, Eigen::MatrixXcd::Identity(two_j + 1, two_j + 1)) <= 1e-15);
    }
}

TEST_CASE("spin-1/2 rotation", "[spectral]")
{
    for (double theta : {0.2, 1.0, 2.9})
    {
        const auto u = rotation_unitary({theta, 0.6, 1});
        CHECK_THAT(std::abs(u(0, 0)), WithinAbs(std::cos(theta / 2), 1e-14));
        CHECK_THAT(std::abs(u(0, 1)), WithinAbs(std::sin(theta / 2), 1e-14));
        // e^{G} with G = (theta/2)[[0, -e^{-i phi}], [e^{i phi}, 0]]
        Eigen::Matrix2cd want;
        const Complex e = std::polar(1.0, 0.6);
        want << std::cos(theta / 2), -std::conj(e) * std::sin(theta / 2), e * std::sin(theta / 2),
            std::cos(theta / 2);
        CHECK(oracle::max_abs_diff(u, want) <= 1e-14);
    }
}

TEST_CASE("property: rotation is unitary and matches a Taylor exponential", "[spectral][property]")
{
    for (int trial = 0; trial < 25; ++trial)
    {
        const RotationSpec r{oracle::uniform(0, kPi), oracle::uniform(0, 2 * kPi),
                             oracle::uniform_int(0, 30)};
        const auto u = rotation_unitary(r);
        const Eigen::Index n = u.rows();
        CHECK(oracle::max_abs_diff(u.adjoint() * u, Eigen::MatrixXcd::Identity(n, n)) <= 1e-12);
        CHECK(oracle::max_abs_diff(u, oracle::expm_taylor(rotation_generator(r))) <= 1e-11);
    }
}

TEST_CASE("rotation columns are Wigner rows", "[spectral]")
{
    for (int two_j = 0; two_j <= 40; ++two_j)
    {
        const double theta = oracle::uniform(0, kPi);
        const auto u = rotation_unitary({theta, 0.0, two_j});
        for (int i = 0; i <= two_j; ++i)
        {
            const int two_k0 = 2 * i - two_j;
            const auto row = wigner_row(two_j, two_k0, theta);
            CHECK((u.col(i).real() - row.amps).cwiseAbs().maxCoeff() <= 1e-10);
            CHECK(u.col(i).imag().cwiseAbs().maxCoeff() <= 1e-12);
        }
    }
}

TEST_CASE("conjugation oracle basics", "[spectral]")
{
    const auto h0 = conjugate_oracle({1.5, -2.0, 0.0, 0.3, 6}).dense();
    for (int i = 0; i <= 6; ++i)
    {
        const double k = i - 3.0;
        CHECK_THAT(h0(i, i).real(), WithinAbs(1.5 * k - 2.0 * k * k, 1e-13));
    }
    CHECK(conjugate_oracle({0.0, 0.0, 1.1, 0.3, 6}).max_abs() <= 1e-300);
    CHECK_THROWS_AS(conjugate_oracle({1, 1, 1, 0, kOracleMaxTwoJ + 1}), SizeExceeded);
}

TEST_CASE("conjugation identity example", "[spectral]")
{
    const ExactParams x{2.0, 4.0, 0.9, 0.4, 6};
    const auto want = conjugate_oracle(x).dense();
    const auto got = build_hamiltonian(exact_to_canonical(x)).dense();
    CHECK(oracle::max_abs_diff(want, got) <= 1e-10);
}

TEST_CASE("property: conjugation identity over random manifold points", "[spectral][property]")
{
    for (int trial = 0; trial < 40; ++trial)
    {
        const auto x = oracle::random_exact(24, 5.0);
        const auto want = conjugate_oracle(x).dense();
        const auto got = build_hamiltonian(exact_to_canonical(x)).dense();
        const double scale = std::max(want.cwiseAbs().maxCoeff(), 1e-300);
        CHECK(oracle::max_abs_diff(want, got) <= 1e-10 * scale);
    }
}

TEST_CASE("only the full cross coefficient satisfies the identity", "[spectral]")
{
    const ExactParams x{2.0, 1.0, 1.0, 0.7, 8};
    const auto want = conjugate_oracle(x).dense();
    auto c = exact_to_canonical(x);
    const double scale = want.cwiseAbs().maxCoeff();
    CHECK(oracle::max_abs_diff(build_hamiltonian(c).dense(), want) <= 1e-10 * scale);
    c.u_cross = quarter_u_from_cross(c.u_cross);
    CHECK(oracle::max_abs_diff(build_hamiltonian(c).dense(), want) > 1e-3 * scale);
}

TEST_CASE("manifold spectrum is the pure quadratic ladder", "[spectral]")
{
    for (int trial = 0; trial < 5; ++trial)
    {
        const auto x = oracle::random_exact(60, 10.0);
        const auto d = eigh(build_hamiltonian(exact_to_canonical(x)));
        Eigen::VectorXd want = EnergyLadder{x.a1, x.a2, x.two_j}.energies();
        std::sort(want.begin(), want.end());
        const double scale = std::max(want.cwiseAbs().maxCoeff(), 1.0);
        CHECK((d.eigenvalues - want).cwiseAbs().maxCoeff() <= 1e-9 * scale);
    }
}

TEST_CASE("evolution at t = 0 returns the initial state", "[spectral]")
{
    const auto c = oracle::random_canonical(10);
    const auto d = eigh(build_hamiltonian(c));
    StateVector s0(FockBasis(10), oracle::random_unit(11));
    CHECK(evolve(d, s0, 0.0).amps == s0.amps);
}

TEST_CASE("eigenvectors only acquire a phase", "[spectral]")
{
    const auto c = oracle::random_canonical(12);
    const auto d = eigh(build_hamiltonian(c));
    StateVector s0(FockBasis(12), d.eigenvectors.col(4));
    for (double t : {0.3, 2.0, 17.0})
    {
        const auto s = evolve(d, s0, t);
        CHECK((s.amps.cwiseAbs() - s0.amps.cwiseAbs()).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("single-particle Rabi oscillation", "[spectral]")
{
    CanonicalParams c;
    c.lam = 0.8;
    c.two_j = 1;
    const auto d = eigh(build_hamiltonian(c));
    const auto s0 = StateVector::basis_state(FockBasis(1), 1);
    for (int i = 0; i <= 50; ++i)
    {
        const double t = 0.1 * i;
        CHECK_THAT(mean_m(evolve(d, s0, t)), WithinAbs(std::cos(2 * 0.8 * t), 1e-13));
    }
}

TEST_CASE("evolve rejects a state from another sector", "[spectral]")
{
    const auto d = eigh(build_hamiltonian(oracle::random_canonical(4)));
    CHECK_THROWS_AS(evolve(d, StateVector::basis_state(FockBasis(5), 1), 1.0), BasisMismatch);
}

TEST_CASE("property: norm and energy conservation", "[spectral][property]")
{
    for (int trial = 0; trial < 4; ++trial)
    {
        const auto c = oracle::random_canonical(oracle::uniform_int(1, 200));
        const auto h = build_hamiltonian(c);
        const auto d = eigh(h);
        StateVector s0(h.basis(), oracle::random_unit(h.dim()));
        const Propagator prop(d, s0);
        const double e0 = s0.amps.dot(h.apply(s0.amps)).real();
        const double escale = std::max(std::abs(e0), h.max_abs());
        for (int i = 0; i < 1000; ++i)
        {
            const auto s = prop.at(0.01 * i);
            CHECK(std::abs(s.norm() - 1.0) <= 1e-10);
            if (i % 50 == 0)
                CHECK(std::abs(s.amps.dot(h.apply(s.amps)).real() - e0) <= 1e-9 * escale);
        }
    }
}

TEST_CASE("dense path handles j = 1000", "[spectral][slow]")
{
    const ExactParams x{998.1, 1.0, 1.35, 0.0, 2000};
    const auto h = build_hamiltonian(exact_to_canonical(x));
    const auto d = eigh(h);
    CHECK(d.eigenvalues.size() == 2001);
    Eigen::VectorXd want = EnergyLadder{x.a1, x.a2, x.two_j}.energies();
    std::sort(want.begin(), want.end());
    CHECK((d.eigenvalues - want).cwiseAbs().maxCoeff() <= 1e-9 * want.cwiseAbs().maxCoeff());
}
