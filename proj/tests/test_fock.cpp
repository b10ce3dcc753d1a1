#include "bec2/errors.hpp"
#include "bec2/fock.hpp"
#include "bec2/model.hpp"
#include "support/oracles.hpp"

#include <catch_amalgamated.hpp>

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace bec2;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{

// |n_a, n_b> in a sector of n_a + n_b particles.
StateVector fock_state(int na, int nb)
{
    const FockBasis b(na + nb);
    return StateVector::basis_state(b, na - nb);
}

OperatorWord w(std::initializer_list<Ladder> ops, Complex pre = 1.0)
{
    return {pre, ops};
}

} // namespace

TEST_CASE("FockBasis indexing", "[fock]")
{
    const FockBasis b(4);
    CHECK(b.dim() == 5);
    CHECK(b.j() == 2.0);
    CHECK(b.two_k(0) == -4);
    CHECK(b.two_k(4) == 4);
    CHECK(b.index_of(2) == 3);
    CHECK_FALSE(b.contains(3));
    CHECK_FALSE(b.contains(6));
    CHECK_THROWS_AS(b.index_of(3), ProjectionOutOfRange);
    CHECK_THROWS_AS(b.index_of(-6), ProjectionOutOfRange);
    CHECK_THROWS_AS(FockBasis(-1), InvalidArgument);

    const FockBasis half(1);
    CHECK(half.dim() == 2);
    CHECK(half.k(0) == -0.5);
    CHECK(half.k(1) == 0.5);
}

TEST_CASE("StateVector checks its length", "[fock]")
{
    CHECK_THROWS_AS(StateVector(FockBasis(2), Eigen::VectorXcd::Zero(4)), BasisMismatch);
    StateVector s(FockBasis(2), Eigen::VectorXcd::Constant(3, Complex(2.0, 0.0)));
    s.normalize();
    CHECK_THAT(s.norm(), WithinAbs(1.0, 1e-15));
}

TEST_CASE("apply_word ladder algebra examples", "[fock]")
{
    SECTION("a+ b on |0,2>")
    {
        const auto out = apply_word(w({Ladder::Adag, Ladder::B}), fock_state(0, 2));
        const Eigen::Index i = out.basis.index_of(0);
        CHECK_THAT(out.amps(i).real(), WithinAbs(std::sqrt(2.0), 1e-15));
        CHECK_THAT(out.amps.norm(), WithinAbs(std::sqrt(2.0), 1e-15));
    }
    SECTION("one-particle exchange on |1,1>")
    {
        const auto s = fock_state(1, 1);
        const auto t1 = apply_word(w({Ladder::Adag, Ladder::Adag, Ladder::A, Ladder::B}), s);
        const auto t2 = apply_word(w({Ladder::Adag, Ladder::Bdag, Ladder::B, Ladder::B}), s);
        const Eigen::VectorXcd diff = t1.amps - t2.amps;
        const double expected = (1 - 1 + 1) * std::sqrt((1.0 + 1) * 1);
        CHECK_THAT(diff(s.basis.index_of(2)).real(), WithinAbs(expected, 1e-15));
        CHECK_THAT(diff.norm(), WithinAbs(expected, 1e-15));
    }
    SECTION("pair exchange on |0,2>")
    {
        const auto out = apply_word(w({Ladder::Adag, Ladder::Adag, Ladder::B, Ladder::B}), fock_state(0, 2));
        CHECK_THAT(out.amps(out.basis.index_of(2)).real(), WithinAbs(2.0, 1e-15));
    }
    SECTION("annihilating the vacuum of a mode gives zero")
    {
        const auto out = apply_word(w({Ladder::Bdag, Ladder::A}), fock_state(0, 3));
        CHECK(out.amps.norm() == 0.0);
    }
    SECTION("prefactor is carried")
    {
        const auto out = apply_word(w({Ladder::Adag, Ladder::A}, Complex(0, 2)), fock_state(3, 1));
        CHECK_THAT(out.amps(out.basis.index_of(2)).imag(), WithinAbs(6.0, 1e-14));
        CHECK(out.amps(out.basis.index_of(2)).real() == 0.0);
    }
}

TEST_CASE("apply_word rejects sector-changing words", "[fock]")
{
    CHECK_THROWS_AS(apply_word(w({Ladder::Adag}), fock_state(1, 1)), SectorViolation);
    CHECK_THROWS_AS(apply_word(w({Ladder::A, Ladder::B, Ladder::Adag}), fock_state(1, 1)),
                    SectorViolation);
}

TEST_CASE("every Hamiltonian term conserves the particle number", "[fock]")
{
    const auto words = hamiltonian_words(oracle::random_canonical(4));
    CHECK(words.size() == 12);
    for (const auto& word : words)
        CHECK(word.net_count() == 0);
}

TEST_CASE("zero coefficients build the zero matrix", "[fock]")
{
    CanonicalParams c;
    c.two_j = 6;
    CHECK(build_hamiltonian(c).max_abs() == 0.0);
}

TEST_CASE("one-particle sector", "[fock]")
{
    CanonicalParams c;
    c.a0 = 0.5;
    c.delta_omega = 1.5;
    c.lam = 2.0;
    c.u_cross = 7.0;
    c.mu = 3.0;
    c.lambda2 = -4.0;
    c.two_j = 1;
    auto h = build_hamiltonian(c).dense();
    // Collision words vanish on one particle; the matrix depends on a0, dw, lam only.
    Eigen::Matrix2cd want;
    want << 0.5 - 1.5, 2.0, 2.0, 0.5 + 1.5;
    // mu enters through (2n + 1 - N) = 0 at n = 0 for N = 1.
    CHECK(oracle::max_abs_diff(h, want) <= 1e-15);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    CHECK_THAT(es.eigenvalues()(0), WithinRel(0.5 - std::hypot(1.5, 2.0), 1e-14));
    CHECK_THAT(es.eigenvalues()(1), WithinRel(0.5 + std::hypot(1.5, 2.0), 1e-14));
}

TEST_CASE("two-particle pair coupling", "[fock]")
{
    CanonicalParams c;
    c.lambda2 = 1.25;
    c.two_j = 2;
    const auto h = build_hamiltonian(c);
    CHECK_THAT(h(2, 0).real(), WithinAbs(2.0 * 1.25, 1e-15));
    CHECK(h(0, 2) == std::conj(h(2, 0)));
}

TEST_CASE("property: banded build matches the word oracle", "[fock][property]")
{
    for (int two_j = 0; two_j <= 12; ++two_j)
        for (double phi : {0.0, 0.7, 2.1})
            for (int trial = 0; trial < 20; ++trial)
            {
                auto c = oracle::random_canonical(two_j);
                c.phi = phi;
                const Eigen::MatrixXcd banded = build_hamiltonian(c).dense();
                const Eigen::MatrixXcd words = assemble_words(hamiltonian_words(c), FockBasis(two_j));
                const double scale = std::max(1.0, words.cwiseAbs().maxCoeff());
                CHECK(oracle::max_abs_diff(banded, words) <= 1e-13 * scale);
            }
}

TEST_CASE("property: banded build matches truncated two-mode matrices", "[fock][property]")
{
    for (int two_j = 0; two_j <= 6; ++two_j)
        for (int trial = 0; trial < 5; ++trial)
        {
            const auto c = oracle::random_canonical(two_j);
            const Eigen::MatrixXcd banded = build_hamiltonian(c).dense();
            const Eigen::MatrixXcd ref = oracle::kron_hamiltonian(c);
            const double scale = std::max(1.0, ref.cwiseAbs().maxCoeff());
            CHECK(oracle::max_abs_diff(banded, ref) <= 1e-12 * scale);
        }
}

TEST_CASE("property: Hermiticity is exact", "[fock][property]")
{
    for (int trial = 0; trial < 30; ++trial)
    {
        const auto c = oracle::random_canonical(oracle::uniform_int(0, 40));
        const auto h = build_hamiltonian(c);
        const Eigen::MatrixXcd d = h.dense();
        CHECK(d == d.adjoint());
        CHECK(h.bandwidth() <= 2);
        const Eigen::VectorXcd v = oracle::random_unit(h.dim());
        CHECK(oracle::max_abs_diff(h.apply(v), d * v) <= 1e-12 * std::max(1.0, h.max_abs()));
    }
}

TEST_CASE("BandedHermitian storage", "[fock]")
{
    HermitianOperator h(FockBasis(3), 2);
    h.set_lower(1, 1, Complex(2.0, 5.0));
    CHECK(h(1, 1) == Complex(2.0, 0.0));
    h.set_lower(3, 1, Complex(1.0, 1.0));
    CHECK(h(1, 3) == Complex(1.0, -1.0));
    CHECK(h(3, 0) == Complex(0.0));
    CHECK_THROWS_AS(h.set_lower(3, 0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(h.set_lower(0, 1, 1.0), InvalidArgument);
    h.add_diagonal(1.0);
    CHECK(h(0, 0) == Complex(1.0));

    RealSymmetricOperator r(FockBasis(1), 5);
    CHECK(r.bandwidth() == 1);
}

TEST_CASE("relative population and Jz operators", "[fock]")
{
    const auto m_half = m_operator(FockBasis(1)).dense();
    CHECK(m_half(0, 0) == Complex(-1.0));
    CHECK(m_half(1, 1) == Complex(1.0));
    const auto m1 = m_operator(FockBasis(2)).dense();
    CHECK(m1.diagonal().real() == Eigen::Vector3d(-2, 0, 2));
    for (int two_j = 0; two_j < 30; ++two_j)
    {
        CHECK(m_operator(FockBasis(two_j)).dense().trace() == Complex(0.0));
        const Eigen::MatrixXcd twice = 2.0 * jz_operator(FockBasis(two_j)).dense();
        CHECK(twice == m_operator(FockBasis(two_j)).dense());
    }
}

TEST_CASE("the Hamiltonian does not commute with the relative population", "[fock]")
{
    CanonicalParams c;
    c.lam = 1.0;
    c.two_j = 4;
    const Eigen::MatrixXcd h = build_hamiltonian(c).dense();
    const Eigen::MatrixXcd m = m_operator(FockBasis(4)).dense();
    CHECK((h * m - m * h).cwiseAbs().maxCoeff() > 0.5);
}
