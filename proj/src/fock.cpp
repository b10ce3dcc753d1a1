#include "bec2/fock.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace bec2
{

FockBasis::FockBasis(int two_j) : two_j_(two_j)
{
    if (two_j < 0)
        throw InvalidArgument("two_j must be nonnegative");
}

bool FockBasis::contains(int two_k) const
{
    return std::abs(two_k) <= two_j_ && (two_k + two_j_) % 2 == 0;
}

Eigen::Index FockBasis::index_of(int two_k) const
{
    if (!contains(two_k))
        throw ProjectionOutOfRange("projection 2k = " + std::to_string(two_k) +
                                   " is not allowed for 2j = " + std::to_string(two_j_));
    return (two_k + two_j_) / 2;
}

StateVector::StateVector(FockBasis b, Eigen::VectorXcd a) : basis(b), amps(std::move(a))
{
    if (amps.size() != basis.dim())
        throw BasisMismatch("amplitude vector length does not match the basis dimension");
}

StateVector StateVector::basis_state(const FockBasis& b, int two_k)
{
    Eigen::VectorXcd a = Eigen::VectorXcd::Zero(b.dim());
    a(b.index_of(two_k)) = 1.0;
    return {b, std::move(a)};
}

StateVector& StateVector::normalize()
{
    const double n = amps.norm();
    if (n == 0.0)
        throw InvalidArgument("cannot normalize the zero vector");
    amps /= n;
    return *this;
}

HermitianOperator from_dense(const FockBasis& basis, const Eigen::MatrixXcd& m)
{
    if (m.rows() != basis.dim() || m.cols() != basis.dim())
        throw BasisMismatch("matrix shape does not match the basis dimension");
    HermitianOperator h(basis, basis.dim() - 1);
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        for (Eigen::Index r = c; r < m.rows(); ++r)
            h.set_lower(r, c, m(r, c));
    return h;
}

int OperatorWord::net_count() const
{
    int net = 0;
    for (Ladder op : ops)
        net += (op == Ladder::Adag || op == Ladder::Bdag) ? 1 : -1;
    return net;
}

std::string OperatorWord::to_string() const
{
    std::ostringstream os;
    os << "(" << prefactor.real() << (prefactor.imag() < 0 ? "" : "+") << prefactor.imag() << "i)";
    for (Ladder op : ops)
    {
        switch (op)
        {
        case Ladder::A: os << " a"; break;
        case Ladder::Adag: os << " a+"; break;
        case Ladder::B: os << " b"; break;
        case Ladder::Bdag: os << " b+"; break;
        }
    }
    return os.str();
}

StateVector apply_word(const OperatorWord& w, const StateVector& s)
{
    if (w.net_count() != 0)
        throw SectorViolation("operator word " + w.to_string() + " changes the particle number");

    const FockBasis& basis = s.basis;
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(basis.dim());
    for (Eigen::Index i = 0; i < basis.dim(); ++i)
    {
        if (s.amps(i) == Complex(0.0))
            continue;
        long na = i;
        long nb = basis.two_j() - i;
        double factor = 1.0;
        for (auto it = w.ops.rbegin(); it != w.ops.rend() && factor != 0.0; ++it)
        {
            switch (*it)
            {
            case Ladder::A:
                factor *= std::sqrt(static_cast<double>(na));
                --na;
                break;
            case Ladder::Adag:
                ++na;
                factor *= std::sqrt(static_cast<double>(na));
                break;
            case Ladder::B:
                factor *= std::sqrt(static_cast<double>(nb));
                --nb;
                break;
            case Ladder::Bdag:
                ++nb;
                factor *= std::sqrt(static_cast<double>(nb));
                break;
            }
        }
        if (factor != 0.0)
            out(na) += w.prefactor * factor * s.amps(i);
    }
    return {basis, std::move(out)};
}

namespace
{

using L = Ladder;

struct TermShape
{
    std::array<Ladder, 4> ops;
    int length;
};

constexpr int net_count(const TermShape& t)
{
    int net = 0;
    for (int i = 0; i < t.length; ++i)
        net += (t.ops[i] == L::Adag || t.ops[i] == L::Bdag) ? 1 : -1;
    return net;
}

constexpr TermShape kNa{{L::Adag, L::A}, 2};
constexpr TermShape kNb{{L::Bdag, L::B}, 2};
constexpr TermShape kHopAB{{L::Adag, L::B}, 2};
constexpr TermShape kHopBA{{L::A, L::Bdag}, 2};
constexpr TermShape kCross{{L::Adag, L::Bdag, L::A, L::B}, 4};
constexpr TermShape kPairAB{{L::Adag, L::Adag, L::B, L::B}, 4};
constexpr TermShape kPairBA{{L::Bdag, L::Bdag, L::A, L::A}, 4};
constexpr TermShape kHalfA{{L::Adag, L::Adag, L::A, L::B}, 4};
constexpr TermShape kHalfB{{L::Bdag, L::Adag, L::B, L::B}, 4};
constexpr TermShape kHalfAdag{{L::Bdag, L::Adag, L::A, L::A}, 4};
constexpr TermShape kHalfBdag{{L::Bdag, L::Bdag, L::A, L::B}, 4};

static_assert(net_count(kNa) == 0 && net_count(kNb) == 0);
static_assert(net_count(kHopAB) == 0 && net_count(kHopBA) == 0);
static_assert(net_count(kCross) == 0);
static_assert(net_count(kPairAB) == 0 && net_count(kPairBA) == 0);
static_assert(net_count(kHalfA) == 0 && net_count(kHalfB) == 0);
static_assert(net_count(kHalfAdag) == 0 && net_count(kHalfBdag) == 0);

OperatorWord word(Complex prefactor, const TermShape& t)
{
    return {prefactor, std::vector<Ladder>(t.ops.begin(), t.ops.begin() + t.length)};
}

} // namespace

std::vector<OperatorWord> hamiltonian_words(const CanonicalParams& c)
{
    const Complex e1 = std::polar(1.0, c.phi);
    const Complex e2 = std::polar(1.0, 2.0 * c.phi);
    return {
        OperatorWord{c.a0, {}},
        word(c.delta_omega, kNa),
        word(-c.delta_omega, kNb),
        word(c.lam * e1, kHopAB),
        word(c.lam * std::conj(e1), kHopBA),
        word(c.u_cross, kCross),
        word(c.lambda2 * e2, kPairAB),
        word(c.lambda2 * std::conj(e2), kPairBA),
        word(c.mu * e1, kHalfA),
        word(-c.mu * e1, kHalfB),
        word(c.mu * std::conj(e1), kHalfAdag),
        word(-c.mu * std::conj(e1), kHalfBdag),
    };
}

Eigen::MatrixXcd assemble_words(const std::vector<OperatorWord>& words, const FockBasis& basis)
{
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(basis.dim(), basis.dim());
    for (Eigen::Index col = 0; col < basis.dim(); ++col)
    {
        const StateVector e = StateVector::basis_state(basis, basis.two_k(col));
        for (const auto& w : words)
            m.col(col) += apply_word(w, e).amps;
    }
    return m;
}

HermitianOperator build_hamiltonian(const CanonicalParams& c)
{
    c.validate();
    const FockBasis basis(c.two_j);
    const double n_tot = c.two_j;
    const Complex e1 = std::polar(1.0, c.phi);
    const Complex e2 = std::polar(1.0, 2.0 * c.phi);

    HermitianOperator h(basis, 2);
    for (Eigen::Index i = 0; i < basis.dim(); ++i)
    {
        const double n = static_cast<double>(i);
        h.set_lower(i, i, c.a0 + c.delta_omega * (2.0 * n - n_tot) + c.u_cross * n * (n_tot - n));
        if (i + 1 < basis.dim())
        {
            const double ladder = std::sqrt((n + 1.0) * (n_tot - n));
            h.set_lower(i + 1, i, e1 * (c.lam + c.mu * (2.0 * n + 1.0 - n_tot)) * ladder);
        }
        if (i + 2 < basis.dim())
        {
            const double ladder =
                std::sqrt((n + 1.0) * (n + 2.0) * (n_tot - n) * (n_tot - n - 1.0));
            h.set_lower(i + 2, i, c.lambda2 * e2 * ladder);
        }
    }
    return h;
}

HermitianOperator m_operator(const FockBasis& basis)
{
    HermitianOperator h(basis, 0);
    for (Eigen::Index i = 0; i < basis.dim(); ++i)
        h.set_lower(i, i, static_cast<double>(basis.two_k(i)));
    return h;
}

HermitianOperator jz_operator(const FockBasis& basis)
{
    HermitianOperator h(basis, 0);
    for (Eigen::Index i = 0; i < basis.dim(); ++i)
        h.set_lower(i, i, basis.k(i));
    return h;
}

} // namespace bec2
