#include "bec2/observables.hpp"

#include "bec2/exact.hpp"

#include <algorithm>
#include <cmath>

namespace bec2
{

ProbabilityRow number_distribution(const StateVector& s)
{
    return {s.basis, s.amps.cwiseAbs2()};
}

double mean_jz(const StateVector& s)
{
    double sum = 0.0;
    for (Eigen::Index i = 0; i < s.basis.dim(); ++i)
        sum += s.basis.k(i) * std::norm(s.amps(i));
    return sum;
}

double mean_m(const StateVector& s) { return 2.0 * mean_jz(s); }

double shannon_bits(const Eigen::VectorXd& probs)
{
    double s = 0.0;
    for (double p : probs)
        if (p > 0.0)
            s -= p * std::log2(p);
    // a row with one entry rounded above 1 can give -0.0 or -1e-16
    return std::max(s, 0.0);
}

EntropyValue entanglement_entropy(const StateVector& s)
{
    return {shannon_bits(number_distribution(s).probs)};
}

EntropyValue ground_entropy(double theta, int two_j, int two_k0)
{
    return {shannon_bits(wigner_row(two_j, two_k0, theta).probabilities())};
}

int count_peaks(const Eigen::VectorXd& probs, double prominence_floor)
{
    if (!(prominence_floor > 0.0))
        throw InvalidArgument("prominence floor must be positive");
    const Eigen::Index n = probs.size();
    if (n == 0)
        return 0;
    const double threshold = prominence_floor * probs.maxCoeff();
    int peaks = 0;
    for (Eigen::Index i = 0; i < n;)
    {
        Eigen::Index end = i;
        while (end + 1 < n && probs(end + 1) == probs(i))
            ++end;
        const bool rises = i == 0 || probs(i - 1) < probs(i);
        const bool falls = end == n - 1 || probs(end + 1) < probs(i);
        if (rises && falls && probs(i) > threshold)
            ++peaks;
        i = end + 1;
    }
    return peaks;
}

int count_peaks(const ProbabilityRow& p, double prominence_floor)
{
    return count_peaks(p.probs, prominence_floor);
}

} // namespace bec2
