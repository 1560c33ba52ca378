#include "singlet/sampling.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "singlet/kernels.hpp"
#include "singlet/permutation.hpp"

namespace singlet {

namespace {

// Number of tensor factors in a dense vector of dimension n^parties.
int party_count(std::uint64_t dim, int n) {
    int parties = 0;
    std::uint64_t d = dim;
    while (d > 1) {
        if (d % n != 0)
            throw DimensionError("dense dimension is not a power of the level count");
        d /= n;
        ++parties;
    }
    return parties;
}

}  // namespace

std::vector<std::uint8_t> random_permutation(int n, std::mt19937_64& rng) {
    std::vector<std::uint8_t> p(n);
    std::iota(p.begin(), p.end(), std::uint8_t{0});
    for (int i = n - 1; i > 0; --i) {
        const auto j = static_cast<int>(bounded_rand(rng, i + 1));
        std::swap(p[i], p[j]);
    }
    return p;
}

std::vector<std::uint8_t> sample_common_direction(const SingletState& state,
                                                  Direction /*dir*/,
                                                  std::mt19937_64& rng) {
    // The distribution is direction-independent (lateral rotational
    // invariance), uniform over permutations.
    return random_permutation(state.n(), rng);
}

std::vector<double> born_distribution(const DenseState& state, Direction dir) {
    const int n = state.n();
    const auto frame = SpinFrame::make(n);
    const Rotation rot = rotation_operator(frame, dir);
    const Matrix u_dag = rot.u.adjoint();

    DenseState rotated = state;
    const int parties = party_count(state.dim(), n);
    for (int k = 0; k < parties; ++k)
        apply_factor(rotated.amplitudes(), n, parties, k, u_dag);

    std::vector<double> probs(state.dim());
    for (std::uint64_t i = 0; i < state.dim(); ++i)
        probs[i] = std::norm(rotated[i]);
    return probs;
}

std::vector<std::uint8_t> born_sample(const DenseState& state, Direction dir,
                                      std::mt19937_64& rng) {
    const std::vector<double> probs = born_distribution(state, dir);
    const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
    double x = unit_real(rng) * total;
    std::uint64_t pick = probs.size() - 1;
    for (std::uint64_t i = 0; i < probs.size(); ++i) {
        x -= probs[i];
        if (x < 0.0) {
            pick = i;
            break;
        }
    }
    const int n = state.n();
    const int parties = party_count(state.dim(), n);
    std::vector<std::uint8_t> outcome(parties);
    decode_index(pick, n, outcome);
    return outcome;
}

namespace {

// Regularized lower incomplete gamma P(a, x) by power series (for x < a + 1).
double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int k = 1; k < 500; ++k) {
        term *= x / (a + k);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma Q(a, x) by Lentz continued fraction
// (for x >= a + 1).
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double regularized_gamma_q(double a, double x) {
    if (a <= 0.0) throw std::invalid_argument("regularized_gamma_q: a must be positive");
    if (x < 0.0) throw std::invalid_argument("regularized_gamma_q: x must be nonnegative");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

ChiSquareResult chi_square_test(const std::vector<std::uint64_t>& counts,
                                const std::vector<double>& probs) {
    if (counts.size() != probs.size() || counts.empty())
        throw std::invalid_argument("chi_square_test: size mismatch");
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    ChiSquareResult r;
    int live_cells = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const double expected = probs[i] * static_cast<double>(total);
        if (expected <= 0.0) {
            if (counts[i] != 0)
                throw std::invalid_argument(
                    "chi_square_test: observed count in zero-probability cell");
            continue;
        }
        ++live_cells;
        const double diff = static_cast<double>(counts[i]) - expected;
        r.statistic += diff * diff / expected;
    }
    r.dof = live_cells - 1;
    r.p_value = regularized_gamma_q(r.dof / 2.0, r.statistic / 2.0);
    return r;
}

Direction random_direction(std::mt19937_64& rng) {
    Direction d;
    d.polar = std::acos(1.0 - 2.0 * unit_real(rng));
    d.azimuth = 2.0 * kPi * unit_real(rng);
    return d;
}

}  // namespace singlet
