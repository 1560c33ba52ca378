#pragma once

#include <random>
#include <vector>

#include "singlet/rotation.hpp"
#include "singlet/state.hpp"

namespace singlet {

// One joint measurement of the spin component along `dir` by all n parties.
// Fast path: because every squared amplitude of the singlet equals 1/n! in
// any common-direction eigenbasis, the outcome tuple is a uniform random
// permutation of {0..n-1}; we draw it directly in O(n). The Born-rule path
// below is kept as the oracle the fast path is tested against.
std::vector<std::uint8_t> sample_common_direction(const SingletState& state,
                                                  Direction dir,
                                                  std::mt19937_64& rng);

// Uniform random permutation of {0..n-1} (Fisher-Yates with rejection-free
// bounded draws).
std::vector<std::uint8_t> random_permutation(int n, std::mt19937_64& rng);

// Exact Born distribution over all n^n outcome tuples when every party
// measures along `dir`: probabilities of |<k_1..k_n| (U^dag)^{(x)n} |psi>|^2
// in encode_index order.
std::vector<double> born_distribution(const DenseState& state, Direction dir);

// Draw one outcome tuple from the exact Born distribution (oracle path).
std::vector<std::uint8_t> born_sample(const DenseState& state, Direction dir,
                                      std::mt19937_64& rng);

// Regularized upper incomplete gamma Q(a, x): series/continued-fraction
// implementation used for chi-square tail probabilities.
double regularized_gamma_q(double a, double x);

// Pearson chi-square test of observed counts against expected probabilities.
// Returns the p-value Q(dof/2, stat/2) with dof = #cells - 1.
struct ChiSquareResult {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 0.0;
};
ChiSquareResult chi_square_test(const std::vector<std::uint64_t>& counts,
                                const std::vector<double>& probs);

// Uniform random direction on the sphere.
Direction random_direction(std::mt19937_64& rng);

}  // namespace singlet
