// Measurement sampling: chi-square machinery against frozen reference values,
// the fast permutation sampler against the exact Born-rule oracle.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <vector>

#include "singlet/permutation.hpp"
#include "singlet/sampling.hpp"
#include "singlet/state.hpp"

using namespace singlet;

TEST_CASE("regularized gamma Q reproduces frozen chi-square tails") {
    // Q(k/2, x/2) = chi-square survival function with k dof at x; the
    // reference values were computed once with an independent implementation
    // and frozen here.
    struct Ref { double a, x, q; };
    const Ref refs[] = {
        {0.5, 3.0, 0.0143058784354296},       // k=1,  x=6
        {2.5, 5.0, 0.0752352461465122},       // k=5,  x=10
        {11.5, 15.0, 0.149401647696323},      // k=23, x=30
        {11.5, 20.819, 0.0100010609311221},   // k=23, x=41.638
        {59.5, 70.0, 0.0915723487598233},     // k=119, x=140
    };
    for (const Ref& r : refs)
        CHECK(regularized_gamma_q(r.a, r.x) ==
              doctest::Approx(r.q).epsilon(1e-10));

    CHECK(regularized_gamma_q(0.5, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS(regularized_gamma_q(-1.0, 1.0));
    CHECK_THROWS(regularized_gamma_q(1.0, -1.0));
}

TEST_CASE("chi-square test behaves on exact and impossible data") {
    // Counts exactly at expectation: statistic 0, p-value 1.
    const std::vector<std::uint64_t> counts{25, 25, 25, 25};
    const std::vector<double> probs{0.25, 0.25, 0.25, 0.25};
    const ChiSquareResult r = chi_square_test(counts, probs);
    CHECK(r.statistic == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(r.dof == 3);
    CHECK(r.p_value == doctest::Approx(1.0).epsilon(1e-12));

    // Observations in a zero-probability cell are a hard failure.
    CHECK_THROWS(chi_square_test({10, 1}, {1.0, 0.0}));

    // Zero-probability cells with zero counts are skipped, reducing dof.
    const ChiSquareResult s = chi_square_test({50, 50, 0}, {0.5, 0.5, 0.0});
    CHECK(s.dof == 1);
}

TEST_CASE("random_permutation is uniform over S_3") {
    auto rng = make_stream(11, 0);
    const int trials = 60000;
    std::map<std::uint64_t, std::uint64_t> hist;
    for (int t = 0; t < trials; ++t) {
        const auto p = random_permutation(3, rng);
        REQUIRE(is_permutation_tuple(p, 3));
        ++hist[encode_index(p, 3)];
    }
    REQUIRE(hist.size() == 6);
    std::vector<std::uint64_t> counts;
    for (const auto& [k, c] : hist) counts.push_back(c);
    const ChiSquareResult r = chi_square_test(counts, std::vector<double>(6, 1.0 / 6));
    CHECK(r.p_value > 1e-3);
}

TEST_CASE("common-direction sampler: n=2 marginal at 3 sigma") {
    const SingletState s = SingletState::build(2);
    auto rng = make_stream(11, 1);
    const int trials = 100000;
    for (const Direction dir : {Direction::z(), Direction{1.1, 0.4}}) {
        int zero_one = 0;
        for (int t = 0; t < trials; ++t) {
            const auto outcome = sample_common_direction(s, dir, rng);
            REQUIRE(is_permutation_tuple(outcome, 2));
            if (outcome[0] == 0) ++zero_one;
        }
        const double rate = static_cast<double>(zero_one) / trials;
        const double sigma = std::sqrt(0.25 / trials);
        CHECK(std::abs(rate - 0.5) <= 3 * sigma);
    }
}

TEST_CASE("common-direction sampler: n=4 uniform over 24 permutations") {
    const SingletState s = SingletState::build(4);
    auto rng = make_stream(11, 2);
    const int trials = 100000;
    std::map<std::uint64_t, std::size_t> cell;
    std::vector<std::uint64_t> counts(24, 0);
    {
        std::size_t k = 0;
        for_each_permutation(4, [&](std::span<const std::uint8_t> p) {
            cell[encode_index(p, 4)] = k++;
        });
    }
    for (int t = 0; t < trials; ++t) {
        const auto outcome = sample_common_direction(s, {0.6, 1.9}, rng);
        ++counts[cell.at(encode_index(outcome, 4))];
    }
    const ChiSquareResult r =
        chi_square_test(counts, std::vector<double>(24, 1.0 / 24));
    CHECK(r.p_value > 0.01);
}

TEST_CASE("Born distribution is uniform on permutations for any direction") {
    for (int n : {2, 3}) {
        const DenseState d = to_dense(SingletState::build(n));
        auto rng = make_stream(11, 3);
        for (int rep = 0; rep < 3; ++rep) {
            const Direction dir = random_direction(rng);
            const auto probs = born_distribution(d, dir);
            REQUIRE(probs.size() == dense_dimension(n));
            double total = 0.0;
            std::vector<std::uint8_t> digits(n);
            const double uniform = 1.0 / static_cast<double>(factorial(n));
            for (std::uint64_t i = 0; i < probs.size(); ++i) {
                total += probs[i];
                decode_index(i, n, digits);
                if (is_permutation_tuple(digits, n))
                    CHECK(probs[i] == doctest::Approx(uniform).epsilon(1e-9));
                else
                    CHECK(probs[i] <= 1e-12);
            }
            CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("fast sampler matches the Born-rule oracle (chi-square)") {
    const int n = 3;
    const SingletState sparse = SingletState::build(n);
    const DenseState dense = to_dense(sparse);
    const Direction dir{0.8, -0.3};
    auto rng_fast = make_stream(11, 4);
    auto rng_born = make_stream(11, 5);

    std::map<std::uint64_t, std::size_t> cell;
    {
        std::size_t k = 0;
        for_each_permutation(n, [&](std::span<const std::uint8_t> p) {
            cell[encode_index(p, n)] = k++;
        });
    }
    const int trials = 20000;
    std::vector<std::uint64_t> fast_counts(6, 0), born_counts(6, 0);
    for (int t = 0; t < trials; ++t) {
        ++fast_counts[cell.at(
            encode_index(sample_common_direction(sparse, dir, rng_fast), n))];
        ++born_counts[cell.at(encode_index(born_sample(dense, dir, rng_born), n))];
    }
    const std::vector<double> uniform(6, 1.0 / 6);
    CHECK(chi_square_test(fast_counts, uniform).p_value > 1e-3);
    CHECK(chi_square_test(born_counts, uniform).p_value > 1e-3);
}

TEST_CASE("random directions cover the sphere") {
    auto rng = make_stream(11, 6);
    const int trials = 20000;
    double sum_cos = 0.0;
    for (int t = 0; t < trials; ++t) {
        const Direction d = random_direction(rng);
        REQUIRE(d.polar >= 0.0);
        REQUIRE(d.polar <= kPi);
        REQUIRE(d.azimuth >= 0.0);
        REQUIRE(d.azimuth < 2 * kPi);
        sum_cos += std::cos(d.polar);
    }
    // cos(polar) is uniform on [-1, 1]: mean 0, variance 1/3.
    const double mean = sum_cos / trials;
    CHECK(std::abs(mean) <= 3 * std::sqrt(1.0 / 3 / trials));
}
