#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace singlet {

// Parity sign (+1 / -1) of a permutation, computed by counting inversions.
// The sign equals (-1)^t where t is the number of pair transpositions needed
// to sort the tuple into ascending order.
int permutation_parity(std::span<const std::uint8_t> perm);

// True iff `tuple` is a permutation of {0, ..., n-1}.
bool is_permutation_tuple(std::span<const std::uint8_t> tuple, int n);

// Visit all n! permutations of {0,...,n-1} in lexicographic order.
void for_each_permutation(int n,
                          const std::function<void(std::span<const std::uint8_t>)>& fn);

// Row-major tensor index: tuple (i_1,...,i_n) -> sum_k i_k * n^(n-k).
// One documented convention, used by every dense operation.
std::uint64_t encode_index(std::span<const std::uint8_t> tuple, int n);
void decode_index(std::uint64_t index, int n, std::span<std::uint8_t> out);

// n! as a 64-bit integer (valid for n <= 20).
std::uint64_t factorial(int n);

// base^exp as a 64-bit integer.
std::uint64_t int_pow(std::uint64_t base, int exp);

// n^n as a 64-bit integer.
std::uint64_t dense_dimension(int n);

}  // namespace singlet
