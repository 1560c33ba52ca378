#include "singlet/permutation.hpp"

#include <algorithm>
#include <numeric>

namespace singlet {

int permutation_parity(std::span<const std::uint8_t> perm) {
    int inversions = 0;
    const std::size_t n = perm.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (perm[i] > perm[j]) ++inversions;
    return (inversions % 2 == 0) ? +1 : -1;
}

bool is_permutation_tuple(std::span<const std::uint8_t> tuple, int n) {
    if (tuple.size() != static_cast<std::size_t>(n)) return false;
    std::uint32_t seen = 0;
    for (std::uint8_t v : tuple) {
        if (v >= n) return false;
        const std::uint32_t bit = 1u << v;
        if (seen & bit) return false;
        seen |= bit;
    }
    return true;
}

void for_each_permutation(int n,
                          const std::function<void(std::span<const std::uint8_t>)>& fn) {
    std::vector<std::uint8_t> p(n);
    std::iota(p.begin(), p.end(), std::uint8_t{0});
    do {
        fn(std::span<const std::uint8_t>(p));
    } while (std::next_permutation(p.begin(), p.end()));
}

std::uint64_t encode_index(std::span<const std::uint8_t> tuple, int n) {
    std::uint64_t idx = 0;
    for (std::uint8_t v : tuple) idx = idx * n + v;
    return idx;
}

void decode_index(std::uint64_t index, int n, std::span<std::uint8_t> out) {
    for (std::size_t k = out.size(); k-- > 0;) {
        out[k] = static_cast<std::uint8_t>(index % n);
        index /= n;
    }
}

std::uint64_t factorial(int n) {
    std::uint64_t f = 1;
    for (int k = 2; k <= n; ++k) f *= static_cast<std::uint64_t>(k);
    return f;
}

std::uint64_t int_pow(std::uint64_t base, int exp) {
    std::uint64_t p = 1;
    for (int k = 0; k < exp; ++k) p *= base;
    return p;
}

std::uint64_t dense_dimension(int n) {
    return int_pow(static_cast<std::uint64_t>(n), n);
}

}  // namespace singlet
