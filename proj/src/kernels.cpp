#include "singlet/kernels.hpp"

#include <vector>

#include "singlet/common.hpp"

namespace singlet {

namespace {

std::uint64_t power(std::uint64_t base, int exp) {
    std::uint64_t p = 1;
    for (int i = 0; i < exp; ++i) p *= base;
    return p;
}

// The dense index splits as  idx = outer * (n * stride) + i * stride + inner
// where i is the digit of `factor`, stride = n^(parties right of factor).
struct FactorLayout {
    std::uint64_t stride;
    std::uint64_t blocks;  // number of (outer, inner) pairs
};

FactorLayout layout_for(std::uint64_t dim, int n, int n_parties, int factor) {
    if (factor < 0 || factor >= n_parties)
        throw DimensionError("apply_factor: factor index out of range");
    if (n < 1 || n > 32)
        throw SizeError("apply_factor: subsystem dimension out of supported range");
    const std::uint64_t stride = power(n, n_parties - 1 - factor);
    return {stride, dim / static_cast<std::uint64_t>(n)};
}

inline void transform_site(std::span<cplx> state, const Matrix& op, int n,
                           std::uint64_t stride, std::uint64_t block) {
    const std::uint64_t inner = block % stride;
    const std::uint64_t outer = block / stride;
    const std::uint64_t base = outer * stride * n + inner;

    cplx in[32];
    for (int i = 0; i < n; ++i) in[i] = state[base + i * stride];
    for (int i = 0; i < n; ++i) {
        cplx acc = 0.0;
        for (int j = 0; j < n; ++j) acc += op(i, j) * in[j];
        state[base + i * stride] = acc;
    }
}

}  // namespace

void apply_factor_serial(std::span<cplx> state, int n, int n_parties, int factor,
                         const Matrix& op) {
    if (op.rows() != n || op.cols() != n)
        throw DimensionError("apply_factor: operator dimension mismatch");
    const auto lay = layout_for(state.size(), n, n_parties, factor);
    for (std::uint64_t b = 0; b < lay.blocks; ++b)
        transform_site(state, op, n, lay.stride, b);
}

void apply_factor_omp(std::span<cplx> state, int n, int n_parties, int factor,
                      const Matrix& op) {
    if (op.rows() != n || op.cols() != n)
        throw DimensionError("apply_factor: operator dimension mismatch");
    const auto lay = layout_for(state.size(), n, n_parties, factor);
    const std::int64_t blocks = static_cast<std::int64_t>(lay.blocks);
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < blocks; ++b)
        transform_site(state, op, n, lay.stride, static_cast<std::uint64_t>(b));
}

void apply_factor(std::span<cplx> state, int n, int n_parties, int factor,
                  const Matrix& op) {
#ifdef _OPENMP
    apply_factor_omp(state, n, n_parties, factor, op);
#else
    apply_factor_serial(state, n, n_parties, factor, op);
#endif
}

cplx inner_product_serial(std::span<const cplx> a, std::span<const cplx> b) {
    if (a.size() != b.size()) throw DimensionError("inner_product: size mismatch");
    cplx acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
    return acc;
}

cplx inner_product_omp(std::span<const cplx> a, std::span<const cplx> b) {
    if (a.size() != b.size()) throw DimensionError("inner_product: size mismatch");
    double re = 0.0, im = 0.0;
    const std::int64_t len = static_cast<std::int64_t>(a.size());
#pragma omp parallel for reduction(+ : re, im) schedule(static)
    for (std::int64_t i = 0; i < len; ++i) {
        const cplx t = std::conj(a[i]) * b[i];
        re += t.real();
        im += t.imag();
    }
    return {re, im};
}

cplx inner_product(std::span<const cplx> a, std::span<const cplx> b) {
#ifdef _OPENMP
    return inner_product_omp(a, b);
#else
    return inner_product_serial(a, b);
#endif
}

double norm_squared(std::span<const cplx> a) {
    return inner_product(a, a).real();
}

}  // namespace singlet
