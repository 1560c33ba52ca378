#pragma once

#include <cstdint>
#include <span>

#include "singlet/common.hpp"
#include "singlet/spin.hpp"

namespace singlet {

// Dense tensor kernels. Every kernel has a serial reference implementation
// (the correctness baseline used by the tests) and an OpenMP variant used by
// default. bench/bench_kernels.cpp compares the two.

// Apply an n x n one-subsystem operator to tensor factor `factor`
// (0-based from the left) of a dense vector over n_parties subsystems.
void apply_factor_serial(std::span<cplx> state, int n, int n_parties, int factor,
                         const Matrix& op);
void apply_factor_omp(std::span<cplx> state, int n, int n_parties, int factor,
                      const Matrix& op);
// Default entry point (OpenMP when available).
void apply_factor(std::span<cplx> state, int n, int n_parties, int factor,
                  const Matrix& op);

// <a|b> over dense vectors.
cplx inner_product_serial(std::span<const cplx> a, std::span<const cplx> b);
cplx inner_product_omp(std::span<const cplx> a, std::span<const cplx> b);
cplx inner_product(std::span<const cplx> a, std::span<const cplx> b);

double norm_squared(std::span<const cplx> a);

}  // namespace singlet
