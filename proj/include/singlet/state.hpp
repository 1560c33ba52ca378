#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "singlet/common.hpp"

namespace singlet {

struct Rotation;  // rotation.hpp

// Largest n for which the sparse n!-term singlet is materialized.
inline constexpr int kSingletMaxN = 10;
// Largest n for which dense n^n vectors are allowed (7^7 = 823543 amplitudes).
inline constexpr int kDenseMaxN = 7;

// Totally antisymmetric state of n n-level subsystems, stored sparsely:
// exactly n! nonzero amplitudes, one per permutation basis state, each equal
// to (parity sign) / sqrt(n!).
class SingletState {
  public:
    static SingletState build(int n);

    int n() const { return n_; }
    std::uint64_t term_count() const { return amps_.size(); }

    // Basis tuple for the k-th stored term (lexicographic order).
    std::span<const std::uint8_t> term(std::uint64_t k) const;
    double term_amplitude(std::uint64_t k) const { return amps_[k]; }

    // Amplitude of an arbitrary basis tuple: (+/-) 1/sqrt(n!) on permutation
    // tuples, exactly 0 elsewhere.
    double amplitude(std::span<const std::uint8_t> basis) const;

    // Sum of squared amplitudes (should be 1 up to rounding).
    double norm_squared() const;

  private:
    SingletState() = default;
    int n_ = 0;
    std::vector<std::uint8_t> perms_;  // term_count * n entries, flattened
    std::vector<double> amps_;
};

// Dense complex vector over the full n^n product basis, row-major tensor order
// (see encode_index).
class DenseState {
  public:
    DenseState(int n, std::uint64_t dim) : n_(n), v_(dim) {}

    int n() const { return n_; }
    std::uint64_t dim() const { return v_.size(); }
    std::span<cplx> amplitudes() { return v_; }
    std::span<const cplx> amplitudes() const { return v_; }
    cplx& operator[](std::uint64_t i) { return v_[i]; }
    const cplx& operator[](std::uint64_t i) const { return v_[i]; }

    double norm() const;
    // <this|other>
    cplx overlap(const DenseState& other) const;

    // Debug form: one "index re im" line per nonzero amplitude.
    void dump(std::ostream& os, double cutoff = 0.0) const;

  private:
    int n_;
    std::vector<cplx> v_;
};

// Expand the sparse singlet into its dense vector.
DenseState to_dense(const SingletState& state);

// Apply the same single-subsystem rotation to every tensor factor.
DenseState apply_lateral_rotation(const DenseState& state, const Rotation& rot);

}  // namespace singlet
