#include "singlet/state.hpp"

#include <cmath>
#include <ostream>

#include "singlet/kernels.hpp"
#include "singlet/permutation.hpp"
#include "singlet/rotation.hpp"

namespace singlet {

SingletState SingletState::build(int n) {
    if (n < 2 || n > kSingletMaxN)
        throw SizeError("build_singlet: n must be in [2, " +
                        std::to_string(kSingletMaxN) + "]");
    SingletState s;
    s.n_ = n;
    const std::uint64_t count = factorial(n);
    s.perms_.reserve(count * n);
    s.amps_.reserve(count);
    const double mod = 1.0 / std::sqrt(static_cast<double>(count));
    for_each_permutation(n, [&](std::span<const std::uint8_t> p) {
        s.perms_.insert(s.perms_.end(), p.begin(), p.end());
        s.amps_.push_back(permutation_parity(p) * mod);
    });
    return s;
}

std::span<const std::uint8_t> SingletState::term(std::uint64_t k) const {
    return {perms_.data() + k * n_, static_cast<std::size_t>(n_)};
}

double SingletState::amplitude(std::span<const std::uint8_t> basis) const {
    if (basis.size() != static_cast<std::size_t>(n_))
        throw DimensionError("amplitude: tuple length mismatch");
    if (!is_permutation_tuple(basis, n_)) return 0.0;
    const double mod = 1.0 / std::sqrt(static_cast<double>(amps_.size()));
    return permutation_parity(basis) * mod;
}

double SingletState::norm_squared() const {
    double acc = 0.0;
    for (double a : amps_) acc += a * a;
    return acc;
}

double DenseState::norm() const {
    return std::sqrt(norm_squared(amplitudes()));
}

cplx DenseState::overlap(const DenseState& other) const {
    if (other.dim() != dim()) throw DimensionError("overlap: dimension mismatch");
    return inner_product(amplitudes(), other.amplitudes());
}

void DenseState::dump(std::ostream& os, double cutoff) const {
    for (std::uint64_t i = 0; i < dim(); ++i) {
        if (std::abs(v_[i]) <= cutoff) continue;
        os << i << ' ' << format_real(v_[i].real(), 17) << ' '
           << format_real(v_[i].imag(), 17) << '\n';
    }
}

DenseState to_dense(const SingletState& state) {
    const int n = state.n();
    if (n > kDenseMaxN)
        throw SizeError("to_dense: dense form capped at n = " +
                        std::to_string(kDenseMaxN));
    DenseState d(n, dense_dimension(n));
    for (std::uint64_t k = 0; k < state.term_count(); ++k)
        d[encode_index(state.term(k), n)] = state.term_amplitude(k);
    return d;
}

DenseState apply_lateral_rotation(const DenseState& state, const Rotation& rot) {
    if (rot.n != state.n())
        throw DimensionError("apply_lateral_rotation: dimension mismatch");
    DenseState out = state;
    for (int k = 0; k < state.n(); ++k)
        apply_factor(out.amplitudes(), state.n(), state.n(), k, rot.u);
    return out;
}

}  // namespace singlet
