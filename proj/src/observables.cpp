#include "singlet/observables.hpp"

#include <algorithm>
#include <cmath>

#include "singlet/kernels.hpp"
#include "singlet/permutation.hpp"

namespace singlet {

namespace {

int parties_of(const DenseState& state) {
    int parties = 0;
    std::uint64_t d = state.dim();
    while (d > 1) {
        if (d % state.n() != 0)
            throw DimensionError("dense dimension is not a power of the level count");
        d /= state.n();
        ++parties;
    }
    return parties;
}

int sign_pow(int exponent) { return (exponent % 2 == 0) ? +1 : -1; }

}  // namespace

PeresObservable peres_observable(int n, Direction dir) {
    if (n < 2) throw SizeError("peres_observable: n must be at least 2");
    // In the sz ordering |k> has m = k - s, so (-1)^(s-m) = (-1)^(n-1-k).
    Matrix d = Matrix::Zero(n, n);
    for (int k = 0; k < n; ++k) d(k, k) = sign_pow(n - 1 - k);

    const auto frame = SpinFrame::make(n);
    const Rotation rot = rotation_operator(frame, dir);

    PeresObservable obs;
    obs.n = n;
    obs.dir = dir;
    obs.matrix = rot.u * d * rot.u.adjoint();
    return obs;
}

double correlation_bruteforce(const DenseState& state, const CorrelationSpec& spec) {
    const int parties = parties_of(state);
    if (static_cast<int>(spec.ops.size()) != parties)
        throw DimensionError("correlation_bruteforce: one observable per party required");
    if (spec.n != state.n())
        throw DimensionError("correlation_bruteforce: level count mismatch");

    DenseState work = state;
    for (int k = 0; k < parties; ++k)
        apply_factor(work.amplitudes(), state.n(), parties, k, spec.ops[k]);
    const cplx value = state.overlap(work);
    return value.real();
}

double dirichlet_ratio(int big, double theta) {
    const double s = std::sin(theta);
    if (std::abs(s) < 1e-9) {
        const int k = static_cast<int>(std::llround(theta / kPi));
        return big * sign_pow(k * (big - 1));
    }
    return std::sin(big * theta) / s;
}

double corr_closed_Nm1(int n, double theta) {
    return sign_pow(n / 2) * dirichlet_ratio(n, theta) / n;
}

double corr_closed_Nm2(int n, double theta) {
    const double d1 = dirichlet_ratio(n, theta);
    const double d2 = dirichlet_ratio(n, 2.0 * theta);  // sin(2n*theta)/sin(2*theta)
    return sign_pow(n / 2) * (d1 * d1 - d2) / (static_cast<double>(n) * (n - 1));
}

double corr_closed_Nm2_alt(int n, double theta) {
    return sign_pow(n / 2) * (1.0 + dirichlet_ratio(n + 1, theta)) / (n + 2);
}

ResidualState residual_after_measurement(const DenseState& state,
                                         const std::vector<int>& measured_parties,
                                         Direction dir,
                                         const std::vector<std::uint8_t>& results) {
    const int n = state.n();
    const int parties = parties_of(state);
    if (measured_parties.size() != results.size())
        throw DimensionError("residual_after_measurement: one result per measured party");

    std::vector<bool> measured(parties, false);
    for (int p : measured_parties) {
        if (p < 0 || p >= parties)
            throw DimensionError("residual_after_measurement: party index out of range");
        if (measured[p])
            throw DimensionError("residual_after_measurement: duplicate party index");
        measured[p] = true;
    }

    // Work in the eigenbasis of the measured spin component: rotate every
    // factor by U^dag, so projecting a measured party is selecting one digit.
    const auto frame = SpinFrame::make(n);
    const Matrix u_dag = rotation_operator(frame, dir).u.adjoint();
    DenseState rotated = state;
    for (int k = 0; k < parties; ++k)
        apply_factor(rotated.amplitudes(), n, parties, k, u_dag);

    const int remaining = parties - static_cast<int>(measured_parties.size());
    ResidualState res;
    res.n = n;
    res.remaining = remaining;
    res.amps.assign(int_pow(n, remaining), 0.0);

    std::vector<std::uint8_t> digits(parties);
    for (std::uint64_t idx = 0; idx < rotated.dim(); ++idx) {
        decode_index(idx, n, digits);
        bool match = true;
        for (std::size_t j = 0; j < measured_parties.size(); ++j) {
            if (digits[measured_parties[j]] != results[j]) {
                match = false;
                break;
            }
        }
        if (!match) continue;
        std::uint64_t out = 0;
        for (int k = 0; k < parties; ++k)
            if (!measured[k]) out = out * n + digits[k];
        res.amps[out] += rotated[idx];
    }

    double norm2 = 0.0;
    for (const cplx& a : res.amps) norm2 += std::norm(a);
    if (norm2 < 1e-24)
        throw ImpossibleOutcomeError(
            "residual_after_measurement: announced outcome has zero probability");
    const double inv = 1.0 / std::sqrt(norm2);
    for (cplx& a : res.amps) a *= inv;

    // Canonical global phase: first nonzero amplitude positive real.
    for (const cplx& a : res.amps) {
        if (std::abs(a) > 1e-12) {
            const cplx phase = std::conj(a) / std::abs(a);
            for (cplx& b : res.amps) b *= phase;
            break;
        }
    }
    return res;
}

double residual_pair_correlation(const ResidualState& residual, double thetaA,
                                 double thetaB) {
    if (residual.remaining != 2)
        throw DimensionError("residual_pair_correlation: two remaining parties required");
    const int n = residual.n;
    const Matrix a = peres_observable(n, Direction::polar_only(thetaA)).matrix;
    const Matrix b = peres_observable(n, Direction::polar_only(thetaB)).matrix;

    std::vector<cplx> work = residual.amps;
    apply_factor(work, n, 2, 0, a);
    apply_factor(work, n, 2, 1, b);
    return inner_product(residual.amps, work).real();
}

double corr_sigma(int n, double theta) {
    return sign_pow(n + 1) * std::pow(std::cos(theta), n - 1);
}

double corr_sigma_alt(int n, double theta) {
    return -corr_sigma(n, theta);
}

}  // namespace singlet
