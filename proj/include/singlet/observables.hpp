#pragma once

#include <vector>

#include "singlet/rotation.hpp"
#include "singlet/state.hpp"

namespace singlet {

// Dichotomic +/-1 observable for an n-level subsystem: measure the spin
// component along `dir` and assign alternating signs (-1)^(s-m) to the
// outcomes m = s, s-1, ..., -s.
struct PeresObservable {
    int n = 0;
    Direction dir;
    Matrix matrix;  // U_dir * diag((-1)^(s-m)) * U_dir^dag
};

PeresObservable peres_observable(int n, Direction dir);

// One observable per party; evaluated as <state| O_1 (x) ... (x) O_p |state>.
struct CorrelationSpec {
    int n = 0;                 // levels per subsystem
    std::vector<Matrix> ops;   // one per party, each n x n
};

double correlation_bruteforce(const DenseState& state, const CorrelationSpec& spec);

// sin(big*theta)/sin(theta) with the removable singularities at theta = k*pi
// evaluated by their analytic limit big*(-1)^(k*(big-1)).
double dirichlet_ratio(int big, double theta);

// Closed form for the full-product Peres correlation when n-1 parties measure
// along A and one along B, theta the angle between A and B:
//   (-1)^floor(n/2) * (1/n) * sin(n*theta)/sin(theta).
double corr_closed_Nm1(int n, double theta);

// Closed form for the split with two parties along B.  This is the exact
// expression, valid for every n and equal to the brute-force contraction:
//   (-1)^floor(n/2) / (n(n-1)) * { [sin(n*theta)/sin(theta)]^2
//                                   - sin(2*n*theta)/sin(2*theta) }.
double corr_closed_Nm2(int n, double theta);

// Alternative closed form in circulation for the same m=2 split:
//   (-1)^floor(n/2) * (1/(n+2)) * { 1 + sin((n+1)*theta)/sin(theta) }.
// It coincides with the exact form only at n=4; it is retained (and reported
// side by side in the corr-sweep output) because the reference violation
// value 2.424 at n=5 and the large-n asymptote 2.481 for this family track
// this expression.
double corr_closed_Nm2_alt(int n, double theta);

// State of the remaining parties after a subset measured the spin component
// along `dir` and announced their results, expressed in the eigenbasis of
// that component and renormalized.  The global phase is canonicalized so the
// first nonzero amplitude is positive real.
struct ResidualState {
    int n = 0;          // levels per subsystem
    int remaining = 0;  // number of unmeasured parties
    std::vector<cplx> amps;  // dimension n^remaining
};

ResidualState residual_after_measurement(const DenseState& state,
                                         const std::vector<int>& measured_parties,
                                         Direction dir,
                                         const std::vector<std::uint8_t>& results);

// Peres-Peres correlation on a two-party residual state, directions coplanar
// at polar angles thetaA / thetaB relative to the announced component.
double residual_pair_correlation(const ResidualState& residual, double thetaA,
                                 double thetaB);

// Closed form for the two-party correlation on the canonical residual state
// (all middle values announced, pair {0, n-1} remaining):
//   (-1)^(n+1) * cos^(n-1)(theta).
// The sign is fixed by the brute-force residual oracle; the opposite
// convention (-1)^n, which appears elsewhere, is provided as corr_sigma_alt
// and reported alongside in the corr-sweep output rather than absorbed.
double corr_sigma(int n, double theta);
double corr_sigma_alt(int n, double theta);

}  // namespace singlet
