#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "singlet/observables.hpp"

namespace singlet {

// Correlation kernel: maps the angle between the two measurement directions
// to the expected +/-1 product.  Kernels are bound to a fixed (n, m) split.
using Kernel = std::function<double(double)>;

// Which closed-form family a kernel evaluates.
enum class KernelFamily {
    closed,      // exact closed forms (m=1 or m=2)
    closed_alt,  // alternative m=2 form (see corr_closed_Nm2_alt)
    sigma,       // two-party residual-state family
    bruteforce,  // dense contraction on the constructed state
};

Kernel make_closed_kernel(int n, int m);
Kernel make_closed_alt_kernel(int n, int m);
// Residual-pair kernel corr_sigma(n, theta).  The closed form is the
// one-analyzer-at-z slice of the residual correlation; the CHSH search
// evaluates it on angle differences, which is the convention behind the
// quoted maxima.  (For n > 2 the underlying two-angle correlation is not a
// function of the difference alone; see the observables tests.)
Kernel make_sigma_kernel(int n);
// Dense-contraction kernel; n is capped by the dense limit. The state and
// the n-1 (or n-2) A-side observables are shared across evaluations.
Kernel make_bruteforce_kernel(int n, int m);

// Four coplanar measurement angles (theta_A, theta_a, theta_B, theta_b);
// n-m parties choose between A/a, m parties between B/b.
struct BellSetting {
    int n = 0;
    int m = 1;
    std::array<double, 4> angles{};  // theta_A, theta_a, theta_B, theta_b
};

struct BellResult {
    double value = 0.0;
    std::array<double, 4> argmax_angles{};  // theta_A fixed at 0
    long evaluations = 0;
    // False when the polish stage ran out of budget before its simplex
    // collapsed; such rows are flagged by the table writer.
    bool converged = true;
};

// | E(tA-tB) + E(tA-tb) + E(ta-tB) - E(ta-tb) |
double chsh_value(const BellSetting& setting, const Kernel& kernel);

struct MaximizeOptions {
    int grid_points = 65;     // per axis; >= 60 points, odd so 0 is on-grid
    double half_width = 0.0;  // search box [-w, +w]^3; 0 = pick automatically
    int polish_iterations = 500;
};

// Automatic box: the full period for small n; for large n the optimum
// concentrates near zero and the box shrinks with n to keep it resolved.
double default_half_width(int n, int m, KernelFamily family);

// Global maximum of the CHSH expression over (theta_a, theta_B, theta_b),
// theta_A fixed at 0: coarse grid (difference-table evaluation) followed by
// Nelder-Mead refinement.  Deterministic for a fixed configuration; grid
// ties are broken toward lexicographically smaller angles.
BellResult maximize_violation(int n, int m, const Kernel& kernel,
                              const MaximizeOptions& options = {});

BellResult maximize_violation_auto(int n, int m, KernelFamily family);

// Standard two-party CHSH on the residual-state family.
BellResult maximize_sigma_violation(int n);

// Maxima for each n in the list (closed-form kernels only), plus a plain-text
// trend report of the successive differences.
struct AsymptoteReport {
    std::vector<int> n_list;
    std::vector<double> maxima;
    bool monotone = false;
    std::string trend;
};
AsymptoteReport asymptote_estimate(int m, const std::vector<int>& n_list,
                                   KernelFamily family = KernelFamily::closed);

// Largest |CHSH| over all 2^4 deterministic local +/-1 strategies; equals 2.
int classical_chsh_bound();

}  // namespace singlet
