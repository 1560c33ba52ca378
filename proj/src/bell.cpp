#include "singlet/bell.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "singlet/common.hpp"

namespace singlet {

Kernel make_closed_kernel(int n, int m) {
    if (m == 1) return [n](double t) { return corr_closed_Nm1(n, t); };
    if (m == 2) return [n](double t) { return corr_closed_Nm2(n, t); };
    throw ConfigError("closed kernels exist for m in {1, 2}");
}

Kernel make_closed_alt_kernel(int n, int m) {
    if (m == 1) return [n](double t) { return corr_closed_Nm1(n, t); };
    if (m == 2) return [n](double t) { return corr_closed_Nm2_alt(n, t); };
    throw ConfigError("closed kernels exist for m in {1, 2}");
}

Kernel make_sigma_kernel(int n) {
    return [n](double t) { return corr_sigma(n, t); };
}

Kernel make_bruteforce_kernel(int n, int m) {
    if (m < 1 || m >= n) throw ConfigError("bruteforce kernel needs 1 <= m < n");
    auto state = std::make_shared<DenseState>(to_dense(SingletState::build(n)));
    const Matrix a0 = peres_observable(n, Direction::z()).matrix;
    return [n, m, state, a0](double theta) {
        const Matrix b = peres_observable(n, Direction::polar_only(theta)).matrix;
        CorrelationSpec spec;
        spec.n = n;
        spec.ops.assign(n - m, a0);
        spec.ops.insert(spec.ops.end(), m, b);
        return correlation_bruteforce(*state, spec);
    };
}

double chsh_value(const BellSetting& setting, const Kernel& kernel) {
    const auto& a = setting.angles;
    return std::abs(kernel(a[0] - a[2]) + kernel(a[0] - a[3]) +
                    kernel(a[1] - a[2]) - kernel(a[1] - a[3]));
}

double default_half_width(int n, int m, KernelFamily family) {
    if (family == KernelFamily::sigma) {
        if (n <= 12) return kPi;
        return std::min(kPi, 16.0 / std::sqrt(static_cast<double>(n - 1)));
    }
    if (n <= 12) return kPi;
    const double denom = (family == KernelFamily::closed_alt && m == 2) ? n + 1 : n;
    return std::min(kPi, 8.0 * kPi / denom);
}

namespace {

struct GridBest {
    double value = -1.0;
    std::array<double, 3> x{};
};

// On a symmetric uniform grid every angle is an integer multiple of the grid
// step, so each of the four CHSH arguments is too; evaluating the kernel once
// per lattice offset turns the O(G^3) scan into table lookups.
GridBest grid_scan(const Kernel& kernel, int grid, double half_width,
                   long& evaluations) {
    const int half = (grid - 1) / 2;
    const double h = half_width / half;

    std::vector<double> table(2 * grid - 1);
    for (int k = -(grid - 1); k <= grid - 1; ++k) {
        table[k + grid - 1] = kernel(k * h);
        ++evaluations;
    }
    const auto e = [&](int k) { return table[k + grid - 1]; };

    GridBest best;
    for (int ia = -half; ia <= half; ++ia)
        for (int ib = -half; ib <= half; ++ib)
            for (int ic = -half; ic <= half; ++ic) {
                const double v =
                    std::abs(e(-ib) + e(-ic) + e(ia - ib) - e(ia - ic));
                if (v > best.value) {
                    best.value = v;
                    best.x = {ia * h, ib * h, ic * h};
                }
            }
    return best;
}

// Nelder-Mead on (theta_a, theta_B, theta_b); fixed iteration budget keeps
// runs reproducible.
struct Simplex {
    std::array<std::array<double, 3>, 4> x;
    std::array<double, 4> f;
};

double nelder_mead(const std::function<double(const std::array<double, 3>&)>& objective,
                   std::array<double, 3>& x0, double scale, int iterations,
                   long& evaluations, double& final_spread) {
    Simplex s;
    s.x[0] = x0;
    for (int i = 1; i < 4; ++i) {
        s.x[i] = x0;
        s.x[i][i - 1] += scale;
    }
    for (int i = 0; i < 4; ++i) {
        s.f[i] = objective(s.x[i]);
        ++evaluations;
    }

    const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;
    for (int iter = 0; iter < iterations; ++iter) {
        std::array<int, 4> order{0, 1, 2, 3};
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return s.f[a] < s.f[b]; });
        const int lo = order[0], hi = order[3], second_hi = order[2];

        if (s.f[hi] - s.f[lo] < 1e-13) break;

        std::array<double, 3> centroid{};
        for (int i = 0; i < 4; ++i) {
            if (i == hi) continue;
            for (int d = 0; d < 3; ++d) centroid[d] += s.x[i][d] / 3.0;
        }

        auto blend = [&](double t) {
            std::array<double, 3> p;
            for (int d = 0; d < 3; ++d)
                p[d] = centroid[d] + t * (centroid[d] - s.x[hi][d]);
            return p;
        };

        const auto reflected = blend(alpha);
        const double fr = objective(reflected);
        ++evaluations;
        if (fr < s.f[lo]) {
            const auto expanded = blend(gamma);
            const double fe = objective(expanded);
            ++evaluations;
            if (fe < fr) {
                s.x[hi] = expanded;
                s.f[hi] = fe;
            } else {
                s.x[hi] = reflected;
                s.f[hi] = fr;
            }
        } else if (fr < s.f[second_hi]) {
            s.x[hi] = reflected;
            s.f[hi] = fr;
        } else {
            const auto contracted = blend(-rho);
            const double fc = objective(contracted);
            ++evaluations;
            if (fc < s.f[hi]) {
                s.x[hi] = contracted;
                s.f[hi] = fc;
            } else {
                for (int i = 0; i < 4; ++i) {
                    if (i == lo) continue;
                    for (int d = 0; d < 3; ++d)
                        s.x[i][d] = s.x[lo][d] + sigma * (s.x[i][d] - s.x[lo][d]);
                    s.f[i] = objective(s.x[i]);
                    ++evaluations;
                }
            }
        }
    }

    int best = 0, worst = 0;
    for (int i = 1; i < 4; ++i) {
        if (s.f[i] < s.f[best]) best = i;
        if (s.f[i] > s.f[worst]) worst = i;
    }
    final_spread = s.f[worst] - s.f[best];
    x0 = s.x[best];
    return s.f[best];
}

}  // namespace

BellResult maximize_violation(int n, int m, const Kernel& kernel,
                              const MaximizeOptions& options) {
    MaximizeOptions opt = options;
    if (opt.half_width <= 0.0)
        opt.half_width = default_half_width(n, m, KernelFamily::closed);
    if (opt.grid_points % 2 == 0) ++opt.grid_points;
    if (opt.grid_points < 61) opt.grid_points = 61;

    long evaluations = 0;
    GridBest coarse = grid_scan(kernel, opt.grid_points, opt.half_width, evaluations);

    const double h = opt.half_width / ((opt.grid_points - 1) / 2);
    auto objective = [&](const std::array<double, 3>& x) {
        BellSetting s{n, m, {0.0, x[0], x[1], x[2]}};
        return -chsh_value(s, kernel);
    };
    std::array<double, 3> x = coarse.x;
    double spread = 0.0;
    const double refined = -nelder_mead(objective, x, h, opt.polish_iterations,
                                        evaluations, spread);

    BellResult r;
    r.evaluations = evaluations;
    r.converged = spread < 1e-9;
    if (refined >= coarse.value) {
        r.value = refined;
        r.argmax_angles = {0.0, x[0], x[1], x[2]};
    } else {
        r.value = coarse.value;
        r.argmax_angles = {0.0, coarse.x[0], coarse.x[1], coarse.x[2]};
    }
    return r;
}

BellResult maximize_violation_auto(int n, int m, KernelFamily family) {
    MaximizeOptions opt;
    opt.half_width = default_half_width(n, m, family);
    switch (family) {
        case KernelFamily::closed:
            return maximize_violation(n, m, make_closed_kernel(n, m), opt);
        case KernelFamily::closed_alt:
            return maximize_violation(n, m, make_closed_alt_kernel(n, m), opt);
        case KernelFamily::sigma:
            return maximize_violation(n, 1, make_sigma_kernel(n), opt);
        case KernelFamily::bruteforce:
            return maximize_violation(n, m, make_bruteforce_kernel(n, m), opt);
    }
    throw ConfigError("unknown kernel family");
}

BellResult maximize_sigma_violation(int n) {
    return maximize_violation_auto(n, 1, KernelFamily::sigma);
}

AsymptoteReport asymptote_estimate(int m, const std::vector<int>& n_list,
                                   KernelFamily family) {
    if (family == KernelFamily::bruteforce)
        throw ConfigError("asymptote_estimate: closed-form kernels only");
    AsymptoteReport report;
    report.n_list = n_list;
    for (int n : n_list)
        report.maxima.push_back(maximize_violation_auto(n, m, family).value);

    report.monotone = true;
    for (std::size_t i = 1; i < report.maxima.size(); ++i) {
        const bool down = report.maxima[i] <= report.maxima[i - 1] + 1e-9;
        if (!down) report.monotone = false;
    }
    std::string t = report.monotone ? "monotone non-increasing:" : "non-monotone:";
    for (std::size_t i = 0; i < report.maxima.size(); ++i) {
        t += " n=" + std::to_string(report.n_list[i]) + " -> " +
             format_real(report.maxima[i], 6);
        if (i + 1 < report.maxima.size()) t += ",";
    }
    report.trend = t;
    return report;
}

int classical_chsh_bound() {
    int best = 0;
    for (int aA = -1; aA <= 1; aA += 2)
        for (int aa = -1; aa <= 1; aa += 2)
            for (int bB = -1; bB <= 1; bB += 2)
                for (int bb = -1; bb <= 1; bb += 2) {
                    const int s = std::abs(aA * bB + aA * bb + aa * bB - aa * bb);
                    best = std::max(best, s);
                }
    return best;
}

}  // namespace singlet
