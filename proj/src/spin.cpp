#include "singlet/spin.hpp"

#include <cmath>
#include <stdexcept>

#include "singlet/common.hpp"

namespace singlet {

SpinFrame SpinFrame::make(int n) {
    if (n < 2) throw SizeError("SpinFrame: n must be at least 2");
    const double s = (n - 1) / 2.0;

    SpinFrame f;
    f.n = n;
    f.sz = Matrix::Zero(n, n);
    for (int k = 0; k < n; ++k) f.sz(k, k) = k - s;

    // Raising operator in this ordering: S+ |k> = sqrt(s(s+1) - m(m+1)) |k+1>
    // with m = k - s.
    Matrix sp = Matrix::Zero(n, n);
    for (int k = 0; k + 1 < n; ++k) {
        const double m = k - s;
        sp(k + 1, k) = std::sqrt(s * (s + 1.0) - m * (m + 1.0));
    }
    const Matrix sm = sp.adjoint();
    f.sx = 0.5 * (sp + sm);
    f.sy = cplx(0.0, -0.5) * (sp - sm);
    return f;
}

}  // namespace singlet
