#include "singlet/rotation.hpp"

#include <Eigen/Eigenvalues>

#include "singlet/common.hpp"

namespace singlet {

Matrix expm_hermitian(const Matrix& h, double t) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    const Eigen::VectorXd w = es.eigenvalues();
    const Matrix& v = es.eigenvectors();
    Eigen::VectorXcd phases(w.size());
    for (Eigen::Index k = 0; k < w.size(); ++k)
        phases[k] = std::exp(cplx(0.0, -t * w[k]));
    return v * phases.asDiagonal() * v.adjoint();
}

Rotation rotation_operator(const SpinFrame& frame, Direction dir) {
    Rotation r;
    r.n = frame.n;
    if (dir.polar == 0.0 && dir.azimuth == 0.0) {
        r.u = Matrix::Identity(frame.n, frame.n);  // exact identity for the z-axis
        return r;
    }
    r.u = expm_hermitian(frame.sz, dir.azimuth) * expm_hermitian(frame.sy, dir.polar);
    return r;
}

}  // namespace singlet
