#pragma once

#include <Eigen/Dense>

namespace singlet {

using Matrix = Eigen::MatrixXcd;

// Spin operators for a spin-(n-1)/2 subsystem in the n-dimensional basis
// ordered so that basis state |k> (k = 0..n-1) is the sz eigenstate with
// eigenvalue m_k = k - (n-1)/2.
struct SpinFrame {
    int n = 0;
    Matrix sx, sy, sz;

    static SpinFrame make(int n);
};

}  // namespace singlet
