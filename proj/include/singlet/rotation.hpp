#pragma once

#include "singlet/spin.hpp"

namespace singlet {

// Measurement direction on the unit sphere.
struct Direction {
    double polar = 0.0;    // angle from the z-axis
    double azimuth = 0.0;  // angle from the x-axis in the xy-plane

    static Direction z() { return {0.0, 0.0}; }
    static Direction x() { return {1.5707963267948966, 0.0}; }
    static Direction polar_only(double theta) { return {theta, 0.0}; }
};

// Single-subsystem unitary mapping the sz eigenbasis onto the eigenbasis of
// the spin component along a direction.
struct Rotation {
    int n = 0;
    Matrix u;
};

// exp(-i * t * h) for Hermitian h, via eigendecomposition.
Matrix expm_hermitian(const Matrix& h, double t);

// U(dir) = exp(-i*azimuth*sz) * exp(-i*polar*sy); satisfies
// U sz U^dag = sin(polar)cos(azimuth) sx + sin(polar)sin(azimuth) sy + cos(polar) sz,
// so the columns of U are the eigenstates of the spin component along dir.
Rotation rotation_operator(const SpinFrame& frame, Direction dir);

}  // namespace singlet
