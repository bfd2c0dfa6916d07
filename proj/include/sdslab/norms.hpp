#pragma once
#include <complex>
#include <vector>

namespace sdslab {

// In-place radix-2 FFT; size must be a power of two.
void fft_radix2(std::vector<std::complex<double>>& a, bool inverse);

// DST-I of v (interior samples between two Dirichlet endpoints):
//   S_k = sum_{j=1}^{N} v_j sin(pi j k / (N+1)),  k = 1..N.
std::vector<double> dst_i(const std::vector<double>& v);

struct SobolevOptions {
    double taper_frac = 0.05;  // smooth taper width at each window edge
    int pad_factor = 4;        // zero-extension factor before the FFT
    bool taper = true;
};

// Fractional Sobolev norm of uniformly sampled data via Fourier weights
// (1 + xi^2 + angular_eig)^s after a windowed zero-extension. angular_eig
// carries the l(l+1) eigenvalue when the field is one spherical-harmonic
// mode of a function on R x S^2.
double sobolev_norm(const std::vector<double>& f, double dx, double s,
                    double angular_eig = 0.0, const SobolevOptions& opt = {});

// L2 norm of uniform samples (trapezoid weights).
double l2_norm(const std::vector<double>& f, double dx);

} // namespace sdslab
