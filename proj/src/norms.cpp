#include "sdslab/norms.hpp"

#include <cmath>

#include "sdslab/errors.hpp"
#include "sdslab/util.hpp"

namespace sdslab {

void fft_radix2(std::vector<std::complex<double>>& a, bool inverse) {
    const size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw ValidationError("fft_radix2: size must be a power of two");
    // bit-reversal permutation
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * M_PI / double(len) * (inverse ? 1.0 : -1.0);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (size_t k = 0; k < len / 2; ++k) {
                const auto u = a[i + k];
                const auto v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse)
        for (auto& z : a) z /= double(n);
}

std::vector<double> dst_i(const std::vector<double>& v) {
    const size_t n = v.size();
    if (n == 0) return {};
    const size_t m = next_pow2(2 * (n + 1));
    // odd extension of period m; zero padding beyond 2(n+1) keeps the
    // transform exact only when m == 2(n+1), so embed into the sine basis of
    // the padded length by placing the odd image at m - j.
    std::vector<std::complex<double>> a(m, 0.0);
    for (size_t j = 1; j <= n; ++j) {
        a[j] = v[j - 1];
        a[m - j] = -v[j - 1];
    }
    fft_radix2(a, false);
    // For the pure odd sequence, A_k = -2i sum_j v_j sin(2 pi j k / m).
    // With m = 2(n+1) the frequencies k = 1..n give sin(pi j k/(n+1)).
    std::vector<double> out(n);
    const size_t half = m / (2 * (n + 1));
    if (half * 2 * (n + 1) == m) {
        for (size_t k = 1; k <= n; ++k) out[k - 1] = -0.5 * a[k * half].imag();
    } else {
        // fallback: direct evaluation (padded length not commensurate)
        for (size_t k = 1; k <= n; ++k) {
            double s = 0.0;
            for (size_t j = 1; j <= n; ++j)
                s += v[j - 1] * std::sin(M_PI * double(j) * double(k) / double(n + 1));
            out[k - 1] = s;
        }
    }
    return out;
}

double l2_norm(const std::vector<double>& f, double dx) {
    std::vector<double> sq(f.size());
    for (size_t i = 0; i < f.size(); ++i) sq[i] = f[i] * f[i];
    return std::sqrt(trapz(sq, dx));
}

double sobolev_norm(const std::vector<double>& f, double dx, double s, double angular_eig,
                    const SobolevOptions& opt) {
    const size_t n = f.size();
    if (n < 16) throw WindowTooSmall("sobolev_norm: fewer than 16 samples");
    std::vector<double> g(f);
    if (opt.taper) {
        const size_t w = std::max<size_t>(2, size_t(opt.taper_frac * double(n)));
        for (size_t i = 0; i < w; ++i) {
            const double t = smooth_step(double(i) / double(w));
            g[i] *= t;
            g[n - 1 - i] *= t;
        }
    }
    const size_t m = next_pow2(n * size_t(std::max(opt.pad_factor, 1)));
    std::vector<std::complex<double>> a(m, 0.0);
    for (size_t i = 0; i < n; ++i) a[i] = g[i];
    fft_radix2(a, false);
    // hat f(xi_k) ~ dx * A_k, xi_k = 2 pi k / (m dx);
    // ||f||^2 = (1/2pi) sum (1+xi^2+eig)^s |hat f|^2 dxi = (dx/m) sum (...)^s |A_k|^2
    const double dxi = 2.0 * M_PI / (double(m) * dx);
    double acc = 0.0;
    for (size_t k = 0; k < m; ++k) {
        const double kk = (k <= m / 2) ? double(k) : double(k) - double(m);
        const double xi = kk * dxi;
        const double w = std::pow(1.0 + xi * xi + angular_eig, s);
        acc += w * std::norm(a[k]);
    }
    return std::sqrt(acc * dx / double(m));
}

} // namespace sdslab
