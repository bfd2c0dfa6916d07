#pragma once
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sdslab/errors.hpp"

namespace sdslab {

// C-infinity step: 0 for u <= 0, 1 for u >= 1.
inline double smooth_step(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    const double f = std::exp(-1.0 / u);
    const double g = std::exp(-1.0 / (1.0 - u));
    return f / (f + g);
}

inline double smooth_step_deriv(double u) {
    if (u <= 0.0 || u >= 1.0) return 0.0;
    const double f = std::exp(-1.0 / u);
    const double g = std::exp(-1.0 / (1.0 - u));
    const double fp = f / (u * u);
    const double gp = -g / ((1.0 - u) * (1.0 - u));
    const double s = f + g;
    return (fp * s - f * (fp + gp)) / (s * s);
}

// C-infinity bump supported on (0,1), max 1 at 1/2.
inline double smooth_bump01(double u) {
    if (u <= 0.0 || u >= 1.0) return 0.0;
    return std::exp(1.0 - 0.25 / (u * (1.0 - u)));
}

struct LinFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

inline LinFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    const size_t n = x.size();
    if (n < 2 || y.size() != n) throw ValidationError("linear_fit: need >= 2 points");
    double sx = 0, sy = 0;
    for (size_t i = 0; i < n; ++i) { sx += x[i]; sy += y[i]; }
    const double mx = sx / double(n), my = sy / double(n);
    double sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LinFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = (syy > 0.0) ? (sxy * sxy) / (sxx * syy) : 1.0;
    return f;
}

// Catmull-Rom interpolation on a uniform grid, clamped at the ends.
inline double interp_cubic(const std::vector<double>& y, double x0, double dx, double x) {
    const int n = int(y.size());
    if (n < 4) throw ValidationError("interp_cubic: need >= 4 samples");
    double t = (x - x0) / dx;
    int j = int(std::floor(t));
    j = std::clamp(j, 1, n - 3);
    t -= j;
    const double ym = y[j - 1], y0 = y[j], y1 = y[j + 1], y2 = y[j + 2];
    const double a0 = -0.5 * ym + 1.5 * y0 - 1.5 * y1 + 0.5 * y2;
    const double a1 = ym - 2.5 * y0 + 2.0 * y1 - 0.5 * y2;
    const double a2 = -0.5 * ym + 0.5 * y1;
    return ((a0 * t + a1) * t + a2) * t + y0;
}

inline double trapz(const std::vector<double>& f, double dx) {
    if (f.size() < 2) return 0.0;
    double s = 0.5 * (f.front() + f.back());
    for (size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
    return s * dx;
}

inline size_t next_pow2(size_t n) {
    size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

inline double golden_min(const std::function<double(double)>& f, double a, double b,
                         double tol = 1e-10) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) { b = d; d = c; fd = fc; c = b - gr * (b - a); fc = f(c); }
        else { a = c; c = d; fc = fd; d = a + gr * (b - a); fd = f(d); }
    }
    return 0.5 * (a + b);
}

// Bracketed bisection root find; f(lo) and f(hi) must have opposite signs.
inline double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                          int iters = 200) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0) throw NonConvergence("bisect_root: endpoints do not bracket");
    for (int i = 0; i < iters; ++i) {
        const double m = 0.5 * (lo + hi);
        const double fm = f(m);
        if (fm == 0.0) return m;
        if (flo * fm < 0.0) { hi = m; fhi = fm; }
        else { lo = m; flo = fm; }
    }
    return 0.5 * (lo + hi);
}

inline uint64_t fnv1a64(const std::string& s, uint64_t h = 1469598103934665603ull) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace sdslab
