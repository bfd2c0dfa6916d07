#include "sdslab/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace sdslab {

void SdSParams::validate() const {
    if (mass <= 0.0) throw ValidationError("SdSParams: mass must be positive");
    if (lambda <= 0.0) throw ValidationError("SdSParams: Lambda must be positive");
    if (m_field <= 0.0) throw ValidationError("SdSParams: field mass must be positive");
    const double q = 9.0 * mass * mass * lambda;
    if (q >= 1.0)
        throw SubextremalViolation("SdSParams: 9 M^2 Lambda = " + std::to_string(q) +
                                   " >= 1, horizons degenerate");
}

double delta_r(const SdSParams& p, double r) {
    return r * r * (1.0 - p.lambda * r * r / 3.0) - 2.0 * p.mass * r;
}

double delta_r_prime(const SdSParams& p, double r) {
    return 2.0 * r - 4.0 * p.lambda * r * r * r / 3.0 - 2.0 * p.mass;
}

HorizonData horizon_roots(const SdSParams& p) {
    p.validate();
    // Delta_r / r = -(Lambda/3)(r^3 - (3/Lambda) r + 6M/Lambda).
    // Depressed cubic with three real roots; trigonometric form.
    const double sl = std::sqrt(p.lambda);
    const double theta = std::acos(-3.0 * p.mass * sl);
    const double scale = 2.0 / sl;
    double rp = scale * std::cos(theta / 3.0);
    double rm = scale * std::cos(theta / 3.0 - 2.0 * M_PI / 3.0);

    // one Newton polish on the cubic
    auto polish = [&](double r) {
        const double c3 = 3.0 / p.lambda, c6 = 6.0 * p.mass / p.lambda;
        const double f = r * r * r - c3 * r + c6;
        const double fp = 3.0 * r * r - c3;
        return r - f / fp;
    };
    rm = polish(rm);
    rp = polish(rp);

    HorizonData h;
    h.r_minus = rm;
    h.r_plus = rp;
    h.r_neg = -(rm + rp);  // cubic has no quadratic term
    h.kappa_minus = delta_r_prime(p, rm) / (2.0 * rm * rm);
    h.kappa_plus = -delta_r_prime(p, rp) / (2.0 * rp * rp);
    if (!(h.kappa_minus > 0.0) || !(h.kappa_plus > 0.0))
        throw SubextremalViolation("horizon_roots: nonpositive surface gravity");
    h.beta_minus = M_PI / h.kappa_minus;
    h.beta_plus = M_PI / h.kappa_plus;
    return h;
}

// ---------------------------------------------------------------------------
// TortoiseMap

TortoiseMap::TortoiseMap(const SdSParams& p, const HorizonData& h, double anchor_radius)
    : anchor_radius_(anchor_radius), km_(h.kappa_minus), kp_(h.kappa_plus) {
    roots_ = {h.r_neg, h.r_minus, h.r_plus};
    for (int i = 0; i < 3; ++i) {
        const double ri = roots_[i];
        coef_[i] = ri * ri / delta_r_prime(p, ri);
    }
    anchor_const_ = 0.0;
    for (int i = 0; i < 3; ++i)
        anchor_const_ += coef_[i] * std::log(std::abs(anchor_radius_ - roots_[i]));

    // lookup table on a moderate x-window for inverse initial guesses
    tab_x0_ = -21.0;
    const int n = 4096;
    tab_dx_ = 42.0 / (n - 1);
    tab_r_.resize(n);
    double r_guess = anchor_radius_;
    for (int j = 0; j < n; ++j) {
        const double x = tab_x0_ + j * tab_dx_;
        r_guess = newton_invert(x, r_guess);
        tab_r_[j] = r_guess;
    }
}

double TortoiseMap::x_of_r(double r) const {
    if (!(r > roots_[1] && r < roots_[2]))
        throw DomainError("tortoise x_of_r: r outside (r_minus, r_plus)");
    double x = -anchor_const_;
    for (int i = 0; i < 3; ++i) x += coef_[i] * std::log(std::abs(r - roots_[i]));
    return x;
}

double TortoiseMap::g_minus(double r) const {
    return coef_[0] * std::log(std::abs(r - roots_[0])) +
           coef_[2] * std::log(std::abs(r - roots_[2])) - anchor_const_;
}

double TortoiseMap::g_plus(double r) const {
    return coef_[0] * std::log(std::abs(r - roots_[0])) +
           coef_[1] * std::log(std::abs(r - roots_[1])) - anchor_const_;
}

double TortoiseMap::x_of_gap_minus(double gap) const {
    if (!(gap > 0.0)) throw DomainError("x_of_gap_minus: gap must be positive");
    return coef_[1] * std::log(gap) + g_minus(roots_[1] + gap);
}

double TortoiseMap::x_of_gap_plus(double gap) const {
    if (!(gap > 0.0)) throw DomainError("x_of_gap_plus: gap must be positive");
    return coef_[2] * std::log(gap) + g_plus(roots_[2] - gap);
}

double TortoiseMap::newton_invert(double x, double r0) const {
    const double rm = roots_[1], rp = roots_[2];
    double lo = rm + 1e-14 * (rp - rm), hi = rp - 1e-14 * (rp - rm);
    double r = std::clamp(r0, lo, hi);
    for (int it = 0; it < 100; ++it) {
        double fx = -anchor_const_;
        for (int i = 0; i < 3; ++i) fx += coef_[i] * std::log(std::abs(r - roots_[i]));
        const double f = fx - x;
        if (f > 0.0) hi = std::min(hi, r);
        else lo = std::max(lo, r);
        // x'(r) = sum_i coef_i / (r - r_i)  (= r^2 / Delta_r)
        double xp = 0.0;
        for (int i = 0; i < 3; ++i) xp += coef_[i] / (r - roots_[i]);
        double rn = r - f / xp;
        if (!(rn > lo && rn < hi)) rn = 0.5 * (lo + hi);  // bisection fallback
        if (std::abs(rn - r) <= 1e-16 * (rp - rm)) return rn;
        r = rn;
    }
    if (hi - lo < 1e-12 * (rp - rm)) return 0.5 * (lo + hi);
    throw NonConvergence("tortoise radius_from_x: Newton/bisection stalled");
}

RadiusGaps TortoiseMap::radius_from_x(double x) const {
    if (!std::isfinite(x)) throw DomainError("radius_from_x: x not finite");
    const double rm = roots_[1], rp = roots_[2];
    RadiusGaps out;
    if (x < -20.0) {
        // fixed point for the gap: s = exp(2 km (x - g_minus(rm + s)))
        double s = std::exp((x - g_minus(rm)) / coef_[1]);
        for (int it = 0; it < 4; ++it)
            s = std::exp((x - g_minus(rm + s)) / coef_[1]);
        // one Newton polish on F(s) = coef ln s + g_minus(rm+s) - x
        const double gp = (g_minus(rm + s * 1.0001) - g_minus(rm + s * 0.9999)) / (0.0002 * s);
        const double F = coef_[1] * std::log(s) + g_minus(rm + s) - x;
        s -= F / (coef_[1] / s + gp);
        out.gap_minus = s;
        out.r = rm + s;
        out.gap_plus = rp - out.r;
        return out;
    }
    if (x > 20.0) {
        double s = std::exp((x - g_plus(rp)) / coef_[2]);
        for (int it = 0; it < 4; ++it)
            s = std::exp((x - g_plus(rp - s)) / coef_[2]);
        const double gp = (g_plus(rp - s * 0.9999) - g_plus(rp - s * 1.0001)) / (0.0002 * s);
        const double F = coef_[2] * std::log(s) + g_plus(rp - s) - x;
        s -= F / (coef_[2] / s + gp);
        out.gap_plus = s;
        out.r = rp - s;
        out.gap_minus = out.r - rm;
        return out;
    }
    const int j = std::clamp(int((x - tab_x0_) / tab_dx_), 0, int(tab_r_.size()) - 1);
    out.r = newton_invert(x, tab_r_[j]);
    out.gap_minus = out.r - rm;
    out.gap_plus = rp - out.r;
    return out;
}

// ---------------------------------------------------------------------------
// SdSGeometry

SdSGeometry::SdSGeometry(const SdSParams& p, double anchor_radius) : params_(p) {
    p.validate();
    hor_ = horizon_roots(p);
    if (anchor_radius <= 0.0) anchor_radius = 0.5 * (hor_.r_minus + hor_.r_plus);
    map_ = TortoiseMap(p, hor_, anchor_radius);
}

// Delta_r(rm + s) = s * (D'(rm) + s D''(rm)/2 + s^2 D'''(rm)/6 + s^3 D''''/24), exact.
static double delta_taylor(const SdSParams& p, double r0, double s) {
    const double d1 = delta_r_prime(p, r0);
    const double d2 = 2.0 - 4.0 * p.lambda * r0 * r0;
    const double d3 = -8.0 * p.lambda * r0;
    const double d4 = -8.0 * p.lambda;
    return s * (d1 + s * (0.5 * d2 + s * (d3 / 6.0 + s * d4 / 24.0)));
}

double SdSGeometry::delta_from_gap_minus(double gap) const {
    return delta_taylor(params_, hor_.r_minus, gap);
}

double SdSGeometry::delta_from_gap_plus(double gap) const {
    return delta_taylor(params_, hor_.r_plus, -gap);
}

double SdSGeometry::delta_of(const RadiusGaps& g) const {
    if (g.gap_minus < 0.25 * (hor_.r_plus - hor_.r_minus))
        return delta_from_gap_minus(g.gap_minus);
    if (g.gap_plus < 0.25 * (hor_.r_plus - hor_.r_minus))
        return delta_from_gap_plus(g.gap_plus);
    return delta(g.r);
}

double SdSGeometry::potential_v(const RadiusGaps& g) const {
    // V = Delta_r (-(2/3) Lambda / r^2 + 2M / r^5 + m^2)
    const double r = g.r;
    const double d = delta_of(g);
    const double m2 = params_.m_field * params_.m_field;
    return d * (-2.0 * params_.lambda / (3.0 * r * r) + 2.0 * params_.mass / std::pow(r, 5) + m2);
}

double SdSGeometry::mode_potential_of(int ell, const RadiusGaps& g) const {
    if (ell < 0) throw ValidationError("mode_potential: ell must be >= 0");
    const double d = delta_of(g);
    return d * double(ell) * double(ell + 1) / (g.r * g.r) + potential_v(g);
}

double SdSGeometry::mode_potential(int ell, double x) const {
    return mode_potential_of(ell, map_.radius_from_x(x));
}

} // namespace sdslab
