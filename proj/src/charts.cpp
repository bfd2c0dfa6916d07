#include "sdslab/charts.hpp"

#include <cmath>

#include "sdslab/util.hpp"

namespace sdslab {

// ---------------------------------------------------------------------------
// FoliationChart internals

double FoliationChart::rho(double x) const {
    if (x < x_lo_) return smooth_step((x_lo_ - x) / opt_.left_ramp_width);
    if (x > x_hi_) return smooth_step((x - x_hi_) / opt_.right_ramp_width);
    return 0.0;
}

double FoliationChart::rho_prime(double x) const {
    if (x < x_lo_) return -smooth_step_deriv((x_lo_ - x) / opt_.left_ramp_width) / opt_.left_ramp_width;
    if (x > x_hi_) return smooth_step_deriv((x - x_hi_) / opt_.right_ramp_width) / opt_.right_ramp_width;
    return 0.0;
}

// a(r) blends from a_minus to a_plus across the middle of K, where rho = 0.
double FoliationChart::a_of_x(double x) const {
    const double b_lo = x_lo_ + 0.35 * (x_hi_ - x_lo_);
    const double b_hi = x_lo_ + 0.65 * (x_hi_ - x_lo_);
    const double s = smooth_step((x - b_lo) / (b_hi - b_lo));
    return a_minus_ + (a_plus_ - a_minus_) * s;
}

double FoliationChart::a_prime_of_x(double x) const {
    const double b_lo = x_lo_ + 0.35 * (x_hi_ - x_lo_);
    const double b_hi = x_lo_ + 0.65 * (x_hi_ - x_lo_);
    const double s = smooth_step_deriv((x - b_lo) / (b_hi - b_lo)) / (b_hi - b_lo);
    return (a_plus_ - a_minus_) * s;
}

double FoliationChart::gprime_raw(double x) const {
    const double r = rho(x);
    if (r == 0.0) return 0.0;
    const RadiusGaps g = geom_->tortoise().radius_from_x(x);
    const double dr2 = geom_->dr_dx(g);  // Delta_r / r^2
    const double x_mid = 0.5 * (x_lo_ + x_hi_);
    const double sigma = (x < x_mid) ? -1.0 : 1.0;
    return r * (sigma + a_of_x(x) * dr2);
}

double FoliationChart::Fprime_of_x(double x) const {
    if (x <= ramp_bot_) {
        const RadiusGaps g = geom_->tortoise().radius_from_x(x);
        return -1.0 + a_minus_ * geom_->dr_dx(g);
    }
    if (x >= ramp_top_) {
        const RadiusGaps g = geom_->tortoise().radius_from_x(x);
        return 1.0 + a_plus_ * geom_->dr_dx(g);
    }
    return gprime_raw(x);
}

double FoliationChart::Fsecond_of_x(double x) const {
    const RadiusGaps g = geom_->tortoise().radius_from_x(x);
    const double r = g.r;
    const double d = geom_->delta_of(g);
    const double dr2 = d / (r * r);
    const double dp = geom_->delta_prime(r);
    const double ddr2_dx = dr2 * (dp / (r * r) - 2.0 * d / (r * r * r));
    if (x <= ramp_bot_) return a_minus_ * ddr2_dx;
    if (x >= ramp_top_) return a_plus_ * ddr2_dx;
    const double x_mid = 0.5 * (x_lo_ + x_hi_);
    const double sigma = (x < x_mid) ? -1.0 : 1.0;
    const double a = a_of_x(x);
    return rho_prime(x) * (sigma + a * dr2) + rho(x) * (a_prime_of_x(x) * dr2 + a * ddr2_dx);
}

double FoliationChart::F_of_x(double x) const {
    if (x <= ramp_bot_) {
        const RadiusGaps g = geom_->tortoise().radius_from_x(x);
        return -x + lam_minus_ + a_minus_ * g.gap_minus;
    }
    if (x >= ramp_top_) {
        const RadiusGaps g = geom_->tortoise().radius_from_x(x);
        return x + lam_plus_ - a_plus_ * g.gap_plus;
    }
    if (x >= x_lo_ && x <= x_hi_) return 0.0;
    // cubic Hermite between table nodes
    double t = (x - tab_x0_) / tab_dx_;
    int j = std::clamp(int(std::floor(t)), 0, int(tab_g_.size()) - 2);
    t -= j;
    const double h = tab_dx_;
    const double h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
    const double h10 = t * (1.0 - t) * (1.0 - t);
    const double h01 = t * t * (3.0 - 2.0 * t);
    const double h11 = t * t * (t - 1.0);
    return h00 * tab_g_[j] + h * h10 * tab_gp_[j] + h01 * tab_g_[j + 1] + h * h11 * tab_gp_[j + 1];
}

double FoliationChart::F_of_r(double r) const {
    return F_of_x(geom_->tortoise().x_of_r(r));
}

FoliationChart build_foliation(const SdSGeometry& geom, double k_lo, double k_hi,
                               const FoliationOptions& opt) {
    const HorizonData& h = geom.horizons();
    if (!(h.r_minus < k_lo && k_lo < k_hi && k_hi < h.r_plus))
        throw ValidationError("build_foliation: K must be strictly inside (r_minus, r_plus)");
    FoliationChart c;
    c.geom_ = &geom;
    c.opt_ = opt;
    c.k_lo_ = k_lo;
    c.k_hi_ = k_hi;
    c.x_lo_ = geom.tortoise().x_of_r(k_lo);
    c.x_hi_ = geom.tortoise().x_of_r(k_hi);
    c.ramp_bot_ = c.x_lo_ - opt.left_ramp_width;
    c.ramp_top_ = c.x_hi_ + opt.right_ramp_width;
    c.a_plus_ = opt.a_plus;

    // Shooting for a_minus: mu_K(r_minus) = 0 is equivalent to
    // lim_{x -> -inf} (G(x) + x) = g_minus(r_minus). The limit splits into the
    // ramp quadrature plus the exact horizon-side remainder a_minus * gap.
    const double target = geom.tortoise().g_minus(h.r_minus);
    const int nq = 8192;
    const double hq = (c.x_lo_ - c.ramp_bot_) / nq;
    double w0 = 0.0, i0 = 0.0;  // integral of (1-rho) and of rho*Delta/r^2
    for (int i = 0; i < nq; ++i) {
        auto term = [&](double x, double wgt) {
            const double r = c.rho(x);
            const RadiusGaps g = geom.tortoise().radius_from_x(x);
            w0 += wgt * (1.0 - r);
            i0 += wgt * r * geom.dr_dx(g);
        };
        const double xa = c.ramp_bot_ + i * hq;
        term(xa, hq / 6.0);
        term(xa + 0.5 * hq, 4.0 * hq / 6.0);
        term(xa + hq, hq / 6.0);
    }
    const double gap_rb = geom.tortoise().radius_from_x(c.ramp_bot_).gap_minus;
    auto cg_of = [&](double a) { return c.x_lo_ - w0 - a * (i0 + gap_rb); };

    double lo = 1e-8, hi = 1.0;
    auto f = [&](double a) { return cg_of(a) - target; };
    int guard = 0;
    while (f(hi) > 0.0) {
        hi *= 2.0;
        if (++guard > 24) throw ShootingFailure("build_foliation: no upper shooting bracket");
    }
    if (f(lo) < 0.0)
        throw ShootingFailure("build_foliation: mu_K(r_minus)=0 requires a_minus <= 0; widen the left ramp or move k_lo");
    const double a_minus = bisect_root(f, lo, hi, 200);
    c.a_minus_ = a_minus;
    c.lam_minus_ = cg_of(a_minus);
    c.mu_residual_ = c.lam_minus_ - target;
    if (std::abs(c.mu_residual_) > 1e-8)
        throw ShootingFailure("build_foliation: shooting residual above 1e-8");

    // Hermite table over the ramp zone, G = 0 on x(K); two Simpson panels per step.
    const int n = int(std::ceil((c.ramp_top_ - c.ramp_bot_) / opt.table_dx)) + 1;
    c.tab_x0_ = c.ramp_bot_;
    c.tab_dx_ = (c.ramp_top_ - c.ramp_bot_) / (n - 1);
    c.tab_g_.assign(n, 0.0);
    c.tab_gp_.assign(n, 0.0);
    for (int j = 0; j < n; ++j) c.tab_gp_[j] = c.gprime_raw(c.tab_x0_ + j * c.tab_dx_);
    auto simpson_step = [&](double xa, double xb) {
        const double m = 0.5 * (xa + xb);
        const double q1 = xa + 0.25 * (xb - xa), q3 = xa + 0.75 * (xb - xa);
        return (xb - xa) / 12.0 *
               (c.gprime_raw(xa) + 4.0 * c.gprime_raw(q1) + 2.0 * c.gprime_raw(m) +
                4.0 * c.gprime_raw(q3) + c.gprime_raw(xb));
    };
    int j_lo = int(std::ceil((c.x_lo_ - c.tab_x0_) / c.tab_dx_));
    for (int j = j_lo - 1; j >= 0; --j) {
        const double xa = c.tab_x0_ + j * c.tab_dx_;
        c.tab_g_[j] = c.tab_g_[j + 1] - simpson_step(xa, xa + c.tab_dx_);
    }
    int j_hi = int(std::floor((c.x_hi_ - c.tab_x0_) / c.tab_dx_));
    for (int j = j_hi + 1; j < n; ++j) {
        const double xb = c.tab_x0_ + j * c.tab_dx_;
        c.tab_g_[j] = c.tab_g_[j - 1] + simpson_step(xb - c.tab_dx_, xb);
    }
    // clear any quadrature dust inside K
    for (int j = j_lo; j <= j_hi && j < n; ++j) if (j >= 0) c.tab_g_[j] = 0.0;

    // lambda_K(r_plus) from the right tail continuation
    {
        const RadiusGaps g = geom.tortoise().radius_from_x(c.ramp_top_);
        c.lam_plus_ = (c.tab_g_.back() - c.ramp_top_) + opt.a_plus * g.gap_plus;
    }

    // spacelike validation: |G'| < 1 strictly, margin on the window
    double margin = 1.0;
    const int nv = 10000;
    for (int i = 0; i <= nv; ++i) {
        const double x = -opt.margin_window_x + 2.0 * opt.margin_window_x * i / nv;
        margin = std::min(margin, 1.0 - std::abs(c.Fprime_of_x(x)));
    }
    c.margin_ = margin;
    if (margin < opt.margin_floor)
        throw SpacelikeViolation("build_foliation: spacelike margin " + std::to_string(margin) +
                                 " below floor; a(r) too large for (1-rho) r^2/Delta_r");
    for (int i = 0; i <= nv; ++i) {
        const double x = -opt.deep_x + 2.0 * opt.deep_x * i / nv;
        if (!(std::abs(c.Fprime_of_x(x)) < 1.0))
            throw SpacelikeViolation("build_foliation: |F_K'| >= r^2/Delta_r at x=" +
                                     std::to_string(x));
    }
    return c;
}

// ---------------------------------------------------------------------------
// StarModel

double StarModel::z_star(double t) const {
    return -t - a0_ * std::exp(-2.0 * kappa_minus_ * t);
}
double StarModel::z_star_dot(double t) const {
    return -1.0 + 2.0 * kappa_minus_ * a0_ * std::exp(-2.0 * kappa_minus_ * t);
}
double StarModel::z_star_ddot(double t) const {
    return -4.0 * kappa_minus_ * kappa_minus_ * a0_ * std::exp(-2.0 * kappa_minus_ * t);
}

double StarModel::t_of_t_hat(double t_hat) const {
    if (t_hat >= t_hat_b_) throw OutOfRange("StarModel: t_hat beyond crossing time");
    // initial guess from the sample table, then Newton on t - G(z_*(t)) = t_hat
    double t;
    const int n = int(s_t_.size());
    if (t_hat <= s_t0_) t = s_t_.front();
    else {
        const int j = std::min(int((t_hat - s_t0_) / s_dt_), n - 1);
        t = s_t_[j];
    }
    for (int it = 0; it < 60; ++it) {
        const double z = z_star(t);
        const double f = t - chart_->F_of_x(z) - t_hat;
        const double fp = 1.0 - chart_->Fprime_of_x(z) * z_star_dot(t);
        const double step = f / fp;
        t -= step;
        if (std::abs(step) < 1e-13 * (1.0 + std::abs(t))) return t;
    }
    throw NonConvergence("StarModel::t_of_t_hat: Newton stalled");
}

double StarModel::boundary_r(double t_hat) const {
    if (t_hat >= s_t0_ + s_dt_ * double(s_r_.size() - 1)) {
        // asymptotic linear model near the crossing
        const double r_minus = geom_->horizons().r_minus;
        return r_minus + alpha0_ * (t_hat - t_hat_b_);
    }
    return interp_cubic(s_r_, s_t0_, s_dt_, t_hat);
}

double StarModel::boundary_rhat(double t_hat) const {
    const double t_end = s_t0_ + s_dt_ * double(s_rhat_.size() - 1);
    if (t_hat >= t_end)
        return std::max(0.0, s_rhat_.back() + s_rhat_dot_.back() * (t_hat - t_end));
    return interp_cubic(s_rhat_, s_t0_, s_dt_, t_hat);
}

double StarModel::boundary_rhat_dot(double t_hat) const {
    const double t_end = s_t0_ + s_dt_ * double(s_rhat_dot_.size() - 1);
    if (t_hat >= t_end) return s_rhat_dot_.back();
    return interp_cubic(s_rhat_dot_, s_t0_, s_dt_, t_hat);
}

double StarModel::boundary_rhat_ddot(double t_hat) const {
    const double eps = 16.0 * s_dt_;
    const double a = boundary_rhat_dot(std::max(s_t0_, t_hat - eps));
    const double b = boundary_rhat_dot(std::min(s_t0_ + s_dt_ * double(s_rhat_dot_.size() - 1),
                                                t_hat + eps));
    return (b - a) / (2.0 * eps);
}

StarModel build_star(const SdSGeometry& geom, const FoliationChart& chart, double a0,
                     double t_hat_b_tol) {
    if (!(a0 > 0.0)) throw ValidationError("build_star: A_0 must be positive");
    StarModel s;
    s.geom_ = &geom;
    s.chart_ = &chart;
    s.a0_ = a0;
    s.kappa_minus_ = geom.horizons().kappa_minus;
    if (!(2.0 * s.kappa_minus_ * a0 < 1.0))
        throw TimelikeViolation("build_star: need 2 kappa_minus A_0 < 1 so dz*/dt stays in (-1,0)");

    // crossing time by Richardson extrapolation in eps = exp(-2 kappa_- t)
    auto th_of_t = [&](double t) { return t - chart.F_of_x(s.z_star(t)); };
    const double dt_half = std::log(2.0) / (2.0 * s.kappa_minus_);
    const int levels = 10;
    std::vector<double> row(levels);
    for (int k = 0; k < levels; ++k) row[k] = th_of_t(14.0 + dt_half * k);
    double prev = row[0];
    bool converged = false;
    double t_hat_b = row.back();
    for (int m = 1; m < levels && !converged; ++m) {
        const double f = std::pow(2.0, m);
        for (int k = 0; k + m < levels; ++k)
            row[k] = (f * row[k + 1] - row[k]) / (f - 1.0);
        if (std::abs(row[0] - prev) <= t_hat_b_tol) {
            t_hat_b = row[0];
            converged = true;
        }
        prev = row[0];
        t_hat_b = row[0];
    }
    if (!converged)
        throw ExtrapolationFailure("build_star: t_hat_B extrapolation did not stabilize");
    s.t_hat_b_ = t_hat_b;

    // boundary samples on [0, t_hat_B); t = 60 puts eps below 1e-9
    const double th_end = th_of_t(60.0);
    const int n = 6000;
    s.s_t0_ = 0.0;
    s.s_dt_ = th_end / double(n - 1);
    s.s_t_.resize(n);
    s.s_r_.resize(n);
    s.s_rhat_.resize(n);
    s.s_rhat_dot_.resize(n);
    double t_guess = 0.0;
    // the Newton in t_of_t_hat needs the sample table; bootstrap sequentially
    for (int j = 0; j < n; ++j) {
        const double th = s.s_t0_ + j * s.s_dt_;
        double t = t_guess;
        for (int it = 0; it < 80; ++it) {
            const double z = s.z_star(t);
            const double f = t - chart.F_of_x(z) - th;
            const double fp = 1.0 - chart.Fprime_of_x(z) * s.z_star_dot(t);
            const double step = f / fp;
            t -= step;
            if (std::abs(step) < 1e-13 * (1.0 + std::abs(t))) break;
        }
        t_guess = t;
        s.s_t_[j] = t;
        const double z = s.z_star(t);
        const RadiusGaps g = geom.tortoise().radius_from_x(z);
        s.s_r_[j] = g.r;
        s.s_rhat_[j] = z + chart.F_of_x(z) + t_hat_b;
        const double gp = chart.Fprime_of_x(z);
        const double zd = s.z_star_dot(t);
        s.s_rhat_dot_[j] = (1.0 + gp) * zd / (1.0 - gp * zd);
        if (!(std::abs(zd) < 1.0))
            throw TimelikeViolation("build_star: |dz*/dt| >= 1 on sampled range");
    }

    // alpha_0 from a through-origin linear fit of (r - r_minus) vs (t_hat - t_hat_B)
    {
        const double r_minus = geom.horizons().r_minus;
        double sxy = 0.0, sxx = 0.0;
        for (double tau = 1e-4; tau <= 1e-2; tau *= 1.3) {
            const double t = s.t_of_t_hat(t_hat_b - tau);
            const RadiusGaps g = geom.tortoise().radius_from_x(s.z_star(t));
            const double gap = g.r - r_minus;
            sxy += (-tau) * gap;
            sxx += tau * tau;
        }
        s.alpha0_ = sxy / sxx;
    }
    if (!(s.alpha0_ < 0.0)) throw NumericalError("build_star: alpha_0 must be negative");

    const double lp = chart.lambda_prime_minus();
    const double denom = 1.0 + lp * s.alpha0_;
    if (!(denom > 0.0))
        throw NumericalError("build_star: 1 + lambda_K'(r_minus) alpha_0 must be positive");
    s.beta0_ = lp * s.alpha0_ / denom;
    s.gamma0_ = s.beta0_ * std::exp(s.kappa_minus_ * chart.lambda_minus());
    double cb = 0.0;
    for (double v : s.s_rhat_dot_) cb = std::max(cb, std::abs(v));
    s.c_b_ = cb;
    if (!(cb < 1.0)) throw TimelikeViolation("build_star: |z_hat'| must stay below 1");
    return s;
}

// ---------------------------------------------------------------------------

double r_hat(const FoliationChart& chart, const StarModel& star, double x) {
    return x + chart.F_of_x(x) + star.t_hat_b();
}

double r_hat_dx(const FoliationChart& chart, double x) {
    return 1.0 + chart.Fprime_of_x(x);
}

double x_of_r_hat(const FoliationChart& chart, const StarModel& star, double rhat) {
    double x = rhat - star.t_hat_b();
    for (int it = 0; it < 80; ++it) {
        const double f = r_hat(chart, star, x) - rhat;
        const double fp = r_hat_dx(chart, x);
        const double step = f / fp;
        x -= step;
        if (std::abs(step) < 1e-14 * (1.0 + std::abs(x))) return x;
    }
    throw NonConvergence("x_of_r_hat: Newton stalled");
}

} // namespace sdslab
