#include "sdslab/parametrix.hpp"

#include <cmath>

#include "sdslab/norms.hpp"
#include "sdslab/util.hpp"

namespace sdslab {

ReflectionProfile make_bump_profile(double ell_support) {
    ReflectionProfile p;
    p.ell_support = ell_support;
    p.v0 = [ell_support](double xi) { return smooth_bump01(xi / ell_support); };
    p.dv0 = [ell_support](double xi) {
        const double u = xi / ell_support;
        if (u <= 0.0 || u >= 1.0) return 0.0;
        const double b = smooth_bump01(u);
        const double d = 0.25 * (1.0 - 2.0 * u) / (u * u * (1.0 - u) * (1.0 - u));
        return b * d / ell_support;
    };
    // |v0|_C2 for the unit bump, measured once on a fine grid
    double c2 = 0.0;
    for (int i = 1; i < 4000; ++i) {
        const double u = double(i) / 4000.0;
        const double xi = u * ell_support;
        const double f = p.v0(xi);
        const double d1 = (p.v0(xi + 1e-6) - p.v0(xi - 1e-6)) / 2e-6;
        const double d2 = (p.v0(xi + 1e-5) - 2.0 * f + p.v0(xi - 1e-5)) / 1e-10;
        c2 = std::max({c2, std::abs(f), std::abs(d1), std::abs(d2)});
    }
    p.c2_bound = c2;
    return p;
}

double t_hat_1(const StarModel& star, double s) {
    const double tb = star.t_hat_b();
    const double lo_val = star.boundary_rhat(0.0) + 0.0;
    if (s > tb * (1.0 + 1e-12) || s < lo_val - 1e-12)
        throw OutOfRange("t_hat_1: s outside [z_hat(0), t_hat_B]");
    if (s >= tb) return tb;
    // z_hat(t1) + t1 = s, strictly increasing in t1
    double lo = 0.0, hi = tb;
    auto f = [&](double t) { return star.boundary_rhat(t) + t - s; };
    double t = bisect_root(f, lo, hi, 80);
    // Newton polish
    for (int it = 0; it < 30; ++it) {
        const double g = f(t);
        const double gp = star.boundary_rhat_dot(t) + 1.0;
        const double step = g / gp;
        t -= step;
        if (t < lo || t > hi) { t = std::clamp(t, lo, hi); break; }
        if (std::abs(step) < 1e-14 * (1.0 + std::abs(t))) break;
    }
    return t;
}

static void check_toy_window(const StarModel& star, double h, double ell, double t_hat,
                             double c_window, bool upper_is_tb) {
    const double c = (c_window > 0.0) ? c_window : 2.0 * star.c_b();
    const double lo = star.t_hat_b() - c * ell * h;
    const double hi = upper_is_tb ? star.t_hat_b() : star.t_hat_b() - star.c_b() * ell * h;
    if (t_hat < lo - 1e-12 || t_hat > hi + 1e-12)
        throw OutOfRange("toy parametrix: t_hat outside its validity window");
}

double toy_closed_form(const ReflectionProfile& pr, const StarModel& star, double h,
                       double t_hat, double r_hat, const ToyOptions& opt) {
    check_toy_window(star, h, pr.ell_support, t_hat, opt.c_window, true);
    if (t_hat < star.t_hat_b() && r_hat < star.boundary_rhat(t_hat)) return 0.0;
    const double direct = pr(r_hat / h);
    const double s = r_hat + t_hat;
    double reflected = 0.0;
    if (s < star.t_hat_b()) {
        const double t1 = t_hat_1(star, s);
        reflected = pr(star.boundary_rhat(t1) / h);
    }
    return direct - reflected;
}

double toy_linearized(const ReflectionProfile& pr, const StarModel& star, double h,
                      double t_hat, double r_hat, const ToyOptions& opt) {
    check_toy_window(star, h, pr.ell_support, t_hat, opt.c_window, false);
    const double y = star.beta0() * (r_hat + t_hat - star.t_hat_b());
    return pr(r_hat / h) - pr(y / h);
}

double toy_linearized_dt(const ReflectionProfile& pr, const StarModel& star, double h,
                         double t_hat, double r_hat, const ToyOptions& opt) {
    check_toy_window(star, h, pr.ell_support, t_hat, opt.c_window, false);
    const double y = star.beta0() * (r_hat + t_hat - star.t_hat_b());
    return -(star.beta0() / h) * pr.deriv(y / h);
}

// ---------------------------------------------------------------------------
// WKB

WKBApprox::WKBApprox(const SdSGeometry& geom, const FoliationChart& chart, const StarModel& star,
                     const ReflectionProfile& profile, double h)
    : geom_(&geom), chart_(&chart), star_(&star), profile_(profile), h_(h) {}

double WKBApprox::window_hi() const {
    return star_->t_hat_b() - star_->c_b() * profile_.ell_support * h_;
}

void WKBApprox::check_window(double t_hat) const {
    if (t_hat < -1e-12 || t_hat > window_hi() + 1e-12)
        throw OutOfRange("WKBApprox: t_hat outside [0, t_hat_B - c_B l h]");
}

double WKBApprox::radius_of_rhat(double r_hat) const {
    const double x = x_of_r_hat(*chart_, *star_, r_hat);
    return geom_->tortoise().radius_from_x(x).r;
}

double WKBApprox::y_of(double t_hat, double r_hat) const {
    return star_->beta0() * (r_hat + t_hat - star_->t_hat_b());
}

double WKBApprox::amplitude_b(double t_hat, double r_hat) const {
    check_window(t_hat);
    const double arg = r_hat + t_hat - star_->t_hat_b() + star_->c_b() * profile_.ell_support * h_;
    return radius_of_rhat(arg) / radius_of_rhat(r_hat);
}

double WKBApprox::v_full(double t_hat, double r_hat) const {
    check_window(t_hat);
    return amplitude_b(t_hat, r_hat) * profile_(y_of(t_hat, r_hat) / h_);
}

double WKBApprox::v_ap(double t_hat, double r_hat) const {
    check_window(t_hat);
    const double rm = geom_->horizons().r_minus;
    return rm / radius_of_rhat(r_hat) * profile_(y_of(t_hat, r_hat) / h_);
}

double WKBApprox::v_ap_dt(double t_hat, double r_hat) const {
    check_window(t_hat);
    const double rm = geom_->horizons().r_minus;
    return rm / radius_of_rhat(r_hat) * (star_->beta0() / h_) *
           profile_.deriv(y_of(t_hat, r_hat) / h_);
}

// ---------------------------------------------------------------------------

ReflectionComparison compare_reflection(const SdSGeometry& geom, const FoliationChart& chart,
                                        const StarModel& star, const ReflectionProfile& profile,
                                        int ell_mode, double h, const CompareOptions& opt) {
    const double tb = star.t_hat_b();
    const double beta0 = star.beta0();
    const double width_refl = h * profile.ell_support / std::abs(beta0);
    const double dx_min = width_refl / opt.points_per_feature;
    const double a0 = -star.z_star(0.0);

    // fine band: reflected bits stay within (1 - c_B)(t_hat_B - t_hat) of the wall
    const double cluster = std::max(1.5 * (1.0 - star.c_b()) * tb, 4.0 * h * profile.ell_support) + 0.3;
    const double eta_max = tb + a0 + 1.5;
    if (dx_min <= 1e-7)
        throw ResolutionInsufficient("compare_reflection: grid below 1e-7 needed; raise h");
    Grid1D grid = Grid1D::wall_clustered(eta_max, dx_min, opt.dx_max, cluster);

    // data at t_hat_B: V = r v0(r_hat/h), V_t = 0
    WallState s0;
    s0.time = tb;
    s0.q.resize(grid.size());
    s0.p.assign(grid.size(), 0.0);
    for (int j = 0; j < grid.size(); ++j) {
        const double rh = grid.node(j);  // wall at 0 at t_hat_B
        const double vv = profile(rh / h);
        if (vv == 0.0) { s0.q[j] = 0.0; continue; }
        const double x = x_of_r_hat(chart, star, rh);
        s0.q[j] = geom.tortoise().radius_from_x(x).r * vv;
    }

    EvolveOptions eopt;
    eopt.cfl = opt.cfl;
    eopt.check_domain = false;
    const double dt = opt.cfl * grid.dx_min() / 2.0;
    WallState sf = evolve_rhat_mixed(geom, chart, star, ell_mode, s0, 0.0, grid, dt, eopt);

    // compare on x in [z_*(0), 1], where r_hat = x + t_hat_B
    const double z0 = star.z_star(0.0);
    const int n = std::max(2048, int((1.0 - z0) / (0.5 * dx_min)));
    std::vector<double> e0(n), e1(n), ref(n);
    const double dxn = (1.0 - z0) / (n - 1);
    const double zhat0 = star.boundary_rhat(0.0);
    const double rm = geom.horizons().r_minus;
    for (int i = 0; i < n; ++i) {
        const double x = z0 + i * dxn;
        const double rh = x + tb;
        const double eta = rh - zhat0;
        const double r = geom.tortoise().radius_from_x(x).r;
        double q = 0.0, p = 0.0;
        if (eta > 0.0 && eta < grid.x1()) {
            q = grid.interp(sf.q, eta);
            p = grid.interp(sf.p, eta);
        }
        const double y = beta0 * x;  // y at t_hat = 0
        // Dirichlet reflection carries a sign flip relative to the profile
        const double vap = -(rm / r) * profile(y / h);
        const double vap_t = -(rm / r) * (beta0 / h) * profile.deriv(y / h);
        e0[i] = q / r - vap;
        e1[i] = p / r - vap_t;
        ref[i] = vap;
    }
    ReflectionComparison out;
    out.h = h;
    out.ell_mode = ell_mode;
    out.err_h12 = sobolev_norm(e0, dxn, 0.5);
    out.err_hm12 = sobolev_norm(e1, dxn, -0.5);
    out.ref_h12 = sobolev_norm(ref, dxn, 0.5);
    return out;
}

} // namespace sdslab
