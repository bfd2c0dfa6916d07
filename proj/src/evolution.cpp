#include "sdslab/evolution.hpp"

#include <algorithm>
#include <cmath>

#include "sdslab/norms.hpp"
#include "sdslab/util.hpp"

namespace sdslab {

// ---------------------------------------------------------------------------
// Grid1D

void Grid1D::finalize() {
    const int n = size();
    d1m_.assign(n, 0.0); d10_.assign(n, 0.0); d1p_.assign(n, 0.0);
    d2m_.assign(n, 0.0); d20_.assign(n, 0.0); d2p_.assign(n, 0.0);
    dx_min_ = std::numeric_limits<double>::max();
    for (int j = 1; j + 1 < n; ++j) {
        const double hm = nodes_[j] - nodes_[j - 1];
        const double hp = nodes_[j + 1] - nodes_[j];
        d1m_[j] = -hp / (hm * (hm + hp));
        d10_[j] = (hp - hm) / (hm * hp);
        d1p_[j] = hm / (hp * (hm + hp));
        d2m_[j] = 2.0 / (hm * (hm + hp));
        d20_[j] = -2.0 / (hm * hp);
        d2p_[j] = 2.0 / (hp * (hm + hp));
    }
    for (int j = 1; j < n; ++j) dx_min_ = std::min(dx_min_, nodes_[j] - nodes_[j - 1]);
}

Grid1D Grid1D::uniform(double x0, double x1, int n) {
    if (n < 8 || !(x1 > x0)) throw ValidationError("Grid1D::uniform: bad arguments");
    Grid1D g;
    g.nodes_.resize(n);
    const double dx = (x1 - x0) / (n - 1);
    for (int j = 0; j < n; ++j) g.nodes_[j] = x0 + j * dx;
    g.uniform_ = true;
    g.desc_ = "uniform";
    g.finalize();
    return g;
}

Grid1D Grid1D::wall_clustered(double length, double dx_min, double dx_max, double cluster_len) {
    if (!(dx_min > 0.0 && dx_max >= dx_min && length > cluster_len))
        throw ValidationError("Grid1D::wall_clustered: bad arguments");
    Grid1D g;
    double x = 0.0;
    g.nodes_.push_back(0.0);
    while (x < length) {
        const double h = dx_min + (dx_max - dx_min) * smooth_step(x / cluster_len);
        x += h;
        g.nodes_.push_back(x);
    }
    g.uniform_ = false;
    g.desc_ = "wall-clustered";
    g.finalize();
    return g;
}

double Grid1D::d1_left(const std::vector<double>& f) const {
    const double h1 = nodes_[1] - nodes_[0];
    const double h2 = nodes_[2] - nodes_[1];
    const double c0 = -(2.0 * h1 + h2) / (h1 * (h1 + h2));
    const double c1 = (h1 + h2) / (h1 * h2);
    const double c2 = -h1 / (h2 * (h1 + h2));
    return c0 * f[0] + c1 * f[1] + c2 * f[2];
}

double Grid1D::interp(const std::vector<double>& f, double x) const {
    const int n = size();
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
    int j = int(it - nodes_.begin()) - 1;
    j = std::clamp(j, 1, n - 3);
    // cubic Lagrange on nodes j-1 .. j+2
    double out = 0.0;
    for (int a = j - 1; a <= j + 2; ++a) {
        double w = 1.0;
        for (int b = j - 1; b <= j + 2; ++b)
            if (b != a) w *= (x - nodes_[b]) / (nodes_[a] - nodes_[b]);
        out += w * f[a];
    }
    return out;
}

std::vector<double> resample_uniform(const Grid1D& grid, const std::vector<double>& f, double a,
                                     double b, int n) {
    std::vector<double> out(n);
    const double dx = (b - a) / (n - 1);
    for (int i = 0; i < n; ++i) out[i] = grid.interp(f, a + i * dx);
    return out;
}

std::vector<double> field_u(const SdSGeometry& geom, const Grid1D& grid,
                            const std::vector<double>& v) {
    std::vector<double> u(v.size());
    for (size_t j = 0; j < v.size(); ++j)
        u[j] = v[j] / geom.tortoise().radius_from_x(grid.node(int(j))).r;
    return u;
}

// ---------------------------------------------------------------------------
// free evolution (static grid, leapfrog / velocity-Verlet)

ModeState evolve_free(const SdSGeometry& geom, const ModeState& initial, double t_target,
                      const Grid1D& grid, double dt, const EvolveOptions& opt,
                      std::vector<ProbeSeries>* probes, bool left_wall) {
    const int n = grid.size();
    if (int(initial.v.size()) != n || int(initial.v_t.size()) != n)
        throw ValidationError("evolve_free: state does not match grid");
    if (!(dt > 0.0)) throw ValidationError("evolve_free: dt must be positive");
    if (dt > opt.cfl * grid.dx_min())
        throw CFLViolation("evolve_free: dt exceeds cfl * dx_min");

    const double span = t_target - initial.time;
    const int nsteps = std::max(1, int(std::ceil(std::abs(span) / dt - 1e-12)));
    const double h = span / nsteps;  // signed

    if (opt.check_domain) {
        double amax = 0.0;
        for (int j = 0; j < n; ++j)
            amax = std::max(amax, std::max(std::abs(initial.v[j]), std::abs(initial.v_t[j])));
        if (amax > 0.0) {
            double lo = grid.x1(), hi = grid.x0();
            for (int j = 0; j < n; ++j)
                if (std::abs(initial.v[j]) > 1e-14 * amax ||
                    std::abs(initial.v_t[j]) > 1e-14 * amax) {
                    lo = std::min(lo, grid.node(j));
                    hi = std::max(hi, grid.node(j));
                }
            const double pad = std::abs(span) + opt.causality_margin;
            if ((!left_wall && grid.x0() > lo - pad) || grid.x1() < hi + pad)
                throw DomainTooSmall("evolve_free: domain of dependence touches the far walls");
        }
    }

    std::vector<double> w(n), rr(n);
    for (int j = 0; j < n; ++j) {
        const RadiusGaps g = geom.tortoise().radius_from_x(grid.node(j));
        w[j] = geom.mode_potential_of(initial.ell, g);
        rr[j] = g.r;
    }

    std::vector<int> probe_idx;
    if (probes) {
        for (auto& ps : *probes) {
            int best = 0;
            for (int j = 1; j < n; ++j)
                if (std::abs(grid.node(j) - ps.x) < std::abs(grid.node(best) - ps.x)) best = j;
            probe_idx.push_back(best);
            ps.x = grid.node(best);
            ps.t0 = initial.time;
            ps.dt = h;
            ps.u.clear();
            ps.u_t.clear();
            ps.u.reserve(nsteps + 1);
            ps.u_t.reserve(nsteps + 1);
        }
    }

    ModeState s = initial;
    std::vector<double> acc(n, 0.0);
    auto accel = [&](const std::vector<double>& v, std::vector<double>& a) {
        for (int j = 1; j + 1 < n; ++j) a[j] = grid.d2(v, j) - w[j] * v[j];
        a[0] = 0.0;
        a[n - 1] = 0.0;
    };
    auto record = [&]() {
        if (!probes) return;
        for (size_t k = 0; k < probes->size(); ++k) {
            const int j = probe_idx[k];
            (*probes)[k].u.push_back(s.v[j] / rr[j]);
            (*probes)[k].u_t.push_back(s.v_t[j] / rr[j]);
        }
    };

    s.v[0] = 0.0; s.v[n - 1] = 0.0;
    record();
    accel(s.v, acc);
    for (int step = 0; step < nsteps; ++step) {
        for (int j = 1; j + 1 < n; ++j) s.v_t[j] += 0.5 * h * acc[j];
        for (int j = 1; j + 1 < n; ++j) s.v[j] += h * s.v_t[j];
        accel(s.v, acc);
        for (int j = 1; j + 1 < n; ++j) s.v_t[j] += 0.5 * h * acc[j];
        s.time += h;
        record();
    }
    s.time = t_target;
    return s;
}

double energy(const SdSGeometry& geom, const ModeState& s, const Grid1D& grid) {
    const int n = grid.size();
    double e = 0.0;
    std::vector<double> vx(n, 0.0);
    for (int j = 1; j + 1 < n; ++j) vx[j] = grid.d1(s.v, j);
    vx[0] = grid.d1_left(s.v);
    vx[n - 1] = vx[n - 2];
    for (int j = 0; j + 1 < n; ++j) {
        const double hj = grid.node(j + 1) - grid.node(j);
        auto dens = [&](int k) {
            const double w = geom.mode_potential(s.ell, grid.node(k));
            return s.v_t[k] * s.v_t[k] + vx[k] * vx[k] + w * s.v[k] * s.v[k];
        };
        e += 0.5 * hj * (dens(j) + dens(j + 1));
    }
    return e;
}

// ---------------------------------------------------------------------------
// generic moving-wall solver

WallState evolve_wall(const WallProblem& prob, const WallState& initial, double t_target,
                      const Grid1D& grid, double dt, const EvolveOptions& opt) {
    const int n = grid.size();
    if (int(initial.q.size()) != n || int(initial.p.size()) != n)
        throw ValidationError("evolve_wall: state does not match grid");
    if (!(dt > 0.0)) throw ValidationError("evolve_wall: dt must be positive");
    if (dt > opt.cfl * grid.dx_min() / prob.max_char_speed)
        throw CFLViolation("evolve_wall: dt exceeds cfl * dx_min / max_char_speed");

    const double span = t_target - initial.time;
    const int nsteps = std::max(1, int(std::ceil(std::abs(span) / dt - 1e-12)));
    const double h = span / nsteps;

    WallState s = initial;
    std::vector<double> kq1(n), kp1(n), kq2(n), kp2(n), kq3(n), kp3(n), kq4(n), kp4(n);
    std::vector<double> tq(n), tp(n);

    auto rhs = [&](double tau, const std::vector<double>& q, const std::vector<double>& p,
                   std::vector<double>& dq, std::vector<double>& dp) {
        const double wv = prob.wall(tau);
        const double wd = prob.wall_dot(tau);
        for (int j = 1; j + 1 < n; ++j) {
            const double y = grid.node(j) + wv;
            const double q1 = grid.d1(q, j);
            dq[j] = p[j] + wd * q1;
            dp[j] = (wd + prob.adv(y)) * grid.d1(p, j) + prob.diff(y) * grid.d2(q, j) +
                    prob.cq1(y) * q1 + prob.cp(y) * p[j] + prob.cq0(y) * q[j];
        }
        dq[0] = 0.0; dp[0] = 0.0;
        dq[n - 1] = 0.0; dp[n - 1] = 0.0;
    };
    auto enforce_bc = [&](double tau, std::vector<double>& q, std::vector<double>& p) {
        q[0] = 0.0;
        p[0] = -prob.wall_dot(tau) * grid.d1_left(q);
        q[n - 1] = 0.0;
        p[n - 1] = 0.0;
    };

    enforce_bc(s.time, s.q, s.p);
    for (int step = 0; step < nsteps; ++step) {
        const double t0 = s.time;
        rhs(t0, s.q, s.p, kq1, kp1);
        for (int j = 0; j < n; ++j) { tq[j] = s.q[j] + 0.5 * h * kq1[j]; tp[j] = s.p[j] + 0.5 * h * kp1[j]; }
        enforce_bc(t0 + 0.5 * h, tq, tp);
        rhs(t0 + 0.5 * h, tq, tp, kq2, kp2);
        for (int j = 0; j < n; ++j) { tq[j] = s.q[j] + 0.5 * h * kq2[j]; tp[j] = s.p[j] + 0.5 * h * kp2[j]; }
        enforce_bc(t0 + 0.5 * h, tq, tp);
        rhs(t0 + 0.5 * h, tq, tp, kq3, kp3);
        for (int j = 0; j < n; ++j) { tq[j] = s.q[j] + h * kq3[j]; tp[j] = s.p[j] + h * kp3[j]; }
        enforce_bc(t0 + h, tq, tp);
        rhs(t0 + h, tq, tp, kq4, kp4);
        for (int j = 0; j < n; ++j) {
            s.q[j] += h / 6.0 * (kq1[j] + 2.0 * kq2[j] + 2.0 * kq3[j] + kq4[j]);
            s.p[j] += h / 6.0 * (kp1[j] + 2.0 * kp2[j] + 2.0 * kp3[j] + kp4[j]);
        }
        s.time = t0 + h;
        enforce_bc(s.time, s.q, s.p);
    }
    s.time = t_target;
    return s;
}

namespace {

// dense table of a smooth function of one variable for fast stage evaluation
struct CoeffTable {
    double y0 = 0.0, dy = 0.0;
    std::vector<double> val;
    double operator()(double y) const { return interp_cubic(val, y0, dy, y); }
};

CoeffTable tabulate(const std::function<double(double)>& f, double a, double b, int n) {
    CoeffTable t;
    t.y0 = a;
    t.dy = (b - a) / (n - 1);
    t.val.resize(n);
    for (int i = 0; i < n; ++i) t.val[i] = f(a + i * t.dy);
    return t;
}

} // namespace

WallState evolve_with_star(const SdSGeometry& geom, const StarModel& star, int ell,
                           const WallState& initial, double t_target, const Grid1D& grid,
                           double dt, const EvolveOptions& opt) {
    // v_tt = v_xx - W v with x = eta + z_*(t); q = v, p = v_t:
    //   q_t = p + z' q_eta,  p_t = z' p_eta + q_etaeta - W(eta + z_*) q
    const double t_lo = std::min(initial.time, t_target);
    const double t_hi = std::max(initial.time, t_target);
    const double x_min = star.z_star(t_hi) - 1.0;
    const double x_max = grid.x1() + star.z_star(t_lo) + 1.0;
    for (double t : {t_lo, t_hi})
        if (!(std::abs(star.z_star_dot(t)) < 1.0))
            throw BoundarySpeedViolation("evolve_with_star: |dz*/dt| >= 1");
    struct Shared { CoeffTable wtab; };
    auto shared = std::make_shared<Shared>();
    const int ntab = std::max(4096, int((x_max - x_min) / 5e-3));
    shared->wtab = tabulate(
        [&](double x) { return geom.mode_potential(ell, x); }, x_min, x_max, ntab);

    WallProblem prob;
    prob.wall = [&star](double t) { return star.z_star(t); };
    prob.wall_dot = [&star](double t) { return star.z_star_dot(t); };
    prob.adv = [](double) { return 0.0; };
    prob.diff = [](double) { return 1.0; };
    prob.cq1 = [](double) { return 0.0; };
    prob.cp = [](double) { return 0.0; };
    prob.cq0 = [shared](double y) { return -shared->wtab(y); };
    prob.max_char_speed = 2.0;
    return evolve_wall(prob, initial, t_target, grid, dt, opt);
}

WallState evolve_rhat_mixed(const SdSGeometry& geom, const FoliationChart& chart,
                            const StarModel& star, int ell, const WallState& initial,
                            double t_hat_target, const Grid1D& grid, double dt,
                            const EvolveOptions& opt) {
    // In (t_hat, r_hat) with G = F_K in x, r_hat = x + G + t_hat_B:
    //   (1-G'^2) v_tt + 2G'(1+G') v_tr + G'' (v_t - v_r) - (1+G')^2 v_rr + W v = 0
    // divided by (1-G'^2); wall-frame advection added by evolve_wall.
    const double rhat_max = grid.x1() + star.boundary_rhat(std::min(initial.time, t_hat_target)) + 1.0;
    const int ntab = std::max(8192, int(rhat_max / 2e-4));
    const double dy = rhat_max / (ntab - 1);

    auto shared = std::make_shared<std::array<CoeffTable, 4>>();
    for (auto& t : *shared) {
        t.y0 = 0.0;
        t.dy = dy;
        t.val.resize(ntab);
    }
    for (int i = 0; i < ntab; ++i) {
        const double rh = i * dy;
        double A, B, C, Wh;
        if (rh < 1e-12) {
            // horizon limit values
            const double a_m = chart.lambda_prime_minus();
            const double km = geom.horizons().kappa_minus;
            const double rm = geom.horizons().r_minus;
            const double m2 = geom.params().m_field * geom.params().m_field;
            const double cw = double(ell) * double(ell + 1) / (rm * rm) -
                              2.0 * geom.params().lambda / (3.0 * rm * rm) +
                              2.0 * geom.params().mass / std::pow(rm, 5) + m2;
            A = 1.0;
            B = 0.0;
            C = km;
            Wh = rm * rm * cw / (2.0 * a_m);
        } else {
            const double x = x_of_r_hat(chart, star, rh);
            const double gp = chart.Fprime_of_x(x);
            const double gpp = chart.Fsecond_of_x(x);
            const double one = 1.0 - gp * gp;
            const RadiusGaps g = geom.tortoise().radius_from_x(x);
            const double w = geom.mode_potential_of(ell, g);
            A = -2.0 * gp / (1.0 - gp);
            B = (1.0 + gp) / (1.0 - gp);
            C = gpp / one;
            Wh = w / one;
        }
        (*shared)[0].val[i] = A;
        (*shared)[1].val[i] = B;
        (*shared)[2].val[i] = C;
        (*shared)[3].val[i] = Wh;
    }

    WallProblem prob;
    prob.wall = [&star](double th) { return star.boundary_rhat(th); };
    prob.wall_dot = [&star](double th) { return star.boundary_rhat_dot(th); };
    prob.adv = [shared](double y) { return (*shared)[0](y); };
    prob.diff = [shared](double y) { return (*shared)[1](y); };
    prob.cq1 = [shared](double y) { return (*shared)[2](y); };
    prob.cp = [shared](double y) { return -(*shared)[2](y); };
    prob.cq0 = [shared](double y) { return -(*shared)[3](y); };
    prob.max_char_speed = 2.0;
    return evolve_wall(prob, initial, t_hat_target, grid, dt, opt);
}

// ---------------------------------------------------------------------------
// radiation fields

double RadiationField::eval(double s) const {
    if (u.empty()) return 0.0;
    const double send = s0 + ds * double(u.size() - 1);
    if (s <= s0 || s >= send) return 0.0;
    return interp_cubic(u, s0, ds, s);
}

double RadiationField::eval_deriv(double s) const {
    if (du.empty()) return 0.0;
    const double send = s0 + ds * double(du.size() - 1);
    if (s <= s0 || s >= send) return 0.0;
    return interp_cubic(du, s0, ds, s);
}

double RadiationField::max_abs() const {
    double m = 0.0;
    for (double x : u) m = std::max(m, std::abs(x));
    return m;
}

double RadiationField::support_left(double frac) const {
    const double thr = frac * max_abs();
    for (size_t i = 0; i < u.size(); ++i)
        if (std::abs(u[i]) > thr) return s0 + ds * double(i);
    return s0 + ds * double(u.size());
}

RadiationField extract_radiation(const SdSGeometry& geom, const ProbeSeries& main,
                                 const ProbeSeries& check, int side, int ell, double data_time,
                                 const ExtractionOptions& opt) {
    if (side != +1 && side != -1) throw ValidationError("extract_radiation: side must be +-1");
    const double w_here = geom.mode_potential(ell, main.x);
    if (w_here > opt.potential_tol)
        throw ValidationError("extract_radiation: W(X_ext) above threshold; move the probe out");

    RadiationField f;
    f.side = side;
    f.ell = ell;
    f.extraction_radius = std::abs(main.x);
    f.data_time = data_time;
    // s = (T - t) -/+ X_ext; backward series have dt < 0 so s increases
    f.ds = -main.dt;
    if (!(f.ds > 0.0)) throw ValidationError("extract_radiation: expected a backward series");
    f.s0 = (data_time - main.t0) - double(side) * f.extraction_radius;
    f.u = main.u;
    f.du.resize(main.u_t.size());
    for (size_t i = 0; i < main.u_t.size(); ++i) f.du[i] = -main.u_t[i];

    // exponential-tail taper on the late-time end
    const size_t n = f.u.size();
    const size_t wlen = std::max<size_t>(4, size_t(opt.taper_frac * double(n)));
    for (size_t i = 0; i < wlen; ++i) {
        const double t = smooth_step(double(i) / double(wlen));
        f.u[n - 1 - i] *= t;
        f.du[n - 1 - i] *= t;
    }

    // two-radius consistency on the overlapping s-range
    const double s0b = (data_time - check.t0) - double(side) * std::abs(check.x);
    const double dsb = -check.dt;
    double num = 0.0, den = 0.0;
    const size_t nb = check.u.size();
    for (size_t i = 0; i < nb; ++i) {
        const double s = s0b + dsb * double(i);
        if (s <= f.s0 + 2.0 * f.ds || s >= f.s0 + f.ds * double(n - 1 - wlen)) continue;
        const double a = f.eval(s);
        const double b = check.u[i];
        num += (a - b) * (a - b);
        den += a * a;
    }
    if (den > 0.0 && std::sqrt(num / den) > opt.consistency_tol)
        throw ExtractionInconsistent("extract_radiation: two-radius mismatch " +
                                     std::to_string(std::sqrt(num / den)));
    return f;
}

// ---------------------------------------------------------------------------
// diagnostics

DecayFit fit_decay_rate(const std::vector<double>& times, const std::vector<double>& sup_u,
                        double t_fit_lo, double t_fit_hi, double r2_floor) {
    if (times.size() != sup_u.size() || times.size() < 8)
        throw ValidationError("fit_decay_rate: bad series");
    // local maxima of the envelope within the window
    std::vector<double> tx, ly;
    for (size_t i = 1; i + 1 < times.size(); ++i) {
        if (times[i] < t_fit_lo || times[i] > t_fit_hi) continue;
        if (sup_u[i] >= sup_u[i - 1] && sup_u[i] >= sup_u[i + 1] && sup_u[i] > 0.0) {
            tx.push_back(times[i]);
            ly.push_back(std::log(sup_u[i]));
        }
    }
    if (tx.size() < 4) {
        // monotone envelope: fall back to all samples in the window
        tx.clear(); ly.clear();
        for (size_t i = 0; i < times.size(); ++i)
            if (times[i] >= t_fit_lo && times[i] <= t_fit_hi && sup_u[i] > 0.0) {
                tx.push_back(times[i]);
                ly.push_back(std::log(sup_u[i]));
            }
    }
    if (tx.size() < 4) throw FitRejected("fit_decay_rate: too few envelope points");
    const LinFit lf = linear_fit(tx, ly);
    DecayFit out;
    out.nu = -lf.slope;
    out.r2 = lf.r2;
    out.n_peaks = int(tx.size());
    if (lf.r2 < r2_floor)
        throw FitRejected("fit_decay_rate: r^2 = " + std::to_string(lf.r2) +
                          " below floor; widen the window");
    return out;
}

BlueshiftError blueshift_profile_error(const SdSGeometry& geom, const FoliationChart& chart,
                                       const ModeState& state, const Grid1D& grid,
                                       const RadiationField& u_minus, double data_time,
                                       double x_win_lo, double x_win_hi) {
    const double km = geom.horizons().kappa_minus;
    const double h = std::exp(-km * (data_time - state.time));
    const int n = 2000;
    std::vector<double> diff(n), model(n);
    const double dx = (x_win_hi - x_win_lo) / (n - 1);
    for (int i = 0; i < n; ++i) {
        const double x = x_win_lo + i * dx;
        const RadiusGaps g = geom.tortoise().radius_from_x(x);
        const double arg = std::log(g.gap_minus / h) / km + chart.lambda_minus();
        model[i] = u_minus.eval(arg);
        const double u = grid.interp(state.v, x) / g.r;
        diff[i] = u - model[i];
    }
    BlueshiftError e;
    for (int i = 0; i < n; ++i) {
        e.sup_err = std::max(e.sup_err, std::abs(diff[i]));
        e.model_sup = std::max(e.model_sup, std::abs(model[i]));
    }
    e.h_half_err = sobolev_norm(diff, dx, 0.5);
    return e;
}

} // namespace sdslab
