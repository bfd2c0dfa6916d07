#pragma once
#include <functional>
#include <optional>
#include <vector>

#include "sdslab/charts.hpp"
#include "sdslab/geometry.hpp"

namespace sdslab {

// 1D spatial grid, possibly smoothly stretched. Nodes are strictly
// increasing; 3-point finite-difference weights are precomputed per node.
class Grid1D {
  public:
    static Grid1D uniform(double x0, double x1, int n);
    // Grid on [0, length] clustered at 0: spacing dx_min at the wall growing
    // smoothly to dx_max beyond cluster_len.
    static Grid1D wall_clustered(double length, double dx_min, double dx_max,
                                 double cluster_len);

    int size() const { return int(nodes_.size()); }
    double node(int j) const { return nodes_[j]; }
    const std::vector<double>& nodes() const { return nodes_; }
    double dx_min() const { return dx_min_; }
    double x0() const { return nodes_.front(); }
    double x1() const { return nodes_.back(); }
    bool is_uniform() const { return uniform_; }
    const std::string& descriptor() const { return desc_; }

    // first/second derivative of sampled values at interior node j
    double d1(const std::vector<double>& f, int j) const {
        return d1m_[j] * f[j - 1] + d10_[j] * f[j] + d1p_[j] * f[j + 1];
    }
    double d2(const std::vector<double>& f, int j) const {
        return d2m_[j] * f[j - 1] + d20_[j] * f[j] + d2p_[j] * f[j + 1];
    }
    // one-sided first derivative at the left edge (second order)
    double d1_left(const std::vector<double>& f) const;

    // cubic interpolation of nodal values at x (monotone nodes)
    double interp(const std::vector<double>& f, double x) const;

  private:
    std::vector<double> nodes_;
    std::vector<double> d1m_, d10_, d1p_, d2m_, d20_, d2p_;
    double dx_min_ = 0.0;
    bool uniform_ = false;
    std::string desc_;
    void finalize();
};

// Per-spherical-harmonic field v = r u and its time derivative on a grid.
struct ModeState {
    int ell = 0;
    double time = 0.0;
    std::vector<double> v;
    std::vector<double> v_t;
    double boundary_x = -std::numeric_limits<double>::infinity();
};

struct ProbeRequest {
    double x = 0.0;
};

struct ProbeSeries {
    double x = 0.0;
    double t0 = 0.0, dt = 0.0;  // sample times t0 + k dt (dt signed)
    std::vector<double> u;      // u = v / r at the probe
    std::vector<double> u_t;
};

struct EvolveOptions {
    double cfl = 0.9;
    double causality_margin = 2.0;
    bool check_domain = true;
};

// Leapfrog (velocity-Verlet) evolution of d2v/dt2 = v_xx - W v on a static
// grid, either full line (Dirichlet far walls out of the domain of
// dependence) or half line with a static Dirichlet wall at the first node.
ModeState evolve_free(const SdSGeometry& geom, const ModeState& initial, double t_target,
                      const Grid1D& grid, double dt, const EvolveOptions& opt = {},
                      std::vector<ProbeSeries>* probes = nullptr, bool left_wall = false);

// total field energy  int (v_t^2 + v_x^2 + W v^2) dx
double energy(const SdSGeometry& geom, const ModeState& s, const Grid1D& grid);

// Generic 1+1 mixed problem in wall-hugging coordinates eta = y - wall(tau):
//   q_tau = p + wall'(tau) q_eta
//   p_tau = (wall'(tau) + adv(y)) p_eta + diff(y) q_etaeta
//           + cq1(y) q_eta + cp(y) p + cq0(y, tau) q
// with q(eta=0) = 0 and a far Dirichlet end. RK4 in tau (supports dtau < 0).
struct WallProblem {
    std::function<double(double)> wall, wall_dot;
    std::function<double(double)> adv, diff, cq1, cp;   // functions of y = eta + wall(tau)
    std::function<double(double)> cq0;                  // potential-like coefficient of q
    double max_char_speed = 2.0;                        // for the CFL bound
};

struct WallState {
    double time = 0.0;
    std::vector<double> q;  // field
    std::vector<double> p;  // lab-frame time derivative
};

WallState evolve_wall(const WallProblem& prob, const WallState& initial, double t_target,
                      const Grid1D& eta_grid, double dt, const EvolveOptions& opt = {});

// Klein-Gordon evolution in S_* with the moving star boundary x = z_*(t).
// State v lives on eta = x - z_*(t); v(eta=0) = 0.
WallState evolve_with_star(const SdSGeometry& geom, const StarModel& star, int ell,
                           const WallState& initial, double t_target, const Grid1D& eta_grid,
                           double dt, const EvolveOptions& opt = {});

// Mixed problem of the reflection zone in the (t_hat, r_hat) chart:
// (square + m^2) v = 0 with v = r u, Dirichlet on the star surface
// r_hat = z_hat(t_hat). State on eta = r_hat - z_hat(t_hat).
WallState evolve_rhat_mixed(const SdSGeometry& geom, const FoliationChart& chart,
                            const StarModel& star, int ell, const WallState& initial,
                            double t_hat_target, const Grid1D& eta_grid, double dt,
                            const EvolveOptions& opt = {});

// Asymptotic profile along one horizon direction, in the convention
// u(t, x) ~ u*(s),  s = (T - t) -/+ X_ext  at the probe x = +/- X_ext.
struct RadiationField {
    int side = +1;  // +1: cosmological, -1: black hole
    int ell = 0;
    double s0 = 0.0, ds = 0.0;
    std::vector<double> u;
    std::vector<double> du;  // d u*/ds
    double extraction_radius = 0.0;
    double data_time = 0.0;

    double eval(double s) const;
    double eval_deriv(double s) const;
    double max_abs() const;
    // largest s below which samples stay under frac * max (left support edge)
    double support_left(double frac = 1e-10) const;
};

struct ExtractionOptions {
    double consistency_tol = 0.02;  // two-radius relative L2 mismatch
    double taper_frac = 0.06;
    double potential_tol = 1e-2;    // required W(+/- X_ext) bound
};

// Build u*_side from a probe time series of a free backward run with data at
// time T. `check` is the series at the second radius (|x| + 5).
RadiationField extract_radiation(const SdSGeometry& geom, const ProbeSeries& main,
                                 const ProbeSeries& check, int side, int ell, double data_time,
                                 const ExtractionOptions& opt = {});

struct DecayFit {
    double nu = 0.0;
    double r2 = 0.0;
    int n_peaks = 0;
};

// Least-squares fit of the log-envelope of sup_{K_w} |u| over a late-time
// window of a forward (or gamma-reflected backward) run.
DecayFit fit_decay_rate(const std::vector<double>& times, const std::vector<double>& sup_u,
                        double t_fit_lo, double t_fit_hi, double r2_floor = 0.98);

struct BlueshiftError {
    double sup_err = 0.0;
    double h_half_err = 0.0;   // H^{1/2} error over the window
    double model_sup = 0.0;    // scale of the model profile on the window
};

// Compare chi_-(r) u against the blueshift log-profile built from u*_- at
// backward time t (data at T): model(r) = u*(kappa^{-1} ln((r-r_-)/h) +
// lambda_K(r_-)), h = e^{-kappa (T-t)}.
BlueshiftError blueshift_profile_error(const SdSGeometry& geom, const FoliationChart& chart,
                                       const ModeState& state, const Grid1D& grid,
                                       const RadiationField& u_minus, double data_time,
                                       double x_win_lo, double x_win_hi);

// u = v/r on the grid
std::vector<double> field_u(const SdSGeometry& geom, const Grid1D& grid,
                            const std::vector<double>& v);

// resample nodal values onto a uniform grid [a, b] with n points
std::vector<double> resample_uniform(const Grid1D& grid, const std::vector<double>& f,
                                     double a, double b, int n);

} // namespace sdslab
