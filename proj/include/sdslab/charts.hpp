#pragma once
#include <vector>

#include "sdslab/geometry.hpp"

namespace sdslab {

struct FoliationOptions {
    double left_ramp_width = 2.5;   // x-width of the rho ramp below x(k_lo)
    double right_ramp_width = 3.0;  // x-width of the rho ramp above x(k_hi)
    double a_plus = -0.5;           // lambda_K'(r_plus) (free choice, < 0)
    double margin_floor = 1e-3;     // required spacelike margin on the window
    double margin_window_x = 12.0;  // validation window |x| <= margin_window_x
    double deep_x = 65.0;           // integration depth toward the horizons
    double shooting_tol = 1e-10;    // |mu_K(r_minus)| target for bisection
    double table_dx = 1.0 / 512.0;  // spline spacing for F_K in the ramp zone
};

// Horizon-penetrating foliation t_hat = t - F_K(r).
//
// F_K is represented in the tortoise variable: G(x) = F_K(r(x)), with
// G'(x) = rho(x) (sigma(x) + a(x) Delta_r/r^2). rho vanishes on x(K) and is 1
// beyond the ramps; sigma = -1 left of K, +1 right of K; a blends between the
// shot amplitude a_minus and the configured a_plus inside K. Outside the ramps
// G has closed forms, inside it is a cubic Hermite table with analytic G'.
class FoliationChart {
  public:
    FoliationChart() = default;

    double k_lo() const { return k_lo_; }
    double k_hi() const { return k_hi_; }
    double x_lo() const { return x_lo_; }
    double x_hi() const { return x_hi_; }

    double F_of_x(double x) const;        // G(x) = F_K(r(x))
    double Fprime_of_x(double x) const;   // G'(x), analytic
    double Fsecond_of_x(double x) const;  // G''(x), analytic
    double F_of_r(double r) const;

    double lambda_minus() const { return lam_minus_; }        // lambda_K(r_minus)
    double lambda_plus() const { return lam_plus_; }          // lambda_K(r_plus)
    double lambda_prime_minus() const { return a_minus_; }    // lambda_K'(r_minus) > 0
    double lambda_prime_plus() const { return a_plus_; }      // lambda_K'(r_plus) < 0
    double mu_minus_residual() const { return mu_residual_; } // mu_K(r_minus) after shooting

    // Spacelike margin min(1 - |G'|) over the validation window.
    double spacelike_margin() const { return margin_; }

    // time-reversal map: (t_hat, r) -> (-t_hat - 2 F_K(r), r)
    double gamma_reflect_t(double t_hat, double r) const { return -t_hat - 2.0 * F_of_r(r); }
    double gamma_reflect_t_of_x(double t_hat, double x) const { return -t_hat - 2.0 * F_of_x(x); }

    const SdSGeometry* geometry() const { return geom_; }
    const FoliationOptions& options() const { return opt_; }

    friend FoliationChart build_foliation(const SdSGeometry& geom, double k_lo, double k_hi,
                                          const FoliationOptions& opt);

  private:
    const SdSGeometry* geom_ = nullptr;
    FoliationOptions opt_{};
    double k_lo_ = 0.0, k_hi_ = 0.0;
    double x_lo_ = 0.0, x_hi_ = 0.0;
    double ramp_bot_ = 0.0, ramp_top_ = 0.0;  // analytic tails beyond these
    double a_minus_ = 0.0, a_plus_ = 0.0;
    double lam_minus_ = 0.0, lam_plus_ = 0.0;
    double mu_residual_ = 0.0;
    double margin_ = 0.0;
    // Hermite table of G on [ramp_bot_, ramp_top_]
    double tab_x0_ = 0.0, tab_dx_ = 0.0;
    std::vector<double> tab_g_, tab_gp_;

    double rho(double x) const;
    double rho_prime(double x) const;
    double a_of_x(double x) const;
    double a_prime_of_x(double x) const;
    double gprime_raw(double x) const;
};

FoliationChart build_foliation(const SdSGeometry& geom, double k_lo, double k_hi,
                               const FoliationOptions& opt = {});

// Collapsing-star boundary and its images in the hatted charts.
class StarModel {
  public:
    StarModel() = default;

    double a0() const { return a0_; }
    double t_hat_b() const { return t_hat_b_; }
    double alpha0() const { return alpha0_; }   // d z(t_hat)/d t_hat at t_hat_B (r-coordinate)
    double beta0() const { return beta0_; }
    double gamma0() const { return gamma0_; }
    double c_b() const { return c_b_; }         // sup |z_hat'| (r_hat-coordinate curve)

    // S_* chart boundary x = z_*(t) and derivatives
    double z_star(double t) const;
    double z_star_dot(double t) const;
    double z_star_ddot(double t) const;

    // boundary in (t_hat, r): radius of the surface at time t_hat in [0, t_hat_B)
    double boundary_r(double t_hat) const;
    // boundary in (t_hat, r_hat) and derivatives (spline-sampled)
    double boundary_rhat(double t_hat) const;
    double boundary_rhat_dot(double t_hat) const;
    double boundary_rhat_ddot(double t_hat) const;

    // S_* time t on the boundary for a given t_hat
    double t_of_t_hat(double t_hat) const;

    const FoliationChart* chart() const { return chart_; }

    friend StarModel build_star(const SdSGeometry& geom, const FoliationChart& chart, double a0,
                                double t_hat_b_tol);

  private:
    const SdSGeometry* geom_ = nullptr;
    const FoliationChart* chart_ = nullptr;
    double a0_ = 0.0;
    double kappa_minus_ = 0.0;
    double t_hat_b_ = 0.0;
    double alpha0_ = 0.0, beta0_ = 0.0, gamma0_ = 0.0, c_b_ = 0.0;
    // samples of the boundary curve vs t_hat on [0, t_hat_b)
    double s_t0_ = 0.0, s_dt_ = 0.0;
    std::vector<double> s_r_, s_rhat_, s_rhat_dot_, s_t_;
};

StarModel build_star(const SdSGeometry& geom, const FoliationChart& chart, double a0,
                     double t_hat_b_tol = 1e-9);

// r_hat = x + F_K(r(x)) + t_hat_B; strictly increasing in x.
double r_hat(const FoliationChart& chart, const StarModel& star, double x);
double r_hat_dx(const FoliationChart& chart, double x);  // d r_hat / dx = 1 + G'
// inverse map x(r_hat) by Newton
double x_of_r_hat(const FoliationChart& chart, const StarModel& star, double rhat);

} // namespace sdslab
