#pragma once
#include <functional>

#include "sdslab/charts.hpp"
#include "sdslab/evolution.hpp"
#include "sdslab/geometry.hpp"

namespace sdslab {

// Compactly supported reflection profile v0 on (0, ell_support).
struct ReflectionProfile {
    double ell_support = 1.0;
    double c2_bound = 0.0;
    std::function<double(double)> v0;
    std::function<double(double)> dv0;

    double operator()(double xi) const {
        return (xi <= 0.0 || xi >= ell_support) ? 0.0 : v0(xi);
    }
    double deriv(double xi) const {
        return (xi <= 0.0 || xi >= ell_support) ? 0.0 : dv0(xi);
    }
};

// C-infinity bump profile on (0, ell) with unit peak.
ReflectionProfile make_bump_profile(double ell_support);

// Characteristic reflection time: unique root of z_hat(t1) + t1 = s, with
// z_hat the boundary curve in the r_hat coordinate.
double t_hat_1(const StarModel& star, double s);

struct ToyOptions {
    double c_window = -1.0;  // defaults to 2 c_B
};

// Exact solution of the toy operator 2 lambda'(-d_t d_r + d_t^2) with
// Dirichlet data on the star surface: direct piece minus reflected piece.
double toy_closed_form(const ReflectionProfile& pr, const StarModel& star, double h,
                       double t_hat, double r_hat, const ToyOptions& opt = {});

// Linearized reflection argument y = beta_0 (r_hat + t_hat - t_hat_B).
double toy_linearized(const ReflectionProfile& pr, const StarModel& star, double h,
                      double t_hat, double r_hat, const ToyOptions& opt = {});
double toy_linearized_dt(const ReflectionProfile& pr, const StarModel& star, double h,
                         double t_hat, double r_hat, const ToyOptions& opt = {});

// WKB parametrix of the reflected wave in the (t_hat, r_hat) chart.
class WKBApprox {
  public:
    WKBApprox(const SdSGeometry& geom, const FoliationChart& chart, const StarModel& star,
              const ReflectionProfile& profile, double h);

    double y_of(double t_hat, double r_hat) const;
    // transport amplitude b = alpha(r_hat + t_hat - t_hat_B + c_B l h) / alpha(r_hat),
    // alpha(r_hat) = r
    double amplitude_b(double t_hat, double r_hat) const;
    double v_full(double t_hat, double r_hat) const;  // b * v0(y/h)
    double v_ap(double t_hat, double r_hat) const;    // (r_minus/r) v0(y/h)
    double v_ap_dt(double t_hat, double r_hat) const;

    // r as a function of r_hat
    double radius_of_rhat(double r_hat) const;

    double window_hi() const;  // t_hat_B - c_B l h
    const StarModel& star() const { return *star_; }

  private:
    const SdSGeometry* geom_;
    const FoliationChart* chart_;
    const StarModel* star_;
    ReflectionProfile profile_;
    double h_;

    void check_window(double t_hat) const;
};

struct ReflectionComparison {
    double h = 0.0;
    int ell_mode = 0;
    double err_h12 = 0.0;      // ||v - v_ap||_{H^{1/2}} on [z_*(0), 1] at t_hat = 0
    double err_hm12 = 0.0;     // time-derivative error in H^{-1/2}
    double ref_h12 = 0.0;      // scale of v_ap itself
    double runtime_steps = 0;
};

struct CompareOptions {
    double points_per_feature = 22.0;  // grid points across the reflected width
    double dx_max = 0.01;
    double cfl = 0.45;
};

// Solve the mixed problem (eq. of the reflection zone) backward from t_hat_B
// with data v0(r_hat/h), zero velocity, and compare at t_hat = 0 against the
// Dirichlet-signed WKB parametrix.
ReflectionComparison compare_reflection(const SdSGeometry& geom, const FoliationChart& chart,
                                        const StarModel& star, const ReflectionProfile& profile,
                                        int ell_mode, double h, const CompareOptions& opt = {});

} // namespace sdslab
