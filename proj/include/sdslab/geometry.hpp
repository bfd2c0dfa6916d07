#pragma once
#include <array>
#include <vector>

#include "sdslab/errors.hpp"

namespace sdslab {

// Background parameters in geometric units. The subextremal condition
// 0 < 9 M^2 Lambda < 1 guarantees two positive horizon radii.
struct SdSParams {
    double mass = 1.0;       // M
    double lambda = 0.04;    // cosmological constant
    double m_field = 0.5;    // Klein-Gordon mass

    void validate() const;
};

struct HorizonData {
    double r_neg = 0.0;        // negative root of Delta_r / r
    double r_minus = 0.0;      // black-hole horizon
    double r_plus = 0.0;       // cosmological horizon
    double kappa_minus = 0.0;  // surface gravity at r_minus
    double kappa_plus = 0.0;   // surface gravity at r_plus
    double beta_minus = 0.0;   // pi / kappa_minus
    double beta_plus = 0.0;    // pi / kappa_plus
};

// Radius together with horizon gaps kept at full precision in the tails,
// where r itself saturates double precision against r_minus / r_plus.
struct RadiusGaps {
    double r = 0.0;
    double gap_minus = 0.0;  // r - r_minus  (> 0)
    double gap_plus = 0.0;   // r_plus - r   (> 0)
};

double delta_r(const SdSParams& p, double r);
double delta_r_prime(const SdSParams& p, double r);

// All nonzero roots of Delta_r plus surface gravities. Closed trigonometric
// form for the depressed cubic, one Newton polish per root.
HorizonData horizon_roots(const SdSParams& p);

// Tortoise coordinate x with x'(r) = r^2 / Delta_r, anchored so that
// x(anchor_radius) = 0. Closed form via partial fractions over the three
// nonzero roots; inverse by Newton with bisection bracketing, switching to a
// horizon-tail fixed point for large |x|.
class TortoiseMap {
  public:
    TortoiseMap() = default;
    TortoiseMap(const SdSParams& p, const HorizonData& h, double anchor_radius);

    double anchor_radius() const { return anchor_radius_; }

    double x_of_r(double r) const;
    // x from a horizon gap, stable when the gap underflows r`s resolution.
    double x_of_gap_minus(double gap) const;
    double x_of_gap_plus(double gap) const;

    RadiusGaps radius_from_x(double x) const;

    // Smooth parts of x near each horizon:
    //   x = (1/2k-) ln(r - r_minus) + g_minus(r)
    //   x = -(1/2k+) ln(r_plus - r) + g_plus(r)
    double g_minus(double r) const;
    double g_plus(double r) const;

    const std::array<double, 3>& partial_fraction_coeffs() const { return coef_; }

  private:
    std::array<double, 3> roots_{};  // r_neg, r_minus, r_plus
    std::array<double, 3> coef_{};   // r_i^2 / Delta_r'(r_i)
    double anchor_radius_ = 0.0;
    double anchor_const_ = 0.0;
    double km_ = 0.0, kp_ = 0.0;
    // uniform lookup table for the Newton initial guess
    double tab_x0_ = 0.0, tab_dx_ = 0.0;
    std::vector<double> tab_r_;

    double newton_invert(double x, double r0) const;
};

// Bundle used by every other module.
class SdSGeometry {
  public:
    SdSGeometry() = default;
    explicit SdSGeometry(const SdSParams& p, double anchor_radius = -1.0);

    const SdSParams& params() const { return params_; }
    const HorizonData& horizons() const { return hor_; }
    const TortoiseMap& tortoise() const { return map_; }

    double delta(double r) const { return delta_r(params_, r); }
    double delta_prime(double r) const { return delta_r_prime(params_, r); }

    // Delta_r evaluated from a horizon gap; exact polynomial rearrangement,
    // no cancellation for small gaps.
    double delta_from_gap_minus(double gap) const;
    double delta_from_gap_plus(double gap) const;
    double delta_of(const RadiusGaps& g) const;

    // dr/dx = Delta_r / r^2
    double dr_dx(const RadiusGaps& g) const { return delta_of(g) / (g.r * g.r); }

    // Mode potential of H = D_x^2 + Delta_r l(l+1)/r^2 + V,
    // V = (d^2 r/dx^2)/r + m^2 Delta_r, as a function of x.
    double mode_potential(int ell, double x) const;
    double mode_potential_of(int ell, const RadiusGaps& g) const;

    // V only (ell = 0 part without the centrifugal term)
    double potential_v(const RadiusGaps& g) const;

  private:
    SdSParams params_{};
    HorizonData hor_{};
    TortoiseMap map_{};
};

} // namespace sdslab
