#pragma once
#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include "sdslab/evolution.hpp"
#include "sdslab/geometry.hpp"

namespace sdslab {

// Half-line Dirichlet operator H0 = D_x^2 + W_ell on a uniform grid
// [x0, x0 + (n+1) dx]; interior nodes j = 1..n carry the unknowns, both ends
// are Dirichlet rows. D^2 is the standard second-difference stencil.
class DiscreteOperator {
  public:
    DiscreteOperator() = default;

    double x0 = 0.0;   // wall position z_*(0)
    double dx = 0.0;
    int n = 0;         // number of interior nodes
    int ell = 0;
    std::vector<double> wpot;  // W_ell at interior nodes (empty => pure D^2)

    double node(int j) const { return x0 + dx * double(j + 1); }

    std::vector<double> apply(const std::vector<double>& v) const;
    // (H0 + shift)^{-1} rhs by the Thomas algorithm; shift >= 0
    std::vector<double> solve_shifted(double shift, const std::vector<double>& rhs) const;

    // dense spectral data (computed lazily, cached)
    const std::vector<double>& eigenvalues() const;
    // eigenvector matrix column k = k-th eigenvector, unit 2-norm
    const std::vector<std::vector<double>>& eigenvectors() const;

    double lowest_eigenvalue() const { return eigenvalues().front(); }

  private:
    mutable std::shared_ptr<std::pair<std::vector<double>, std::vector<std::vector<double>>>> eig_;
    void ensure_eigen() const;
};

DiscreteOperator assemble_operator(const SdSGeometry& geom, int ell, double x0, double x_max,
                                   double dx);
DiscreteOperator assemble_free_operator(double x0, double x_max, double dx);  // W = 0

enum class ThermalKind { phi, psi };

// phi(z) = sqrt(z) coth(beta sqrt(z)), psi(z) = coth(beta sqrt(z))/sqrt(z).
struct ThermalFunctional {
    double beta = 1.0;
    ThermalKind kind = ThermalKind::phi;
    int k_max = 0;            // partial-fraction truncation (0 => automatic)
    double series_tol = 1e-9; // relative tail target for route B

    double scalar(double z) const;  // pointwise value (series-safe near 0)
};

enum class QuadRoute { eigen, series };

struct QuadFormResult {
    double value = 0.0;
    double tail_bound = 0.0;  // route B only
    int k_used = 0;
};

// <v, f(H0) v> with the L2(dx) inner product. Route eigen: dense
// eigendecomposition. Route series: partial-fraction resolvent sums with an
// analytic tail correction; throws SeriesNotConverged / SingularOperator.
QuadFormResult quad_form(const DiscreteOperator& op, const ThermalFunctional& f,
                         const std::vector<double>& v, QuadRoute route);

// Explicit resolvent kernels of D^2_{x,0} on the half line:
//   K_lambda(x,y) = i (e^{i lambda |x-y|} - e^{i lambda |x+y-2 x0|}) / (2 lambda)
std::vector<std::complex<double>> dirichlet_resolvent_apply(const DiscreteOperator& op,
                                                            std::complex<double> lambda,
                                                            const std::vector<double>& f);
// lambda -> 0 kernel min(x,y) - x0
std::vector<double> dx0_inverse_sq(const DiscreteOperator& op, const std::vector<double>& f);

// <mu(D^2_{x,0}) v, v> by the odd-extension / discrete sine transform identity.
// The functional calculus uses the exact discrete symbol of the
// second-difference operator, so it coincides with the eigen route.
double sine_form(const DiscreteOperator& op, const std::function<double(double)>& mu,
                 const std::vector<double>& v);

// Whole-line thermal quadratic form of a uniformly sampled profile:
//   phi:  (1/2pi) int |xi| coth(beta |xi|) |hat u|^2 dxi
//   psi:  (1/2pi) int coth(beta |xi|)/|xi| |hat u|^2 dxi   (needs hat u(0) = 0)
double thermal_target(const std::vector<double>& u, double ds, double beta, ThermalKind kind);
double thermal_target(const RadiationField& u_star, double beta, ThermalKind kind);
// psi target applied to the derivative samples of the field
double thermal_target_deriv(const RadiationField& u_star, double beta);

struct LogProfileOptions {
    double resolve = 12.0;    // points across the innermost support feature
    double x_max = 1.6;       // far Dirichlet end of the half-line grid
    double chi_edge = 0.08;   // cutoff ramp width inside [z0, 1]
};

// The Hawking-temperature mechanism in isolation:
// builds u_B(x) = chi(x) u*(-)(kappa^{-1} ln(gamma0 x / h)) on [z0, x_max] and
// returns <u_B, |D_{x,0}| u_B> by sine_form.
double log_profile_form(const SdSGeometry& geom, const RadiationField& u_minus, double gamma0,
                        double h, double z0, const LogProfileOptions& opt = {});

struct HawkingForm {
    double q = 0.0;         // <r u, phi+(H0) r u> + <r u_t, psi+(H0) r u_t>, summed over modes
    double q_b = 0.0;       // near-boundary piece (chi-cutoff at [z0, 1])
    double q_wb = 0.0;      // far piece (support x >= 1/2)
    double tail_bound = 0.0;
};

// Quadratic form of Theorem-level Cauchy data at t = 0. Fields are given per
// mode as r*u and r*u_t samples on a uniform half-line grid starting at z0.
HawkingForm hawking_quadratic_form(const SdSGeometry& geom,
                                   const std::vector<std::vector<double>>& ru,
                                   const std::vector<std::vector<double>>& rut,
                                   const std::vector<int>& ells, double z0, double dx,
                                   double beta_plus);

// Right side of the theorem: sum over horizons of the thermal targets of the
// extracted radiation profiles.
double hawking_target(const SdSGeometry& geom, const std::vector<RadiationField>& min_fields,
                      const std::vector<RadiationField>& plus_fields);

// Fit the inverse temperature: solve target(beta) = measured for beta by
// bisection (target strictly decreasing in beta).
double fit_inverse_temperature(const RadiationField& u_star, double measured, double r_weight,
                               double beta_lo, double beta_hi);

// ---------------------------------------------------------------------------
// Appendix approximation-lemma fits

struct SymbolFunction {
    double delta = 0.3;
    std::function<double(double)> f, df;
};

// f(y) = <y>^{-delta} * smooth, a representative of S^{-delta}
SymbolFunction make_symbol_profile(double delta);

// numerical S^{-delta} membership check: sup <y>^{delta+alpha} |f^(alpha)|
// over a wide grid for alpha in {0,1,2}; throws FitRejected when unbounded.
double symbol_class_constant(const SymbolFunction& f, double y_max = 4000.0);

struct AppendixFit {
    std::vector<double> param;  // h or ell values
    std::vector<double> norm;
    double slope = 0.0;         // log-log slope
};

// Lemma of the F_h type: F_h(y) = chi(y) [f((y+y^2 zeta(y))/h) - f(y/h)],
// H^{1/2} norm fitted against h. zeta >= 0 smooth.
AppendixFit appendix_fh_fit(const SymbolFunction& f, const std::vector<double>& hs);
// companion G_h bound in H^{-1/2}
AppendixFit appendix_gh_fit(const SymbolFunction& f, const std::vector<double>& hs);
// Lemma of the F_{l,h} type: chi0(x) rho(x/(l h)) f(x/h), slope in l at fixed h
AppendixFit appendix_flh_fit(const SymbolFunction& f, double h, const std::vector<double>& ells);

} // namespace sdslab
