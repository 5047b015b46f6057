#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "wander/conformal.hpp"
#include "wander/curve.hpp"
#include "wander/region.hpp"
#include "wander/sched.hpp"
#include "wander/types.hpp"

// Straightening geometry shared by the construction stages: the target domain,
// a polynomial Riemann map trusted on an inflated disk, and the bi-Lipschitz
// constant of the inverse on the largest collar the stages touch.

namespace wander::construct {

// The fitted series carries noise coefficients near machine epsilon; those
// explode when evaluated at 1 + rho0, so the model map is the series cut at
// the noise floor. The model domain is the polynomial's image, exactly.
struct DomainModel {
  BoundaryCurve curve;
  conformal::ConformalMap fit;  // full correspondence solve, kept for its record
  std::vector<Complex> poly;    // poly[n] multiplies w^n; the map in use
  double rho0 = 0.0;

  double a_u = 0.0;              // diam(U_0) + 1
  double c_u = 2.0;              // max(2, sup |phi'|, sup 1/|phi'|) on |w| = 1+rho0
  double deriv_sup = 0.0;        // sup |phi'| on the inflated rim
  double deriv_inf = 0.0;        // inf |phi'| on the inflated rim
  double truncation_defect = 0.0;  // sum |a_n| over dropped n, the boundary cost
  double diam_u0 = 0.0;

  Complex phi(Complex w) const;
  Complex phi_deriv(Complex w) const;
  Complex phi_inv(Complex z) const;  // Newton on the polynomial
  // (phi^{-1})'(z) = 1 / phi'(phi^{-1}(z)).
  Complex phi_inv_deriv(Complex z) const;

  // Image of |w| = 1 + rho as a polyline region (the inflated layer U_rho).
  RegionPtr inflated_region(double rho, std::size_t samples = 2048) const;
  std::vector<Complex> inflated_loop(double rho, std::size_t samples) const;
};

// Validates: Jordan + star-shaped curve, small correspondence residual, and a
// small truncation defect (the model polynomial must track the input curve).
DomainModel build_domain_model(const BoundaryCurve& curve, double rho0,
                               std::size_t nodes = 1024);

// Stage radii derived from a schedule: rho_k, gamma_k, r_k as plain doubles,
// with rho_0 = 1/loglog tau_1 prepended (the schedule object starts at rho_1).
struct StageRadii {
  double alpha = 0.0;
  std::vector<double> tau;    // tau[k] = tau_{k+1} 0-based; tau.front() = tau_1
  std::vector<double> rho;    // rho[k] = rho_k, k = 0 .. size-1
  std::vector<double> gamma;  // gamma[k] = gamma_k, k = 1 .. size-2 (slot 0 unused)
  std::vector<double> r;      // r[k] = 1 + (rho_k + rho_{k+1})/2, k = 0 .. size-2

  double tau_k(int k) const;    // 1-based
  double rho_k(int k) const;    // 0-based index semantics, rho_0 valid
  double gamma_k(int k) const;  // k >= 1
  double r_k(int k) const;      // k >= 0
  int stages() const { return int(tau.size()); }
};

StageRadii stage_radii(const sched::Schedule& s);

}  // namespace wander::construct
