#pragma once

#include <vector>

#include "wander/curve.hpp"
#include "wander/types.hpp"

namespace wander::conformal {

// Power-series Riemann map h : D -> int(curve) with h(0) = 0, h'(0) > 0,
// produced by the angle-correspondence iteration on star-shaped analytic
// boundaries. The series extends past |z| = 1 as far as the coefficient
// decay allows; certificates below quantify both boundary fit and tail.
class ConformalMap {
 public:
  Complex eval(Complex z) const;
  Complex deriv(Complex z) const;
  Complex deriv2(Complex z) const;

  // Newton solve h(z) = w seeded at w; the maps here are near-identity.
  Complex invert(Complex w, double tol = 1e-13, int max_iter = 80) const;

  const std::vector<Complex>& coeffs() const { return coeffs_; }

  // Largest gap between the unit-circle image and the target curve, measured
  // along rays on an oversampled angle grid.
  double boundary_residual() const { return boundary_residual_; }
  // Magnitude of the strongest negative-frequency boundary mode; a holomorphy
  // defect indicator.
  double negative_content() const { return negative_content_; }
  // 1 - 2 sqrt(boundary_residual), clamped to [0, 1]; series trusted inside.
  double validated_radius() const;

  // Fitted geometric decay |a_n| <= C q^n of the coefficient tail.
  double tail_ratio() const { return tail_ratio_; }
  double tail_scale() const { return tail_scale_; }
  // sum_{n > deg} C (q R)^n; finite only when q R < 1, else +inf.
  double extension_tail_bound(double radius) const;

  // Boundary correspondence: polar angle theta(phi) of the image of e^{i phi},
  // stored as a trig series in phi. angle_preimage inverts it by Newton.
  double boundary_angle(double phi) const;
  double angle_preimage(double theta, double tol = 1e-12) const;

  int nodes() const { return nodes_; }

 private:
  friend ConformalMap solve_interior_map(const BoundaryCurve&, int, double, int);
  std::vector<Complex> coeffs_;
  std::vector<Complex> theta_modes_;  // series of theta(phi) - phi
  double boundary_residual_ = 0.0;
  double negative_content_ = 0.0;
  double tail_ratio_ = 0.0;
  double tail_scale_ = 0.0;
  int nodes_ = 0;
};

// Runs the correspondence iteration at `nodes` and at double resolution,
// keeps the fine solution, and reports the measured residuals.
ConformalMap solve_interior_map(const BoundaryCurve& curve, int nodes = 1024, double tol = 1e-13,
                                int max_iter = 400);

// r eps e^eps (1 + (2/pi) log((1+r)/(1-r))): the near-identity deviation
// bound for maps of eps-round curves at radius r < 1.
double warschawski_rhs(double eps, double r);

struct BoundCert {
  double eps = 0.0;
  double r = 0.0;
  double measured = 0.0;
  double bound = 0.0;
  bool pass = false;
};

// sup_{|z|=r} |h(z) - z| against warschawski_rhs. Interior values obey the
// maximum principle, so the circle suffices.
BoundCert certify_near_identity(const ConformalMap& map, double eps, double r, int samples = 2048);

// sup_{|w|=r} |h^{-1}(w) - w| against 3 eps log(1/eps); demands eps < e^{-2}.
BoundCert certify_inverse_near_identity(const ConformalMap& map, double eps, double r,
                                        int samples = 1024);

// Map of the curve's exterior onto the exterior of the unit disk, fixing
// infinity, built from the interior map of the inverted curve.
class ExteriorMap {
 public:
  ExteriorMap(ConformalMap inverted_interior) : inner_(std::move(inverted_interior)) {}
  Complex eval(Complex z) const;     // 1 / hhat^{-1}(1/z)
  double log_abs(Complex z) const;   // log|eval(z)|, the exterior Green gauge
  const ConformalMap& inner() const { return inner_; }

 private:
  ConformalMap inner_;
};

ExteriorMap solve_exterior_map(const BoundaryCurve& curve, int nodes = 1024, double tol = 1e-13);

}  // namespace wander::conformal
