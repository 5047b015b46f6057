#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wander/types.hpp"

namespace wander {

// Closed analytic curve gamma(t) = sum_{n} c_n e^{i n t}, t in [0, 2pi),
// indices running min_index .. min_index + coeffs.size() - 1.
class BoundaryCurve {
 public:
  BoundaryCurve() = default;
  BoundaryCurve(std::vector<Complex> coeffs, int min_index, double extension_radius = 1.0)
      : coeffs_(std::move(coeffs)), min_index_(min_index), extension_radius_(extension_radius) {
    require(!coeffs_.empty(), "curve needs at least one coefficient");
    require(extension_radius_ >= 1.0, "extension radius must be >= 1");
  }

  static BoundaryCurve circle(Complex center, double radius);
  // r(t) = 1 + eps*cos(m t) times e^{it}; the toy wobbly-circle family.
  static BoundaryCurve wobbly_circle(double eps, int m);
  static BoundaryCurve ellipse(double a, double b);

  Complex eval(double t) const;
  Complex deriv(double t) const;
  Complex deriv2(double t) const;

  const std::vector<Complex>& coeffs() const { return coeffs_; }
  int min_index() const { return min_index_; }
  double extension_radius() const { return extension_radius_; }
  void set_extension_radius(double r) { extension_radius_ = r; }

  std::vector<Complex> samples(int n) const;

  // Trapezoid nodes are uniform in t; derivative samples pair with them.
  std::vector<Complex> deriv_samples(int n) const;

  // sup over samples of | |gamma(t)| - 1 |.
  double roundness(int n = 2048) const;

  double diameter(int n = 4096) const;

  // Dense polyline self-intersection scan plus an immersion check.
  bool is_jordan(int n = 1024) const;

  // Star-shaped about the origin: arg gamma(t) strictly increasing. Needed by
  // the angle-parametrized map solver.
  bool star_shaped(int n = 2048) const;

  // Radius of the boundary point with polar angle theta (star-shaped curves),
  // found by monotone bisection on arg gamma(t).
  double polar_radius(double theta, double tol = 1e-14) const;

  std::string to_json() const;
  static BoundaryCurve from_json(const std::string& text);

  // Least-squares-free Fourier fit of a uniformly sampled closed loop; drops
  // coefficients below rel_tol times the largest.
  static BoundaryCurve from_samples(const std::vector<Complex>& pts, double rel_tol = 1e-13,
                                    double extension_radius = 1.0);

 private:
  std::vector<Complex> coeffs_;
  int min_index_ = 0;
  double extension_radius_ = 1.0;
};

}  // namespace wander
