#include <doctest.h>

#include <cmath>

#include "support/ks_oracle.hpp"
#include "wander/conformal.hpp"
#include "wander/curve.hpp"

using namespace wander;
using namespace wander::conformal;

TEST_CASE("unit circle maps to the identity") {
  auto map = solve_interior_map(BoundaryCurve::circle({0.0, 0.0}, 1.0), 64);
  CHECK(std::abs(map.coeffs()[1] - Complex(1.0, 0.0)) < 1e-12);
  CHECK(std::abs(map.coeffs()[0]) < 1e-12);
  CHECK(map.boundary_residual() < 1e-10);
  for (double t : {0.3, 2.2, 5.0}) {
    Complex z = std::polar(0.7, t);
    CHECK(std::abs(map.eval(z) - z) < 1e-10);
  }
}

TEST_CASE("wobbly circle solve fits its boundary") {
  auto curve = BoundaryCurve::wobbly_circle(0.01, 3);
  auto map = solve_interior_map(curve, 256);
  CHECK(map.boundary_residual() < 1e-9);
  CHECK(map.negative_content() < 1e-10);
  CHECK(map.validated_radius() > 0.999);
  // Normalization: h'(0) real positive.
  CHECK(map.coeffs()[1].real() > 0.9);
  CHECK(std::abs(map.coeffs()[1].imag()) < 1e-10);
  // First-order shape: h(z) ~ z e^{eps z^3 / ...}; the z^4 mode carries eps/2.
  CHECK(std::abs(map.coeffs()[4]) == doctest::Approx(0.005).epsilon(0.05));
}

TEST_CASE("near-identity deviation bound at the frozen example") {
  CHECK(warschawski_rhs(0.01, 0.5) == doctest::Approx(0.0085824).epsilon(1e-4));
  auto curve = BoundaryCurve::wobbly_circle(0.01, 3);
  auto map = solve_interior_map(curve, 256);
  auto cert = certify_near_identity(map, 0.01, 0.5);
  CHECK(cert.bound == doctest::Approx(0.0085824).epsilon(1e-4));
  CHECK(cert.measured == doctest::Approx(6.25e-4).epsilon(0.25));
  CHECK(cert.pass);
}

TEST_CASE("deviation certificates across radii and roundness") {
  for (double eps : {0.005, 0.02}) {
    auto map = solve_interior_map(BoundaryCurve::wobbly_circle(eps, 3), 256);
    for (double r : {0.25, 0.5, 0.8}) {
      auto cert = certify_near_identity(map, eps, r);
      INFO("eps=", eps, " r=", r);
      CHECK(cert.pass);
      CHECK(cert.measured < 0.5 * cert.bound);  // bound is far from tight here
    }
  }
}

TEST_CASE("inverse map stays near the identity") {
  auto map = solve_interior_map(BoundaryCurve::wobbly_circle(0.01, 3), 256);
  auto cert = certify_inverse_near_identity(map, 0.01, 0.9, 256);
  CHECK(cert.bound == doctest::Approx(3.0 * 0.01 * std::log(100.0)).epsilon(1e-12));
  CHECK(cert.pass);
  CHECK_THROWS(certify_inverse_near_identity(map, 0.2, 0.5, 64));
}

TEST_CASE("inversion round trips through the map") {
  auto map = solve_interior_map(BoundaryCurve::wobbly_circle(0.02, 4), 256);
  for (double t : {0.1, 1.3, 2.9, 4.8}) {
    Complex z = std::polar(0.85, t);
    CHECK(std::abs(map.invert(map.eval(z)) - z) < 1e-11);
  }
}

TEST_CASE("correspondence matches the kernel oracle") {
  auto curve = BoundaryCurve::wobbly_circle(0.01, 3);
  auto map = solve_interior_map(curve, 256, 1e-13);
  auto ks = testsupport::ks_boundary_correspondence(curve, 256);

  CHECK(ks.total == doctest::Approx(kTwoPi).epsilon(1e-8));
  CHECK(ks.szego_center.real() > 0.0);
  CHECK(std::abs(ks.szego_center.imag()) < 1e-10 * ks.szego_center.real());

  // For this family the curve parameter is the polar angle, so the map-side
  // disk angle of gamma(t_j) is angle_preimage(t_j). Compare relative to
  // node 0; rotation normalization is checked separately above.
  double phi0 = map.angle_preimage(0.0);
  double worst = 0.0;
  for (int j = 0; j < 256; j += 3) {
    double t = kTwoPi * j / 256;
    double phi = map.angle_preimage(t) - phi0;
    if (phi < -1e-12) phi += kTwoPi;
    worst = std::max(worst, std::abs(phi - ks.rel_angle[std::size_t(j)]));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("boundary angle series inverts consistently") {
  auto map = solve_interior_map(BoundaryCurve::wobbly_circle(0.03, 5), 256);
  for (double phi : {0.2, 1.8, 3.5, 5.9}) {
    double theta = map.boundary_angle(phi);
    CHECK(map.angle_preimage(theta) == doctest::Approx(phi).epsilon(1e-9));
  }
}

TEST_CASE("ellipse solve round trips and certifies") {
  auto curve = BoundaryCurve::ellipse(1.2, 0.8);
  REQUIRE(curve.star_shaped());
  auto map = solve_interior_map(curve, 512);
  CHECK(map.boundary_residual() < 1e-8);
  for (double t : {0.4, 2.0, 3.7}) {
    Complex z = std::polar(0.6, t);
    CHECK(std::abs(map.invert(map.eval(z)) - z) < 1e-10);
  }
  double eps = curve.roundness();
  CHECK(eps == doctest::Approx(0.2).epsilon(1e-6));
  CHECK(certify_near_identity(map, eps, 0.5).pass);
}

TEST_CASE("exterior map of the unit circle is the identity") {
  auto ext = solve_exterior_map(BoundaryCurve::circle({0.0, 0.0}, 1.0), 64);
  CHECK(std::abs(ext.eval({2.0, 0.0}) - Complex(2.0, 0.0)) < 1e-9);
  CHECK(ext.log_abs({0.0, 3.0}) == doctest::Approx(std::log(3.0)).epsilon(1e-9));
}

TEST_CASE("exterior map of a wobbly circle behaves like a gauge") {
  auto curve = BoundaryCurve::wobbly_circle(0.01, 3);
  auto ext = solve_exterior_map(curve, 256);
  // Just outside the curve the gauge is near 0; far away it grows like log|z|.
  for (double t : {0.5, 2.1, 4.0}) {
    Complex z = curve.eval(t) * 1.001;
    CHECK(std::abs(ext.log_abs(z)) < 5e-3);
  }
  CHECK(ext.log_abs({10.0, 0.0}) == doctest::Approx(std::log(10.0)).epsilon(0.01));
}

TEST_CASE("coefficient tail bound is finite inside the extension radius") {
  auto map = solve_interior_map(BoundaryCurve::wobbly_circle(0.01, 3), 256);
  CHECK(map.extension_tail_bound(1.5) < 1e-8);
  CHECK(map.tail_ratio() < 0.67);
}
