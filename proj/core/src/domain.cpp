#include "wander/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wander::construct {

namespace {

Complex poly_at(const std::vector<Complex>& a, Complex w) {
  Complex acc{0.0, 0.0};
  for (std::size_t k = a.size(); k-- > 0;) acc = acc * w + a[k];
  return acc;
}

Complex poly_deriv_at(const std::vector<Complex>& a, Complex w) {
  Complex acc{0.0, 0.0};
  for (std::size_t k = a.size(); k-- > 1;) acc = acc * w + double(k) * a[k];
  return acc;
}

}  // namespace

Complex DomainModel::phi(Complex w) const { return poly_at(poly, w); }

Complex DomainModel::phi_deriv(Complex w) const { return poly_deriv_at(poly, w); }

Complex DomainModel::phi_inv(Complex z) const {
  // Near-identity Newton; the maps here have |a_1| ~ 1 and small higher modes.
  Complex w = poly.size() > 1 && std::abs(poly[1]) > 0.5 ? z / poly[1] : z;
  double scale = std::max(1.0, std::abs(z));
  for (int it = 0; it < 80; ++it) {
    Complex d = poly_deriv_at(poly, w);
    require(std::abs(d) > 1e-14, "domain map derivative vanished during inversion");
    Complex step = (poly_at(poly, w) - z) / d;
    w -= step;
    if (std::abs(step) < 1e-14 * scale) return w;
  }
  require(std::abs(poly_at(poly, w) - z) < 1e-10 * scale, "domain map inversion stalled");
  return w;
}

Complex DomainModel::phi_inv_deriv(Complex z) const {
  Complex w = phi_inv(z);
  Complex d = poly_deriv_at(poly, w);
  require(std::abs(d) > 0.0, "domain map derivative vanished");
  return 1.0 / d;
}

std::vector<Complex> DomainModel::inflated_loop(double rho, std::size_t samples) const {
  require(rho >= 0.0 && rho <= rho0 + 1e-12, "inflated radius beyond validated rim");
  std::vector<Complex> loop(samples);
  double r = 1.0 + rho;
  for (std::size_t i = 0; i < samples; ++i) {
    double t = kTwoPi * double(i) / double(samples);
    loop[i] = phi(Complex(r * std::cos(t), r * std::sin(t)));
  }
  return loop;
}

RegionPtr DomainModel::inflated_region(double rho, std::size_t samples) const {
  return std::make_shared<PolylineRegion>(inflated_loop(rho, samples));
}

DomainModel build_domain_model(const BoundaryCurve& curve, double rho0, std::size_t nodes) {
  require(rho0 > 0.0, "rho0 must be positive");
  require(curve.is_jordan(), "domain boundary must be Jordan");
  require(curve.star_shaped(), "domain boundary must be star shaped about 0");

  DomainModel d;
  d.curve = curve;
  d.rho0 = rho0;
  d.fit = conformal::solve_interior_map(curve, int(nodes));
  require(d.fit.boundary_residual() < 1e-7, "correspondence residual too large");

  // Cut the series where coefficients sink to the noise floor; everything
  // past the cut would be amplified by (1+rho0)^n into garbage on the rim.
  const std::vector<Complex>& a = d.fit.coeffs();
  double peak = 0.0;
  for (const Complex& c : a) peak = std::max(peak, std::abs(c));
  require(peak > 0.0, "degenerate map coefficients");
  double floor_mag = 1e-13 * peak;
  std::size_t keep = 0;
  for (std::size_t n = 0; n < a.size(); ++n)
    if (std::abs(a[n]) >= floor_mag) keep = n + 1;
  d.poly.assign(a.begin(), a.begin() + std::ptrdiff_t(keep));
  for (std::size_t n = keep; n < a.size(); ++n) d.truncation_defect += std::abs(a[n]);
  require(d.truncation_defect < 1e-8, "model polynomial drops visible boundary mass");

  double rim = 1.0 + rho0;
  int n = 4096;
  double sup_d = 0.0, inf_d = std::numeric_limits<double>::infinity();
  std::size_t rim_count = std::size_t(n);
  std::vector<Complex> rim_pts(rim_count);
  for (int i = 0; i < n; ++i) {
    double t = kTwoPi * double(i) / double(n);
    Complex w(rim * std::cos(t), rim * std::sin(t));
    double g = std::abs(d.phi_deriv(w));
    sup_d = std::max(sup_d, g);
    inf_d = std::min(inf_d, g);
    rim_pts[std::size_t(i)] = d.phi(w);
  }
  require(inf_d > 0.0, "domain map derivative vanishes on the rim");
  d.deriv_sup = sup_d;
  d.deriv_inf = inf_d;
  // |phi'| and 1/|phi'| are both log-subharmonic (phi' never vanishes), so the
  // rim sweep bounds them over the whole inflated disk.
  d.c_u = std::max({2.0, sup_d, 1.0 / inf_d});
  d.diam_u0 = diameter(rim_pts);
  d.a_u = d.diam_u0 + 1.0;
  return d;
}

double StageRadii::tau_k(int k) const {
  require(k >= 1 && k <= int(tau.size()), "tau index out of range");
  return tau[std::size_t(k - 1)];
}

double StageRadii::rho_k(int k) const {
  require(k >= 0 && k < int(rho.size()), "rho index out of range");
  return rho[std::size_t(k)];
}

double StageRadii::gamma_k(int k) const {
  require(k >= 1 && k < int(gamma.size()), "gamma index out of range");
  return gamma[std::size_t(k)];
}

double StageRadii::r_k(int k) const {
  require(k >= 0 && k < int(r.size()), "r index out of range");
  return r[std::size_t(k)];
}

StageRadii stage_radii(const sched::Schedule& s) {
  StageRadii out;
  out.alpha = s.alpha();
  int n = s.size();
  require(n >= 2, "schedule too short for stage radii");
  for (int k = 1; k <= n; ++k) out.tau.push_back(s.tau(k));
  // rho_0 = 1/loglog tau_1 sits in front of the schedule's own rho range.
  out.rho.push_back(1.0 / s.loglog_tau(1).convert_to<double>());
  for (int k = 1; k <= n - 1; ++k) out.rho.push_back(s.rho(k).convert_to<double>());
  out.gamma.push_back(0.0);
  for (int k = 1; k <= n - 2; ++k) out.gamma.push_back(s.gamma(k).convert_to<double>());
  for (int k = 0; k + 1 < int(out.rho.size()); ++k)
    out.r.push_back(1.0 + 0.5 * (out.rho[std::size_t(k)] + out.rho[std::size_t(k + 1)]));
  return out;
}

}  // namespace wander::construct
