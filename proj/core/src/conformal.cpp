#include "wander/conformal.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>

namespace wander::conformal {

namespace {

std::vector<Complex> fft(const std::vector<Complex>& in, int sign) {
  std::vector<Complex> out(in.size());
  fftw_plan plan = fftw_plan_dft_1d(int(in.size()),
                                    reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in.data())),
                                    reinterpret_cast<fftw_complex*>(out.data()), sign, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  return out;
}

// Conjugate periodic function: multiplies mode n by -i sgn(n), killing the
// mean and the unpaired Nyquist mode.
std::vector<double> conjugate_series(const std::vector<double>& v) {
  int n = int(v.size());
  std::vector<Complex> in(v.begin(), v.end());
  auto modes = fft(in, FFTW_FORWARD);
  for (auto& m : modes) m /= double(n);
  std::vector<Complex> twisted(std::size_t(n), Complex{0.0, 0.0});
  for (int k = 1; k < n / 2; ++k) {
    twisted[std::size_t(k)] = Complex(0.0, -1.0) * modes[std::size_t(k)];
    twisted[std::size_t(n - k)] = Complex(0.0, 1.0) * modes[std::size_t(n - k)];
  }
  auto back = fft(twisted, FFTW_BACKWARD);
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) out[std::size_t(j)] = back[std::size_t(j)].real();
  return out;
}

struct SolveAtResult {
  std::vector<double> theta;    // theta(phi_j)
  std::vector<Complex> bound;   // boundary values R(theta) e^{i theta}
  int iterations = 0;
};

SolveAtResult correspondence_iteration(const BoundaryCurve& curve, int n, double tol,
                                       int max_iter) {
  SolveAtResult res;
  res.theta.resize(std::size_t(n));
  for (int j = 0; j < n; ++j) res.theta[std::size_t(j)] = kTwoPi * j / n;
  std::vector<double> logr(static_cast<std::size_t>(n));
  for (int it = 0; it < max_iter; ++it) {
    for (int j = 0; j < n; ++j)
      logr[std::size_t(j)] = std::log(curve.polar_radius(res.theta[std::size_t(j)]));
    auto conj = conjugate_series(logr);
    double delta = 0.0;
    for (int j = 0; j < n; ++j) {
      double next = kTwoPi * j / n + conj[std::size_t(j)];
      delta = std::max(delta, std::abs(next - res.theta[std::size_t(j)]));
      res.theta[std::size_t(j)] = next;
    }
    res.iterations = it + 1;
    if (delta < tol) break;
  }
  res.bound.resize(std::size_t(n));
  for (int j = 0; j < n; ++j) {
    double th = res.theta[std::size_t(j)];
    res.bound[std::size_t(j)] = std::polar(curve.polar_radius(th), th);
  }
  return res;
}

Complex poly_eval(const std::vector<Complex>& c, Complex z) {
  Complex acc{0.0, 0.0};
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

}  // namespace

Complex ConformalMap::eval(Complex z) const { return poly_eval(coeffs_, z); }

Complex ConformalMap::deriv(Complex z) const {
  Complex acc{0.0, 0.0};
  for (std::size_t k = coeffs_.size(); k-- > 1;) acc = acc * z + double(k) * coeffs_[k];
  return acc;
}

Complex ConformalMap::deriv2(Complex z) const {
  Complex acc{0.0, 0.0};
  for (std::size_t k = coeffs_.size(); k-- > 2;) acc = acc * z + double(k * (k - 1)) * coeffs_[k];
  return acc;
}

Complex ConformalMap::invert(Complex w, double tol, int max_iter) const {
  Complex z = w;
  double scale = std::max(1.0, std::abs(w));
  for (int it = 0; it < max_iter; ++it) {
    Complex f = eval(z) - w;
    if (std::abs(f) < tol * scale) return z;
    Complex d = deriv(z);
    require(std::abs(d) > 1e-300, "map derivative vanished during inversion");
    z -= f / d;
  }
  throw std::runtime_error("map inversion did not converge");
}

double ConformalMap::validated_radius() const {
  return std::clamp(1.0 - 2.0 * std::sqrt(boundary_residual_), 0.0, 1.0);
}

double ConformalMap::extension_tail_bound(double radius) const {
  double qr = tail_ratio_ * radius;
  if (qr >= 1.0) return std::numeric_limits<double>::infinity();
  int deg = int(coeffs_.size()) - 1;
  return tail_scale_ * std::pow(qr, deg + 1) / (1.0 - qr);
}

double ConformalMap::boundary_angle(double phi) const {
  // theta_modes_ holds modes of the real deviation theta(phi) - phi, so the
  // negative half mirrors the positive one: sum = c_0 + 2 Re sum_{k>0} c_k w^k
  // plus the lone Nyquist term.
  Complex w = std::polar(1.0, phi);
  int n = int(theta_modes_.size());
  Complex pos{0.0, 0.0};
  for (int k = n / 2 - 1; k >= 1; --k) pos = (pos + theta_modes_[std::size_t(k)]) * w;
  double acc = theta_modes_[0].real() + 2.0 * pos.real();
  acc += (theta_modes_[std::size_t(n / 2)] * std::pow(w, n / 2)).real();
  return phi + acc;
}

double ConformalMap::angle_preimage(double theta, double tol) const {
  double phi = theta;
  for (int it = 0; it < 100; ++it) {
    double f = boundary_angle(phi) - theta;
    if (std::abs(f) < tol) return phi;
    double h = 1e-6;
    double d = (boundary_angle(phi + h) - boundary_angle(phi - h)) / (2.0 * h);
    require(std::abs(d) > 1e-8, "degenerate boundary correspondence");
    phi -= f / d;
  }
  throw std::runtime_error("angle preimage solve did not converge");
}

ConformalMap solve_interior_map(const BoundaryCurve& curve, int nodes, double tol, int max_iter) {
  require(nodes >= 32 && (nodes & (nodes - 1)) == 0, "node count must be a power of two >= 32");
  require(curve.star_shaped(), "map solver needs a star-shaped curve about 0");

  auto coarse = correspondence_iteration(curve, nodes, tol, max_iter);
  auto fine = correspondence_iteration(curve, 2 * nodes, tol, max_iter);
  require(fine.iterations < max_iter, "correspondence iteration hit the iteration cap");

  int n = 2 * nodes;
  auto modes = fft(fine.bound, FFTW_FORWARD);
  for (auto& m : modes) m /= double(n);

  ConformalMap map;
  map.nodes_ = n;
  map.coeffs_.assign(modes.begin(), modes.begin() + n / 2);
  double neg = 0.0;
  for (int k = n / 2; k < n; ++k) neg = std::max(neg, std::abs(modes[std::size_t(k)]));
  map.negative_content_ = neg;

  // theta(phi) - phi as a trig series, for correspondence queries.
  {
    std::vector<Complex> dev(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
      dev[std::size_t(j)] = Complex(fine.theta[std::size_t(j)] - kTwoPi * j / n, 0.0);
    map.theta_modes_ = fft(dev, FFTW_FORWARD);
    for (auto& m : map.theta_modes_) m /= double(n);
  }

  // Ray-distance residual on a 4x oversampled angle grid; the coarse/fine
  // disagreement rides along in the same max.
  double resid = 0.0;
  for (int j = 0; j < 4 * n; ++j) {
    Complex p = map.eval(std::polar(1.0, kTwoPi * j / (4 * n)));
    double th = std::atan2(p.imag(), p.real());
    resid = std::max(resid, std::abs(std::abs(p) - curve.polar_radius(th)));
  }
  for (int j = 0; j < nodes; ++j)
    resid = std::max(resid, std::abs(poly_eval(map.coeffs_, std::polar(1.0, kTwoPi * j / nodes)) -
                                     coarse.bound[std::size_t(j)]));
  map.boundary_residual_ = resid;

  // Geometric tail fit over the last three quarters of the decaying range.
  {
    std::vector<std::pair<double, double>> pts;  // (n, log|a_n|)
    for (int k = 2; k < n / 2; ++k) {
      double a = std::abs(map.coeffs_[std::size_t(k)]);
      if (a > 1e-15) pts.emplace_back(double(k), std::log(a));
    }
    if (pts.size() >= 4) {
      std::size_t from = pts.size() / 4;
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      double m = double(pts.size() - from);
      for (std::size_t i = from; i < pts.size(); ++i) {
        sx += pts[i].first;
        sy += pts[i].second;
        sxx += pts[i].first * pts[i].first;
        sxy += pts[i].first * pts[i].second;
      }
      double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
      double icept = (sy - slope * sx) / m;
      map.tail_ratio_ = std::exp(slope);
      map.tail_scale_ = std::exp(icept);
    } else {
      // Spectrum collapsed to a handful of modes; decay is effectively
      // immediate.
      map.tail_ratio_ = 1e-8;
      map.tail_scale_ = 1e-15;
    }
  }
  return map;
}

double warschawski_rhs(double eps, double r) {
  require(eps > 0 && eps < 1, "roundness must lie in (0,1)");
  require(r > 0 && r < 1, "radius must lie in (0,1)");
  return r * eps * std::exp(eps) * (1.0 + (2.0 / kPi) * std::log((1.0 + r) / (1.0 - r)));
}

BoundCert certify_near_identity(const ConformalMap& map, double eps, double r, int samples) {
  BoundCert c;
  c.eps = eps;
  c.r = r;
  c.bound = warschawski_rhs(eps, r);
  double worst = 0.0;
  for (int j = 0; j < samples; ++j) {
    Complex z = std::polar(r, kTwoPi * j / samples);
    worst = std::max(worst, std::abs(map.eval(z) - z));
  }
  c.measured = worst;
  c.pass = c.measured <= c.bound;
  return c;
}

BoundCert certify_inverse_near_identity(const ConformalMap& map, double eps, double r,
                                        int samples) {
  require(eps < std::exp(-2.0), "inverse bound needs eps < e^{-2}");
  BoundCert c;
  c.eps = eps;
  c.r = r;
  c.bound = 3.0 * eps * std::log(1.0 / eps);
  double worst = 0.0;
  for (int j = 0; j < samples; ++j) {
    Complex w = std::polar(r, kTwoPi * j / samples);
    worst = std::max(worst, std::abs(map.invert(w) - w));
  }
  c.measured = worst;
  c.pass = c.measured <= c.bound;
  return c;
}

Complex ExteriorMap::eval(Complex z) const {
  require(std::abs(z) > 1e-12, "exterior map evaluated at 0");
  return 1.0 / inner_.invert(1.0 / z);
}

double ExteriorMap::log_abs(Complex z) const { return std::log(std::abs(eval(z))); }

ExteriorMap solve_exterior_map(const BoundaryCurve& curve, int nodes, double tol) {
  // 1/gamma reversed is a Jordan curve about 0 whose interior is the
  // inversion of the exterior; its interior map carries all we need.
  int n = 4096;
  std::vector<Complex> inverted(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    Complex g = curve.eval(kTwoPi * (n - j) / n);
    require(std::abs(g) > 1e-12, "curve passes through 0; cannot invert");
    inverted[std::size_t(j)] = 1.0 / g;
  }
  auto inv_curve = BoundaryCurve::from_samples(inverted, 1e-13, curve.extension_radius());
  return ExteriorMap(solve_interior_map(inv_curve, nodes, tol));
}

}  // namespace wander::conformal
