#include "wander/curve.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

namespace wander {

namespace {

// Evaluates sum c_k w^{k+min_index} with w on the unit circle, Horner on the
// nonnegative part and on the reversed negative part.
Complex laurent_eval(const std::vector<Complex>& c, int min_index, Complex w) {
  Complex acc{0.0, 0.0};
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * w + *it;
  // acc now equals sum c_k w^k with k counted from 0; shift by min_index.
  return acc * std::pow(w, Complex(min_index, 0.0));
}

}  // namespace

BoundaryCurve BoundaryCurve::circle(Complex center, double radius) {
  return BoundaryCurve({center, Complex(radius, 0.0)}, 0, 4.0);
}

BoundaryCurve BoundaryCurve::wobbly_circle(double eps, int m) {
  require(m >= 2, "wobble frequency must be >= 2");
  int lo = -(m - 1), hi = m + 1;
  std::vector<Complex> c(std::size_t(hi - lo + 1), Complex{0.0, 0.0});
  c[std::size_t(0 - lo)] = {0.0, 0.0};
  c[std::size_t(1 - lo)] = {1.0, 0.0};
  c[std::size_t((m + 1) - lo)] = {eps / 2.0, 0.0};
  c[std::size_t(-(m - 1) - lo)] = {eps / 2.0, 0.0};
  return BoundaryCurve(std::move(c), lo, 1.5);
}

BoundaryCurve BoundaryCurve::ellipse(double a, double b) {
  require(a > 0 && b > 0, "ellipse semi-axes must be positive");
  return BoundaryCurve({Complex((a - b) / 2.0, 0.0), Complex{0.0, 0.0}, Complex((a + b) / 2.0, 0.0)},
                       -1, 1.5);
}

Complex BoundaryCurve::eval(double t) const {
  return laurent_eval(coeffs_, min_index_, std::polar(1.0, t));
}

Complex BoundaryCurve::deriv(double t) const {
  std::vector<Complex> d(coeffs_.size());
  for (std::size_t k = 0; k < coeffs_.size(); ++k)
    d[k] = coeffs_[k] * Complex(0.0, double(min_index_ + int(k)));
  return laurent_eval(d, min_index_, std::polar(1.0, t));
}

Complex BoundaryCurve::deriv2(double t) const {
  std::vector<Complex> d(coeffs_.size());
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    double n = double(min_index_ + int(k));
    d[k] = coeffs_[k] * (-n * n);
  }
  return laurent_eval(d, min_index_, std::polar(1.0, t));
}

std::vector<Complex> BoundaryCurve::samples(int n) const {
  std::vector<Complex> out(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) out[std::size_t(j)] = eval(kTwoPi * j / n);
  return out;
}

std::vector<Complex> BoundaryCurve::deriv_samples(int n) const {
  std::vector<Complex> out(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) out[std::size_t(j)] = deriv(kTwoPi * j / n);
  return out;
}

double BoundaryCurve::roundness(int n) const {
  double worst = 0.0;
  for (int j = 0; j < n; ++j) worst = std::max(worst, std::abs(std::abs(eval(kTwoPi * j / n)) - 1.0));
  return worst;
}

double BoundaryCurve::diameter(int n) const { return wander::diameter(samples(n)); }

namespace {

bool segments_cross(Complex a, Complex b, Complex c, Complex d) {
  auto orient = [](Complex p, Complex q, Complex r) {
    double v = (q.real() - p.real()) * (r.imag() - p.imag()) -
               (q.imag() - p.imag()) * (r.real() - p.real());
    return v > 0 ? 1 : (v < 0 ? -1 : 0);
  };
  int o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
  return o1 != o2 && o3 != o4;
}

}  // namespace

bool BoundaryCurve::is_jordan(int n) const {
  auto pts = samples(n);
  for (int j = 0; j < n; ++j)
    if (std::abs(deriv(kTwoPi * j / n)) < 1e-12) return false;
  for (int i = 0; i < n; ++i) {
    Complex a = pts[std::size_t(i)], b = pts[std::size_t((i + 1) % n)];
    for (int j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // adjacent around the seam
      Complex c = pts[std::size_t(j)], d = pts[std::size_t((j + 1) % n)];
      if (segments_cross(a, b, c, d)) return false;
    }
  }
  return true;
}

bool BoundaryCurve::star_shaped(int n) const {
  // arg gamma strictly increasing <=> Im(conj(gamma) * gamma') > 0, and the
  // total turn must be one revolution (a double wind is not star-shaped).
  double turn = 0.0;
  Complex prev = eval(0.0);
  for (int j = 0; j < n; ++j) {
    double t = kTwoPi * j / n;
    Complex g = eval(t);
    if (std::abs(g) < 1e-12) return false;
    if (std::imag(std::conj(g) * deriv(t)) <= 0.0) return false;
    if (j > 0) {
      turn += std::arg(g / prev);
      prev = g;
    }
  }
  turn += std::arg(eval(0.0) / prev);
  return std::abs(turn - kTwoPi) < 0.1;
}

double BoundaryCurve::polar_radius(double theta, double tol) const {
  // Signed angular offset of gamma(t) from the target ray; monotone in t for
  // star-shaped curves, so bracket on a coarse scan then bisect.
  auto offset = [&](double t) {
    Complex g = eval(t) * std::polar(1.0, -theta);
    return std::atan2(g.imag(), g.real());
  };
  const int scan = 128;
  double tlo = 0.0, flo = offset(0.0);
  if (std::abs(flo) < 1e-15) return std::abs(eval(0.0));
  bool found = false;
  double thi = 0.0;
  for (int j = 1; j <= scan && !found; ++j) {
    double t = kTwoPi * j / scan;
    double f = offset(t);
    if (flo < 0.0 && f >= 0.0 && f - flo < kPi) {
      thi = t;
      found = true;
    } else {
      tlo = t;
      flo = f;
    }
  }
  require(found, "polar ray bracket failed; curve not star-shaped about 0");
  for (int it = 0; it < 200; ++it) {
    double tm = 0.5 * (tlo + thi);
    double f = offset(tm);
    if (std::abs(f) < tol || thi - tlo < tol) return std::abs(eval(tm));
    if (f < 0.0)
      tlo = tm;
    else
      thi = tm;
  }
  return std::abs(eval(0.5 * (tlo + thi)));
}

std::string BoundaryCurve::to_json() const {
  nlohmann::ordered_json j;
  auto& arr = j["coefficients"] = nlohmann::ordered_json::array();
  for (const auto& c : coeffs_) arr.push_back({c.real(), c.imag()});
  j["min_index"] = min_index_;
  j["extension_radius"] = extension_radius_;
  return j.dump(2);
}

BoundaryCurve BoundaryCurve::from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  require(j.contains("coefficients"), "curve json needs 'coefficients'");
  std::vector<Complex> c;
  for (const auto& e : j["coefficients"]) c.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
  int lo = j.value("min_index", 0);
  double ext = j.value("extension_radius", 1.0);
  return BoundaryCurve(std::move(c), lo, ext);
}

BoundaryCurve BoundaryCurve::from_samples(const std::vector<Complex>& pts, double rel_tol,
                                          double extension_radius) {
  int n = int(pts.size());
  require(n >= 8, "need at least 8 samples for a Fourier fit");
  std::vector<Complex> freq(pts.size());
  {
    fftw_plan plan = fftw_plan_dft_1d(
        n, reinterpret_cast<fftw_complex*>(const_cast<Complex*>(pts.data())),
        reinterpret_cast<fftw_complex*>(freq.data()), FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
  }
  for (auto& f : freq) f /= double(n);
  // Bin k holds index k for k < n/2 and k - n beyond; keep the band where the
  // spectrum is above the noise floor.
  auto coeff_at = [&](int idx) { return freq[std::size_t(((idx % n) + n) % n)]; };
  double peak = 0.0;
  for (const auto& f : freq) peak = std::max(peak, std::abs(f));
  require(peak > 0.0, "all-zero sample set");
  int lo = 0, hi = 0;
  for (int idx = -n / 2 + 1; idx <= n / 2 - 1; ++idx) {
    if (std::abs(coeff_at(idx)) > rel_tol * peak) {
      lo = std::min(lo, idx);
      hi = std::max(hi, idx);
    }
  }
  std::vector<Complex> kept;
  for (int idx = lo; idx <= hi; ++idx) kept.push_back(coeff_at(idx));
  return BoundaryCurve(std::move(kept), lo, extension_radius);
}

}  // namespace wander
