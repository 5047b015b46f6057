#include "wander/dbar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "wander/parallel.hpp"

namespace wander::dbar {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double quintic_value(double t) { return 1.0 - t * t * t * (10.0 - 15.0 * t + 6.0 * t * t); }
double quintic_slope(double t) { return -30.0 * t * t * (1.0 - t) * (1.0 - t); }

double bump_s(double x) { return x <= 0.0 ? 0.0 : std::exp(-1.0 / x); }
double bump_ds(double x) { return x <= 0.0 ? 0.0 : std::exp(-1.0 / x) / (x * x); }

double bump_value(double t) {
  double a = bump_s(1.0 - t), b = bump_s(t);
  return a / (a + b);
}
double bump_slope(double t) {
  double a = bump_s(1.0 - t), b = bump_s(t);
  double da = -bump_ds(1.0 - t), db = bump_ds(t);
  double s = a + b;
  return (da * b - a * db) / (s * s);
}

double logaddexp(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

}  // namespace

CutOff::CutOff(std::vector<RegionPtr> regions, double eps, Profile profile)
    : regions_(std::move(regions)), eps_(eps), profile_(profile) {
  require(!regions_.empty(), "cutoff needs at least one region");
  require(eps_ > 0.0, "cutoff needs positive eps");
  separation_ = regions_.size() < 2 ? kInf : separation(regions_);
  if (separation_ < 4.0 * eps_) {
    std::ostringstream os;
    os << "cutoff separation " << separation_ << " below 4 eps = " << 4.0 * eps_;
    throw std::runtime_error(os.str());
  }
  for (int j = 0; j <= 4096; ++j) {
    double t = double(j) / 4096.0;
    grad_const_ = std::max(grad_const_, std::abs(profile_slope(t)));
  }
}

double CutOff::profile_value(double t) const {
  return profile_ == Profile::quintic ? quintic_value(t) : bump_value(t);
}
double CutOff::profile_slope(double t) const {
  return profile_ == Profile::quintic ? quintic_slope(t) : bump_slope(t);
}

double CutOff::dist(Complex z) const {
  double d = kInf;
  for (const auto& r : regions_) d = std::min(d, r->dist(z));
  return d;
}

double CutOff::chi(Complex z) const {
  double d = dist(z);
  if (d <= 0.0) return 1.0;
  if (d >= eps_) return 0.0;
  return profile_value(d / eps_);
}

Complex CutOff::dbar_chi(Complex z) const {
  double d = kInf;
  const Region* active = nullptr;
  for (const auto& r : regions_) {
    double dr = r->dist(z);
    if (dr < d) {
      d = dr;
      active = r.get();
    }
  }
  if (d <= 0.0 || d >= eps_) return {0.0, 0.0};
  // dbar of |z - nearest| is dir/2 with dir the unit vector off the set
  return profile_slope(d / eps_) / eps_ * active->dist_dir(z) * 0.5;
}

BoundingBox CutOff::band_bbox() const {
  BoundingBox out = regions_[0]->bbox().padded(eps_);
  for (const auto& r : regions_) {
    BoundingBox b = r->bbox().padded(eps_);
    out.absorb(b.lo);
    out.absorb(b.hi);
  }
  return out;
}

ComplexGrid make_band_grid(const CutOff& chi, int cells_across) {
  require(cells_across >= 8, "band grid must resolve the collar with >= 8 cells");
  double h = chi.eps() / cells_across;
  BoundingBox b = chi.band_bbox().padded(2.0 * h);
  return make_grid_over_box(b.lo, b.hi, h);
}

ComplexGrid sample_source(const DbarProblem& p, int threads) {
  ComplexGrid g = p.band;
  g.fill(
      [&p](Complex z) {
        Complex d = p.chi.dbar_chi(z);
        if (d == Complex{0.0, 0.0}) return Complex{0.0, 0.0};
        return d * p.h(z);
      },
      threads);
  return g;
}

namespace {

// log of sum of |g|^2 e^{-u} over cells, accumulated per row and combined in
// row order so the result is independent of the thread count.
double band_log_mass(const ComplexGrid& g, const subharm::Weight& u, int threads) {
  int ny = g.ny(), nx = g.nx();
  std::vector<double> row_max(std::size_t(ny), -kInf);
  std::vector<double> row_sum(std::size_t(ny), 0.0);
  util::parallel_chunks(std::size_t(ny), threads, [&](std::size_t lo, std::size_t hi) {
    std::vector<double> terms;
    for (std::size_t j = lo; j < hi; ++j) {
      terms.clear();
      for (int i = 0; i < nx; ++i) {
        Complex gi = g.at(i, int(j));
        if (gi == Complex{0.0, 0.0}) continue;
        require(finite(gi), "model map not finite on the band");
        Complex z = g.point(i, int(j));
        for (const auto& well : u.punctures())
          require(!well.disk.contains_closed(z), "weight has a well on the transition band");
        double uv = u.value(z);
        require(std::isfinite(uv), "weight undefined or infinite on the band");
        terms.push_back(2.0 * std::log(std::abs(gi)) - uv);
      }
      if (terms.empty()) continue;
      double m = *std::max_element(terms.begin(), terms.end());
      double s = 0.0;
      for (double t : terms) s += std::exp(t - m);
      row_max[j] = m;
      row_sum[j] = s;
    }
  });
  double gmax = -kInf;
  for (double m : row_max) gmax = std::max(gmax, m);
  if (gmax == -kInf) return -kInf;
  double total = 0.0;
  for (int j = 0; j < ny; ++j)
    if (row_max[std::size_t(j)] != -kInf)
      total += row_sum[std::size_t(j)] * std::exp(row_max[std::size_t(j)] - gmax);
  return gmax + std::log(total);
}

}  // namespace

IntegralReport hormander_integral(const DbarProblem& p, int threads) {
  ComplexGrid fine = sample_source(p, threads);
  double h = fine.spacing();
  double log_fine = band_log_mass(fine, p.u, threads);

  // coarse pass over the same box for a refinement estimate
  BoundingBox b{fine.point(0, 0), fine.point(fine.nx() - 1, fine.ny() - 1)};
  ComplexGrid coarse = make_grid_over_box(b.lo, b.hi, 2.0 * h);
  DbarProblem pc{p.h, p.chi, p.u, coarse};
  ComplexGrid cg = sample_source(pc, threads);
  double log_coarse = band_log_mass(cg, p.u, threads);

  IntegralReport rep;
  std::size_t cells = 0;
  for (const auto& v : fine.data())
    if (v != Complex{0.0, 0.0}) ++cells;
  rep.cells = cells;
  double log_i2 = std::log(0.5) + 2.0 * std::log(h) + log_fine;
  rep.log_i = 0.5 * log_i2;
  rep.i = std::exp(rep.log_i);
  double log_i2_coarse = std::log(0.5) + 2.0 * std::log(2.0 * h) + log_coarse;
  rep.rel_refinement = log_fine == -kInf && log_coarse == -kInf
                           ? 0.0
                           : std::abs(1.0 - std::exp(0.5 * (log_i2_coarse - log_i2)));
  return rep;
}

Complex cell_cauchy_integral(Complex z, Complex center, double h) {
  // Stokes form of the area integral of 1/(z-w): per edge closed form, plus
  // the residue term when z is enclosed; caller keeps z off the cell boundary.
  Complex half{h / 2.0, h / 2.0};
  Complex c0 = center - half;
  Complex corners[4] = {c0, c0 + Complex(h, 0.0), c0 + Complex(h, h), c0 + Complex(0.0, h)};
  Complex s{0.0, 0.0};
  for (int e = 0; e < 4; ++e) {
    Complex p = corners[e], q = corners[(e + 1) % 4] - p;
    Complex a = z - p;
    Complex l = std::log(a / (a - q));  // principal branch; edge subtends < pi
    s += std::conj(p) * l + std::conj(q) * ((a / q) * l - 1.0);
  }
  Complex d = z - center;
  bool inside = std::max(std::abs(d.real()), std::abs(d.imag())) < 0.5 * h;
  return s / Complex(0.0, 2.0) + (inside ? kPi * std::conj(z) : Complex{0.0, 0.0});
}

DbarSolution solve_dbar_cauchy(const ComplexGrid& g, double log_i) {
  DbarSolution sol;
  sol.h_ = g.spacing();
  sol.log_i_ = log_i;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      Complex v = g.at(i, j);
      if (v == Complex{0.0, 0.0}) continue;
      require(finite(v), "source not finite on its support");
      sol.centers_.push_back(g.point(i, j));
      sol.g_.push_back(v);
    }
  sol.residual_ = measure_residual(sol, g);
  return sol;
}

Complex DbarSolution::beta(Complex z) const {
  double h = h_;
  for (int attempt = 0; attempt < 2; ++attempt) {
    double cheb = kInf;
    for (const auto& c : centers_) {
      Complex d = z - c;
      cheb = std::min(cheb, std::max(std::abs(d.real()), std::abs(d.imag())));
    }
    // on a gridline of the support lattice the edge formula hits its branch cut
    bool on_edge = cheb >= 0.5 * h * (1.0 - 1e-9) && cheb < 0.5 * h * (1.0 + 1e-9);
    if (on_edge && attempt == 0) {
      z += h * Complex(2e-9, 3e-9);  // step off the cell boundary
      continue;
    }
    // exact integral for the near field; the midpoint kernel is harmonic away
    // from its pole, so its far-field error is already high order
    double near_r = 3.5 * h;
    Complex acc{0.0, 0.0};
    for (std::size_t k = 0; k < centers_.size(); ++k) {
      Complex d = z - centers_[k];
      if (std::max(std::abs(d.real()), std::abs(d.imag())) <= near_r)
        acc += g_[k] * cell_cauchy_integral(z, centers_[k], h);
      else
        acc += g_[k] * (h * h) / d;
    }
    acc /= kPi;
    if (!poly_.empty()) {
      Complex p{0.0, 0.0};
      for (std::size_t k = poly_.size(); k-- > 0;) p = p * z + poly_[k];
      acc -= p;
    }
    return acc;
  }
  return {0.0, 0.0};  // unreachable
}

namespace {

Complex fd_dbar(const std::function<Complex(Complex)>& f, Complex z, double h) {
  Complex dx = (f(z + Complex(h, 0)) - f(z - Complex(h, 0))) / (2.0 * h);
  Complex dy = (f(z + Complex(0, h)) - f(z - Complex(0, h))) / (2.0 * h);
  return 0.5 * (dx + Complex(0.0, 1.0) * dy);
}

}  // namespace

ResidualReport measure_residual(const DbarSolution& sol, const ComplexGrid& g,
                                int max_band_samples, int off_samples) {
  ResidualReport rep;
  std::vector<Complex> centers;
  std::vector<Complex> values;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i)
      if (g.at(i, j) != Complex{0.0, 0.0}) {
        centers.push_back(g.point(i, j));
        values.push_back(g.at(i, j));
      }
  for (const auto& v : values) rep.g_scale = std::max(rep.g_scale, std::abs(v));
  if (centers.empty()) return rep;

  auto beta = [&sol](Complex z) { return sol.beta(z); };
  // probe step far below the cell scale: evaluator noise near a pole scales as
  // step^2 over spacing^2, roundoff as eps over step; this sits near the cross
  double hfd = g.spacing() / 4096.0;
  std::size_t stride = std::max<std::size_t>(1, centers.size() / std::size_t(max_band_samples));
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < centers.size(); k += stride) {
    Complex r = fd_dbar(beta, centers[k], hfd) - values[k];
    num += std::abs(r);
    den += std::abs(values[k]);
    ++rep.band_samples;
  }
  rep.band_rel_avg = den == 0.0 ? 0.0 : num / den;

  BoundingBox box{centers[0], centers[0]};
  for (const auto& c : centers) box.absorb(c);
  Complex mid = 0.5 * (box.lo + box.hi);
  double rad = 0.75 * std::abs(box.hi - box.lo) + 1.0;
  for (int k = 0; k < off_samples; ++k) {
    Complex z = mid + std::polar(rad, kTwoPi * k / off_samples);
    rep.off_band_rel_max =
        std::max(rep.off_band_rel_max, std::abs(fd_dbar(beta, z, hfd)) / rep.g_scale);
    ++rep.off_samples;
  }
  return rep;
}

namespace {

struct PolarQuad {
  std::vector<Complex> z;
  std::vector<double> w;  // density times jacobian times cell measure
};

PolarQuad polar_weighted_grid(const subharm::Weight& u, double radius, int nr, int nt) {
  require(radius > 0.0 && nr > 0 && nt > 0, "bad projection quadrature parameters");
  PolarQuad q;
  double dr = radius / nr, dt = kTwoPi / nt;
  q.z.reserve(std::size_t(nr) * nt);
  q.w.reserve(std::size_t(nr) * nt);
  for (int i = 0; i < nr; ++i) {
    double r = (i + 0.5) * dr;
    for (int j = 0; j < nt; ++j) {
      Complex z = std::polar(r, (j + 0.5) * dt);
      double uv = u.value(z);
      double w = std::exp(-uv) / std::pow(1.0 + std::norm(z), 2.0) * r * dr * dt;
      require(std::isfinite(w), "projection weight not integrable at a quadrature node");
      q.z.push_back(z);
      q.w.push_back(w);
    }
  }
  return q;
}

// normal equations in the scaled monomial basis (z/R)^j
std::vector<Complex> projection_coeffs(const std::vector<Complex>& fz, const PolarQuad& q,
                                       int degree, double radius) {
  int n = degree + 1;
  std::size_t un = std::size_t(n);
  std::vector<Complex> gram(un * un, Complex{0.0, 0.0});
  std::vector<Complex> rhs(un, Complex{0.0, 0.0});
  std::vector<Complex> pw(un);
  for (std::size_t k = 0; k < q.z.size(); ++k) {
    Complex zb = q.z[k] / radius;
    pw[0] = {1.0, 0.0};
    for (int j = 1; j < n; ++j) pw[std::size_t(j)] = pw[std::size_t(j - 1)] * zb;
    for (int a = 0; a < n; ++a) {
      Complex ca = std::conj(pw[std::size_t(a)]) * q.w[k];
      rhs[std::size_t(a)] += ca * fz[k];
      for (int b = 0; b < n; ++b) gram[std::size_t(a) * n + b] += ca * pw[std::size_t(b)];
    }
  }
  // Gauss elimination with partial pivoting; smallness of the pivot relative
  // to the column scale is the conditioning signal.
  std::vector<Complex> m = gram;
  std::vector<Complex> x = rhs;
  double scale = 0.0;
  for (const auto& v : m) scale = std::max(scale, std::abs(v));
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(m[std::size_t(r) * n + col]) > std::abs(m[std::size_t(piv) * n + col])) piv = r;
    if (piv != col) {
      for (int c = 0; c < n; ++c) std::swap(m[std::size_t(col) * n + c], m[std::size_t(piv) * n + c]);
      std::swap(x[std::size_t(col)], x[std::size_t(piv)]);
    }
    Complex p = m[std::size_t(col) * n + col];
    require(std::abs(p) > 1e-13 * scale,
            "ill-conditioned normal equations; use the orthogonalized gauge fitter");
    for (int r = col + 1; r < n; ++r) {
      Complex f = m[std::size_t(r) * n + col] / p;
      if (f == Complex{0.0, 0.0}) continue;
      for (int c = col; c < n; ++c) m[std::size_t(r) * n + c] -= f * m[std::size_t(col) * n + c];
      x[std::size_t(r)] -= f * x[std::size_t(col)];
    }
  }
  for (int r = n - 1; r >= 0; --r) {
    Complex s = x[std::size_t(r)];
    for (int c = r + 1; c < n; ++c) s -= m[std::size_t(r) * n + c] * x[std::size_t(c)];
    x[std::size_t(r)] = s / m[std::size_t(r) * n + r];
  }
  // orthogonality of the residual against the basis is the normal equation
  // defect; demand it small before trusting the projection
  double defect = 0.0, rhs_norm = 0.0;
  for (int a = 0; a < n; ++a) {
    Complex d = rhs[std::size_t(a)];
    for (int b = 0; b < n; ++b) d -= gram[std::size_t(a) * n + b] * x[std::size_t(b)];
    defect = std::max(defect, std::abs(d));
    rhs_norm = std::max(rhs_norm, std::abs(rhs[std::size_t(a)]));
  }
  require(defect <= 1e-8 * std::max(rhs_norm, 1e-300),
          "ill-conditioned normal equations; use the orthogonalized gauge fitter");
  // unscale to plain monomial coefficients
  std::vector<Complex> out(un);
  double rp = 1.0;
  for (int j = 0; j < n; ++j) {
    out[std::size_t(j)] = x[std::size_t(j)] / rp;
    rp *= radius;
  }
  return out;
}

}  // namespace

std::vector<Complex> weighted_poly_projection(const std::function<Complex(Complex)>& f,
                                              const subharm::Weight& u, int degree, double radius,
                                              int nr, int nt) {
  require(degree >= 0, "projection degree must be nonnegative");
  PolarQuad q = polar_weighted_grid(u, radius, nr, nt);
  std::vector<Complex> fz(q.z.size());
  for (std::size_t k = 0; k < q.z.size(); ++k) fz[k] = f(q.z[k]);
  return projection_coeffs(fz, q, degree, radius);
}

DbarSolution project_minimal(const DbarSolution& sol, const subharm::Weight& u, int degree,
                             double radius) {
  auto beta = [&sol](Complex z) { return sol.beta(z); };
  std::vector<Complex> c = weighted_poly_projection(beta, u, degree, radius);
  DbarSolution out = sol;
  if (out.poly_.size() < c.size()) out.poly_.resize(c.size(), Complex{0.0, 0.0});
  for (std::size_t k = 0; k < c.size(); ++k) out.poly_[k] += c[k];
  std::ostringstream os;
  os << "minimal-projected(" << degree << ")";
  out.kind_ = os.str();
  return out;
}

InequalityReport hormander_inequality(const std::function<Complex(Complex)>& beta,
                                      const subharm::Weight& u, double log_i, double radius,
                                      int nr, int nt) {
  PolarQuad q = polar_weighted_grid(u, radius, nr, nt);
  InequalityReport rep;
  for (std::size_t k = 0; k < q.z.size(); ++k) rep.lhs += std::norm(beta(q.z[k])) * q.w[k];
  rep.rhs = std::exp(2.0 * log_i);
  rep.ratio = rep.lhs / rep.rhs;
  rep.holds = rep.lhs <= rep.rhs;
  return rep;
}

Assembly assemble(CutOff chi, std::function<Complex(Complex)> h, DbarSolution sol,
                  subharm::Weight u) {
  return Assembly{std::move(chi), std::move(h), std::move(sol), std::move(u)};
}

nlohmann::ordered_json BoundReport::to_json() const {
  return {{"name", name},
          {"z", {z.real(), z.imag()}},
          {"r", r},
          {"lhs", lhs},
          {"log_rhs", log_rhs},
          {"rhs", rhs},
          {"rhs_overflow", rhs_overflow},
          {"pass", pass}};
}

namespace {

BoundReport finish_report(std::string name, Complex z, double r, double lhs, double log_rhs) {
  BoundReport rep;
  rep.name = std::move(name);
  rep.z = z;
  rep.r = r;
  rep.lhs = lhs;
  rep.log_rhs = log_rhs;
  rep.rhs = std::exp(log_rhs);
  rep.rhs_overflow = !std::isfinite(rep.rhs);
  // compare in log space so an astronomically safe bound still reads as pass
  rep.pass = lhs == 0.0 || std::log(lhs) <= log_rhs;
  return rep;
}

}  // namespace

BoundReport certify_error_bound(const Assembly& a, Complex z, double r) {
  require(r > 0.0 && r <= std::max(1.0, std::abs(z) / 3.0) + 1e-12,
          "error bound radius out of range");
  for (int k = 0; k < 128; ++k)
    require(a.chi.chi(z + std::polar(r, kTwoPi * k / 128)) == 1.0,
            "cutoff not identically one on the certificate disk");
  for (int k = 0; k < 64; ++k)
    require(a.chi.chi(z + std::polar(0.5 * r, kTwoPi * k / 64)) == 1.0,
            "cutoff not identically one on the certificate disk");
  require(a.chi.chi(z) == 1.0, "cutoff not identically one on the certificate disk");

  auto uval = [&a](Complex w) { return a.u.value(w); };
  double umax = subharm::max_on_circle(uval, z, r).value;
  double log_rhs =
      std::log(2.0 + 2.0 * std::norm(z)) - std::log(r) + a.sol.log_i() + 0.5 * umax;
  double lhs = std::abs(a.f(z) - a.h(z));
  return finish_report("error_bound", z, r, lhs, log_rhs);
}

BoundReport certify_growth_bound(const Assembly& a, Complex z) {
  double model_max = std::abs(a.model(z));
  for (int i = 1; i <= 12; ++i)
    for (int k = 0; k < 96; ++k)
      model_max =
          std::max(model_max, std::abs(a.model(z + std::polar(i / 12.0, kTwoPi * k / 96))));
  auto uval = [&a](Complex w) { return a.u.value(w); };
  double umax = subharm::max_on_circle(uval, z, 1.0).value;
  double log_tail =
      std::log(2.0 + 2.0 * std::norm(z)) - 0.5 * std::log(kPi) + a.sol.log_i() + 0.5 * umax;
  double log_rhs = logaddexp(model_max > 0.0 ? std::log(model_max) : -kInf, log_tail);
  double lhs = std::abs(a.f(z));
  BoundReport rep = finish_report("growth_bound", z, 1.0, lhs, log_rhs);
  return rep;
}

DerivativeReport derivative_bound(const std::function<Complex(Complex)>& f,
                                  const std::function<Complex(Complex)>& g, Complex z, double r,
                                  int nodes) {
  require(r > 0.0 && nodes >= 8, "derivative bound needs a real circle");
  DerivativeReport rep;
  Complex diff{0.0, 0.0};
  for (int k = 0; k < nodes; ++k) {
    double t = kTwoPi * k / nodes;
    Complex w = z + std::polar(r, t);
    Complex d = f(w) - g(w);
    rep.bound = std::max(rep.bound, std::abs(d));
    diff += d * std::polar(1.0, -t);
  }
  rep.bound /= r;
  rep.measured = std::abs(diff) / (nodes * r);
  rep.pass = rep.measured <= rep.bound * (1.0 + 1e-9) + 1e-300;
  return rep;
}

Complex PolyGauge::eval(Complex z) const {
  std::vector<Complex> p(dcoef_.size());
  p[0] = Complex{1.0, 0.0} / norm0_;
  for (std::size_t k = 0; k + 1 < dcoef_.size(); ++k) {
    Complex v = z * p[k];
    for (std::size_t j = 0; j <= k; ++j) v -= hess_[k][j] * p[j];
    p[k + 1] = v / hess_[k][k + 1];
  }
  Complex acc{0.0, 0.0};
  for (std::size_t k = 0; k < dcoef_.size(); ++k) acc += dcoef_[k] * p[k];
  return acc;
}

double PolyGauge::weighted_rms(const std::vector<FitSample>& samples) const {
  double num = 0.0, den = 0.0;
  for (const auto& s : samples) {
    num += s.weight * std::norm(s.target - eval(s.z));
    den += s.weight;
  }
  return den == 0.0 ? 0.0 : std::sqrt(num / den);
}

PolyGauge fit_poly_gauge(const std::vector<FitSample>& samples, int degree) {
  require(degree >= 0, "gauge fit degree must be nonnegative");
  std::size_t m = samples.size();
  require(m > std::size_t(degree), "gauge fit needs more samples than degree");
  double wmax = 0.0;
  for (const auto& s : samples) {
    require(s.weight >= 0.0, "gauge fit weights must be nonnegative");
    wmax = std::max(wmax, s.weight);
  }
  require(wmax > 0.0, "gauge fit needs a positive weight somewhere");
  std::vector<double> w(m);
  for (std::size_t i = 0; i < m; ++i) w[i] = samples[i].weight / wmax;

  auto wdot = [&](const std::vector<Complex>& a, const std::vector<Complex>& b) {
    Complex s{0.0, 0.0};
    for (std::size_t i = 0; i < m; ++i) s += std::conj(a[i]) * w[i] * b[i];
    return s;
  };
  auto wnorm = [&](const std::vector<Complex>& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += w[i] * std::norm(a[i]);
    return std::sqrt(s);
  };

  PolyGauge fit;
  std::vector<std::vector<Complex>> q;
  std::vector<Complex> q0(m, Complex{1.0, 0.0});
  fit.norm0_ = wnorm(q0);
  require(fit.norm0_ > 0.0, "gauge fit nodes carry no weight");
  for (auto& v : q0) v /= fit.norm0_;
  q.push_back(std::move(q0));

  for (int k = 0; k < degree; ++k) {
    std::vector<Complex> v(m);
    for (std::size_t i = 0; i < m; ++i) v[i] = samples[i].z * q[std::size_t(k)][i];
    std::vector<Complex> hcol(std::size_t(k) + 2, Complex{0.0, 0.0});
    for (int pass = 0; pass < 2; ++pass) {  // reorthogonalize once
      for (std::size_t j = 0; j <= std::size_t(k); ++j) {
        Complex hjk = wdot(q[j], v);
        hcol[j] += hjk;
        for (std::size_t i = 0; i < m; ++i) v[i] -= hjk * q[j][i];
      }
    }
    double nv = wnorm(v);
    require(nv > 1e-14 * (1.0 + std::abs(hcol[0])), "gauge fit nodes degenerate at this degree");
    hcol[std::size_t(k) + 1] = nv;
    for (auto& x : v) x /= nv;
    fit.hess_.push_back(std::move(hcol));
    q.push_back(std::move(v));
  }

  std::vector<Complex> target(m);
  for (std::size_t i = 0; i < m; ++i) target[i] = samples[i].target;
  fit.dcoef_.resize(std::size_t(degree) + 1);
  for (std::size_t k = 0; k < fit.dcoef_.size(); ++k) fit.dcoef_[k] = wdot(q[k], target);

  std::vector<Complex> res = target;
  for (std::size_t k = 0; k < fit.dcoef_.size(); ++k)
    for (std::size_t i = 0; i < m; ++i) res[i] -= fit.dcoef_[k] * q[k][i];
  double den = 0.0;
  for (std::size_t i = 0; i < m; ++i) den += w[i];
  fit.residual_ = std::sqrt(std::max(0.0, wnorm(res) * wnorm(res) / den));
  return fit;
}

}  // namespace wander::dbar
