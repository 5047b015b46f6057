#include "wander/subharm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace wander::subharm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// argmin of e^{r/eta}(1/eta^2 + 1/(eta r)) is eta times this root of x^2+x-1
constexpr double kLapMinScale = 0.61803398874989484820;

// radial interval swept by a disk about another center
std::pair<double, double> radial_range(Complex field_center, const Disk& d) {
  double s = std::abs(d.center - field_center);
  return {std::max(0.0, s - d.radius), s + d.radius};
}

nlohmann::ordered_json center_json(Complex c) {
  return nlohmann::ordered_json::array({c.real(), c.imag()});
}

class ExpRadialField final : public ScalarField {
 public:
  ExpRadialField(double eta, Complex center) : eta_(eta), center_(center) {
    require(eta > 0.0, "exp field needs positive eta");
  }
  double value(Complex z) const override { return std::exp(std::abs(z - center_) / eta_); }
  double lap_lower(const Disk& d) const override {
    auto [r1, r2] = radial_range(center_, d);
    double rstar = kLapMinScale * eta_;
    if (r2 <= rstar) return lap(r2);  // still on the decreasing branch
    if (r1 >= rstar) return lap(r1);
    return lap(rstar);
  }
  nlohmann::ordered_json describe() const override {
    return {{"kind", "exp_radial"}, {"eta", eta_}, {"center", center_json(center_)}};
  }

 private:
  double lap(double r) const {
    return std::exp(r / eta_) * (1.0 / (eta_ * eta_) + 1.0 / (eta_ * r));
  }
  double eta_;
  Complex center_;
};

class PowerField final : public ScalarField {
 public:
  PowerField(double alpha, Complex center) : alpha_(alpha), center_(center) {
    require(alpha > 0.0 && alpha < 2.0, "power field needs alpha in (0,2)");
  }
  double value(Complex z) const override { return std::pow(std::abs(z - center_), alpha_); }
  double lap_lower(const Disk& d) const override {
    auto [r1, r2] = radial_range(center_, d);
    (void)r1;  // alpha^2 r^{alpha-2} decreases, so the far edge is the min
    return alpha_ * alpha_ * std::pow(r2, alpha_ - 2.0);
  }
  nlohmann::ordered_json describe() const override {
    return {{"kind", "power"}, {"alpha", alpha_}, {"center", center_json(center_)}};
  }

 private:
  double alpha_;
  Complex center_;
};

class ShiftedPowerField final : public ScalarField {
 public:
  ShiftedPowerField(double tau, double alpha, double a, Complex center)
      : tau_(tau), alpha_(alpha), a_(a), center_(center) {
    require(tau > 0.0, "shifted power needs positive scale");
    require(alpha > 0.0 && alpha < 1.0, "shifted power needs alpha in (0,1)");
    require(a > 0.0, "shifted power needs positive rim radius");
  }
  double value(Complex z) const override {
    double s = std::abs(z - center_);
    require(s >= a_ - 1e-12, "shifted power evaluated inside its rim");
    return tau_ * std::pow(std::max(0.0, s - a_), alpha_);
  }
  // lap = tau alpha (r-a)^{alpha-2} (alpha - a/r): positive only from r = a/alpha
  // outward. Bound each monotone factor separately; when the sign factor is
  // negative at the near edge, pair it with the larger power factor so the
  // product still bounds from below.
  double lap_lower(const Disk& d) const override {
    auto [r1, r2] = radial_range(center_, d);
    require(r1 > a_, "shifted power disk reaches inside the rim");
    double g = alpha_ - a_ / r1;
    double p = tau_ * alpha_ * std::pow((g >= 0.0 ? r2 : r1) - a_, alpha_ - 2.0);
    return p * g;
  }
  nlohmann::ordered_json describe() const override {
    return {{"kind", "shifted_power"},
            {"tau", tau_},
            {"alpha", alpha_},
            {"rim", a_},
            {"center", center_json(center_)}};
  }

 private:
  double tau_, alpha_, a_;
  Complex center_;
};

class LogRadialField final : public ScalarField {
 public:
  LogRadialField(double c, double r0, Complex center) : c_(c), r0_(r0), center_(center) {
    require(c > 0.0, "log field needs a positive coefficient");
    require(r0 > 0.0, "log field needs a positive reference radius");
  }
  double value(Complex z) const override { return c_ * std::log(std::abs(z - center_) / r0_); }
  double lap_lower(const Disk&) const override { return 0.0; }  // harmonic, atom at center is positive
  nlohmann::ordered_json describe() const override {
    return {{"kind", "log_radial"}, {"coeff", c_}, {"r0", r0_}, {"center", center_json(center_)}};
  }

 private:
  double c_, r0_;
  Complex center_;
};

class QuadraticField final : public ScalarField {
 public:
  explicit QuadraticField(Complex center) : center_(center) {}
  double value(Complex z) const override { return std::norm(z - center_); }
  double lap_lower(const Disk&) const override { return 4.0; }
  nlohmann::ordered_json describe() const override {
    return {{"kind", "quadratic"}, {"center", center_json(center_)}};
  }

 private:
  Complex center_;
};

class ConstantField final : public ScalarField {
 public:
  explicit ConstantField(double v) : v_(v) {}
  double value(Complex) const override { return v_; }
  double lap_lower(const Disk&) const override { return 0.0; }
  nlohmann::ordered_json describe() const override { return {{"kind", "constant"}, {"value", v_}}; }

 private:
  double v_;
};

class LogGaugeField final : public ScalarField {
 public:
  LogGaugeField(std::function<double(Complex)> f, double c, double log_r0, std::string label)
      : f_(std::move(f)), c_(c), log_r0_(log_r0), label_(std::move(label)) {
    require(c > 0.0, "log gauge needs a positive coefficient");
  }
  double value(Complex z) const override { return c_ * (f_(z) - log_r0_); }
  double lap_lower(const Disk&) const override { return 0.0; }
  nlohmann::ordered_json describe() const override {
    return {{"kind", "log_gauge"}, {"coeff", c_}, {"log_r0", log_r0_}, {"label", label_}};
  }

 private:
  std::function<double(Complex)> f_;
  double c_, log_r0_;
  std::string label_;
};

}  // namespace

FieldPtr exp_radial(double eta, Complex center) {
  return std::make_shared<ExpRadialField>(eta, center);
}
FieldPtr power_radial(double alpha, Complex center) {
  return std::make_shared<PowerField>(alpha, center);
}
FieldPtr shifted_power(double tau, double alpha, double a, Complex center) {
  return std::make_shared<ShiftedPowerField>(tau, alpha, a, center);
}
FieldPtr log_radial(double c, double r0, Complex center) {
  return std::make_shared<LogRadialField>(c, r0, center);
}
FieldPtr quadratic(Complex center) { return std::make_shared<QuadraticField>(center); }
FieldPtr constant(double v) { return std::make_shared<ConstantField>(v); }
FieldPtr log_gauge(std::function<double(Complex)> log_abs, double c, double log_r0,
                   std::string label) {
  return std::make_shared<LogGaugeField>(std::move(log_abs), c, log_r0, std::move(label));
}

void Weight::add_piece(RegionPtr region, FieldPtr field) {
  require(region != nullptr && field != nullptr, "weight piece needs region and field");
  pieces_.emplace_back(std::move(region), std::move(field));
}

bool Weight::covers(Complex z) const {
  for (const auto& [region, field] : pieces_)
    if (region->contains(z)) return true;
  return false;
}

double Weight::base_value(Complex z) const {
  double best = -kInf;
  bool found = false;
  for (const auto& [region, field] : pieces_) {
    if (!region->contains(z)) continue;
    best = std::max(best, field->value(z));
    found = true;
  }
  require(found, "weight undefined at point");
  return best;
}

double Weight::value(Complex z) const {
  double v = base_value(z);
  for (const auto& w : punctures_) {
    double s = std::abs(z - w.disk.center);
    if (s > w.disk.radius) continue;
    if (s == 0.0) return -kInf;
    double r = w.disk.radius;
    v += -(w.mass / 4.0) * (s * s - r * r) + w.coefficient * std::log(s / r);
  }
  return v;
}

double Weight::lap_lower(const Disk& d) const {
  double m = kInf;
  bool hit = false;
  for (const auto& [region, field] : pieces_) {
    if (region->dist(d.center) > d.radius + 1e-15) continue;
    m = std::min(m, field->lap_lower(d));
    hit = true;
  }
  require(hit, "no weight piece meets the disk");
  // Wells spend -mass on their own disks; the log atom only adds.
  for (const auto& w : punctures_)
    if (std::abs(w.disk.center - d.center) < w.disk.radius + d.radius) m -= w.mass;
  return m;
}

PunctureRecord Weight::apply_puncture(const Disk& d) {
  require(d.radius > 0.0, "well needs positive radius");
  require(covers(d.center), "well center not covered by the weight");
  for (int j = 0; j < 128; ++j)
    require(covers(d.center + std::polar(d.radius, kTwoPi * j / 128)),
            "well rim not covered by the weight");
  for (const auto& w : punctures_)
    require(std::abs(w.disk.center - d.center) >= w.disk.radius + d.radius,
            "wells must not overlap");
  double m = lap_lower(d);
  require(std::isfinite(m) && m > 0.0, "no Laplacian budget for well");
  PunctureRecord rec{d, m, m * d.radius * d.radius / 4.0};
  punctures_.push_back(rec);
  return rec;
}

nlohmann::ordered_json Weight::describe() const {
  nlohmann::ordered_json ps = nlohmann::ordered_json::array();
  for (const auto& [region, field] : pieces_) ps.push_back(field->describe());
  nlohmann::ordered_json ws = nlohmann::ordered_json::array();
  for (const auto& w : punctures_)
    ws.push_back({{"center", center_json(w.disk.center)},
                  {"radius", w.disk.radius},
                  {"mass", w.mass},
                  {"coefficient", w.coefficient}});
  return {{"pieces", ps}, {"punctures", ws}};
}

namespace {

template <class Fold>
CircleStat circle_scan(const std::function<double(Complex)>& f, Complex center, double radius,
                       double tol, double init, Fold fold) {
  require(radius > 0.0, "circle scan needs positive radius");
  auto scan = [&](int n) {
    double acc = init;
    for (int j = 0; j < n; ++j) acc = fold(acc, f(center + std::polar(radius, kTwoPi * j / n)), n);
    return acc;
  };
  double prev = scan(64);
  for (int n = 128; n <= 4096; n *= 2) {
    double cur = scan(n);
    if (std::abs(cur - prev) <= 0.1 * tol * (1.0 + std::abs(cur))) return {cur, n};
    prev = cur;
  }
  return {prev, 4096};
}

}  // namespace

CircleStat max_on_circle(const std::function<double(Complex)>& f, Complex center, double radius,
                         double tol) {
  return circle_scan(f, center, radius, tol, -kInf,
                     [](double acc, double v, int) { return std::max(acc, v); });
}

CircleStat mean_on_circle(const std::function<double(Complex)>& f, Complex center, double radius,
                          double tol) {
  return circle_scan(f, center, radius, tol, 0.0,
                     [](double acc, double v, int n) { return acc + v / n; });
}

SubmeanReport check_submean(const std::function<double(Complex)>& f,
                            const std::vector<Complex>& points, const std::vector<double>& radii,
                            double tol) {
  SubmeanReport rep;
  rep.worst_gap = -kInf;
  for (const auto& z : points)
    for (double r : radii) {
      double v = f(z);
      double m = mean_on_circle(f, z, r, tol).value;
      ++rep.tested;
      double gap = v - m;
      rep.worst_gap = std::max(rep.worst_gap, gap);
      if (gap > tol) rep.violations.push_back({z, r, v, m});
    }
  rep.pass = rep.violations.empty();
  return rep;
}

GlueReport check_glue_interface(const Weight& w, std::size_t outer, std::size_t inner, int samples,
                                double tol) {
  const auto& pieces = w.pieces();
  require(outer < pieces.size() && inner < pieces.size() && outer != inner,
          "glue check needs two distinct pieces");
  GlueReport rep;
  rep.worst_margin = kInf;
  for (const auto& z : pieces[inner].first->boundary_samples(samples)) {
    if (!pieces[outer].first->contains(z)) continue;
    double margin = pieces[outer].second->value(z) - pieces[inner].second->value(z);
    ++rep.samples;
    if (margin < rep.worst_margin) {
      rep.worst_margin = margin;
      rep.worst_point = z;
    }
  }
  rep.pass = rep.samples > 0 && rep.worst_margin >= -tol;
  return rep;
}

DropCert certify_well_drop(const Weight& w, std::size_t well, double delta) {
  require(well < w.punctures().size(), "no such well");
  require(delta > 0.0 && delta <= std::exp(-2.0) + 1e-12, "drop bound needs delta <= e^-2");
  const auto& rec = w.punctures()[well];
  auto val = [&w](Complex z) { return w.value(z); };
  auto base = [&w](Complex z) { return w.base_value(z); };
  DropCert cert;
  cert.delta = delta;
  cert.measured = max_on_circle(val, rec.disk.center, delta * rec.disk.radius).value;
  double base_max = max_on_circle(base, rec.disk.center, rec.disk.radius).value;
  double r = rec.disk.radius;
  cert.bound = base_max - (rec.mass * r * r / 8.0) * std::log(1.0 / delta);
  cert.pass = cert.measured <= cert.bound + 1e-9 * (1.0 + std::abs(cert.bound));
  return cert;
}

}  // namespace wander::subharm
