#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wander/region.hpp"
#include "wander/types.hpp"

namespace wander::subharm {

// Subharmonic building block: pointwise values plus a certified lower bound
// on the distributional Laplacian over disks. Lower bounds are closed-form
// or conservatively factored, never sampled.
class ScalarField {
 public:
  virtual ~ScalarField() = default;
  virtual double value(Complex z) const = 0;
  virtual double lap_lower(const Disk& d) const = 0;
  virtual nlohmann::ordered_json describe() const = 0;
};

using FieldPtr = std::shared_ptr<const ScalarField>;

// e^{|z-c|/eta}; Laplacian e^{r/eta}(1/eta^2 + 1/(eta r)), unimodal with the
// minimum at r = eta (sqrt 5 - 1)/2.
FieldPtr exp_radial(double eta, Complex center = {0.0, 0.0});
// |z-c|^alpha, 0 < alpha < 2; Laplacian alpha^2 r^{alpha-2}, decreasing.
FieldPtr power_radial(double alpha, Complex center = {0.0, 0.0});
// tau (|z-c| - a)^alpha for |z-c| > a; subharmonic only from radius a/alpha
// outward, and lap_lower rejects disks that reach below a.
FieldPtr shifted_power(double tau, double alpha, double a, Complex center = {0.0, 0.0});
// c log(|z|/r0) about the given center; harmonic off the center.
FieldPtr log_radial(double c, double r0, Complex center = {0.0, 0.0});
// |z-c|^2, Laplacian 4.
FieldPtr quadratic(Complex center = {0.0, 0.0});
FieldPtr constant(double v);
// c * (log_abs(z) - log_r0) for the log-modulus of a holomorphic gauge;
// harmonic wherever the gauge has no zero, which is the caller's contract.
FieldPtr log_gauge(std::function<double(Complex)> log_abs, double c, double log_r0,
                   std::string label);

struct PunctureRecord {
  Disk disk;
  double mass = 0.0;         // Laplacian budget m spent by the well
  double coefficient = 0.0;  // a = m r^2 / 4, the log weight at the center
};

// Piecewise max of fields over regions, with logarithmic wells. The max of
// subharmonic pieces is subharmonic; each well spends Laplacian mass
// certified by lap_lower, so the total stays subharmonic.
class Weight {
 public:
  void add_piece(RegionPtr region, FieldPtr field);

  // Digs the well u -> u - q + a log(|z-c|/r) with q = (m/4)(|z-c|^2 - r^2).
  // Throws when the disk leaves the covered set, overlaps an earlier well,
  // or has no positive Laplacian budget.
  PunctureRecord apply_puncture(const Disk& d);

  bool covers(Complex z) const;
  double value(Complex z) const;       // -inf at well centers
  double base_value(Complex z) const;  // without well modifiers

  // min over pieces whose region meets the disk; conservative for the max.
  double lap_lower(const Disk& d) const;

  const std::vector<std::pair<RegionPtr, FieldPtr>>& pieces() const { return pieces_; }
  const std::vector<PunctureRecord>& punctures() const { return punctures_; }
  nlohmann::ordered_json describe() const;

 private:
  std::vector<std::pair<RegionPtr, FieldPtr>> pieces_;
  std::vector<PunctureRecord> punctures_;
};

// max over the circle |z-c| = r by node doubling until the change drops
// below tol/10 (cap 4096 nodes). For subharmonic integrands this equals the
// closed-disk max by the maximum principle.
struct CircleStat {
  double value = 0.0;
  int nodes = 0;
};
CircleStat max_on_circle(const std::function<double(Complex)>& f, Complex center, double radius,
                         double tol = 1e-9);
CircleStat mean_on_circle(const std::function<double(Complex)>& f, Complex center, double radius,
                          double tol = 1e-9);

struct SubmeanViolation {
  Complex point;
  double radius = 0.0;
  double value = 0.0;
  double mean = 0.0;
};

struct SubmeanReport {
  int tested = 0;
  double worst_gap = 0.0;  // max of value - mean; subharmonic keeps it <= 0
  std::vector<SubmeanViolation> violations;
  bool pass = true;
};

SubmeanReport check_submean(const std::function<double(Complex)>& f,
                            const std::vector<Complex>& points, const std::vector<double>& radii,
                            double tol = 1e-8);

// Pairwise glue hypothesis: the piece `outer` must dominate the piece `inner`
// on the part of inner's region boundary that outer covers.
struct GlueReport {
  int samples = 0;
  double worst_margin = 0.0;  // min of outer - inner; pass needs >= -tol
  Complex worst_point;
  bool pass = false;
};
GlueReport check_glue_interface(const Weight& w, std::size_t outer, std::size_t inner,
                                int samples = 1024, double tol = 1e-9);

// Certified well depth: max of the weight on the delta-shrunk rim against the
// base max on the whole disk minus (m r^2 / 8) log(1/delta). Valid for
// delta <= e^{-2}.
struct DropCert {
  double delta = 0.0;
  double measured = 0.0;  // weight max on |z-c| = delta r
  double bound = 0.0;     // base max on the disk minus the guaranteed drop
  bool pass = false;
};
DropCert certify_well_drop(const Weight& w, std::size_t well, double delta);

}  // namespace wander::subharm
