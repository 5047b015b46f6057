#pragma once

#include <memory>
#include <vector>

#include "wander/curve.hpp"
#include "wander/types.hpp"

namespace wander {

struct BoundingBox {
  Complex lo{0.0, 0.0};
  Complex hi{0.0, 0.0};

  void absorb(Complex z) {
    lo = {std::min(lo.real(), z.real()), std::min(lo.imag(), z.imag())};
    hi = {std::max(hi.real(), z.real()), std::max(hi.imag(), z.imag())};
  }
  BoundingBox padded(double m) const { return {lo - Complex(m, m), hi + Complex(m, m)}; }
};

// Closed planar set supporting the distance queries the cutoff machinery
// needs. dist(z) is the Euclidean distance to the set (0 on it) and
// dist_dir(z) the unit vector from the nearest set point toward z, defined
// only where dist > 0.
class Region {
 public:
  virtual ~Region() = default;
  virtual bool contains(Complex z) const = 0;
  virtual double dist(Complex z) const = 0;
  virtual Complex dist_dir(Complex z) const = 0;
  virtual std::vector<Complex> boundary_samples(int n) const = 0;
  virtual BoundingBox bbox() const = 0;
};

using RegionPtr = std::shared_ptr<const Region>;

class DiskRegion final : public Region {
 public:
  explicit DiskRegion(Disk d) : disk_(d) { require(d.radius > 0, "disk radius must be positive"); }
  bool contains(Complex z) const override { return disk_.contains_closed(z); }
  double dist(Complex z) const override {
    return std::max(0.0, std::abs(z - disk_.center) - disk_.radius);
  }
  Complex dist_dir(Complex z) const override {
    Complex v = z - disk_.center;
    return v / std::abs(v);
  }
  std::vector<Complex> boundary_samples(int n) const override;
  BoundingBox bbox() const override;
  const Disk& disk() const { return disk_; }

 private:
  Disk disk_;
};

// Complement of a union of pairwise disjoint open disks. Distance from a
// point inside one of the holes is the radial gap to that hole's rim.
class ComplementOfDisks final : public Region {
 public:
  explicit ComplementOfDisks(std::vector<Disk> holes, double far_radius);
  bool contains(Complex z) const override;
  double dist(Complex z) const override;
  Complex dist_dir(Complex z) const override;
  std::vector<Complex> boundary_samples(int n) const override;
  BoundingBox bbox() const override;

 private:
  std::vector<Disk> holes_;
  double far_radius_;  // bbox extent hint; the set itself is unbounded
};

// Interior of a closed polyline (even-odd rule). Built from dense curve
// samples; distance queries scan segments.
class PolylineRegion final : public Region {
 public:
  explicit PolylineRegion(std::vector<Complex> loop);
  static PolylineRegion from_curve(const BoundaryCurve& c, int n = 2048) {
    return PolylineRegion(c.samples(n));
  }
  bool contains(Complex z) const override;
  double dist(Complex z) const override;
  Complex dist_dir(Complex z) const override;
  std::vector<Complex> boundary_samples(int n) const override;
  BoundingBox bbox() const override;

 private:
  Complex nearest_boundary_point(Complex z) const;
  std::vector<Complex> loop_;
  BoundingBox box_;
};

// Complement of a bounded region. Distance queries run against a cached
// sampling of the inner boundary, so they are approximate at the sampling
// scale; contains() is exact.
class ComplementRegion final : public Region {
 public:
  ComplementRegion(RegionPtr inner, double far_radius, int cache_samples = 4096);
  bool contains(Complex z) const override { return !inner_->contains(z); }
  double dist(Complex z) const override;
  Complex dist_dir(Complex z) const override;
  std::vector<Complex> boundary_samples(int n) const override { return inner_->boundary_samples(n); }
  BoundingBox bbox() const override { return inner_->bbox().padded(far_radius_); }

 private:
  Complex nearest_cached(Complex z) const;
  RegionPtr inner_;
  double far_radius_;
  std::vector<Complex> cache_;
};

// Minimum gap between region boundaries; 0 when samples of one region lie in
// another. Drives the cutoff separation precondition.
double separation(const std::vector<RegionPtr>& regions, int n = 1024);

}  // namespace wander
