#include "wander/region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wander {

std::vector<Complex> DiskRegion::boundary_samples(int n) const {
  std::vector<Complex> out(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j)
    out[std::size_t(j)] = disk_.center + std::polar(disk_.radius, kTwoPi * j / n);
  return out;
}

BoundingBox DiskRegion::bbox() const {
  double r = disk_.radius;
  return {disk_.center - Complex(r, r), disk_.center + Complex(r, r)};
}

ComplementOfDisks::ComplementOfDisks(std::vector<Disk> holes, double far_radius)
    : holes_(std::move(holes)), far_radius_(far_radius) {
  require(!holes_.empty(), "complement region needs at least one hole");
  for (std::size_t i = 0; i < holes_.size(); ++i)
    for (std::size_t j = i + 1; j < holes_.size(); ++j)
      require(std::abs(holes_[i].center - holes_[j].center) >=
                  holes_[i].radius + holes_[j].radius,
              "complement holes must be disjoint");
}

bool ComplementOfDisks::contains(Complex z) const {
  for (const auto& d : holes_)
    if (d.contains(z)) return false;
  return true;
}

double ComplementOfDisks::dist(Complex z) const {
  double gap = 0.0;
  for (const auto& d : holes_) gap = std::max(gap, d.radius - std::abs(z - d.center));
  return std::max(0.0, gap);
}

Complex ComplementOfDisks::dist_dir(Complex z) const {
  // Only one hole can contain z; head for its rim.
  for (const auto& d : holes_) {
    if (d.contains(z)) {
      Complex v = z - d.center;
      double a = std::abs(v);
      if (a < 1e-300) return {1.0, 0.0};  // center is equidistant; any direction
      return -v / a;
    }
  }
  return {1.0, 0.0};
}

std::vector<Complex> ComplementOfDisks::boundary_samples(int n) const {
  std::vector<Complex> out;
  int per = std::max(8, n / int(holes_.size()));
  for (const auto& d : holes_)
    for (int j = 0; j < per; ++j) out.push_back(d.center + std::polar(d.radius, kTwoPi * j / per));
  return out;
}

BoundingBox ComplementOfDisks::bbox() const {
  BoundingBox b{holes_[0].center, holes_[0].center};
  for (const auto& d : holes_) {
    b.absorb(d.center + Complex(d.radius, d.radius));
    b.absorb(d.center - Complex(d.radius, d.radius));
  }
  return b.padded(far_radius_);
}

PolylineRegion::PolylineRegion(std::vector<Complex> loop) : loop_(std::move(loop)) {
  require(loop_.size() >= 3, "polyline region needs at least 3 vertices");
  box_ = {loop_[0], loop_[0]};
  for (const auto& p : loop_) box_.absorb(p);
}

bool PolylineRegion::contains(Complex z) const {
  // Even-odd ray crossing toward +x.
  bool inside = false;
  std::size_t n = loop_.size();
  for (std::size_t i = 0; i < n; ++i) {
    Complex a = loop_[i], b = loop_[(i + 1) % n];
    bool straddles = (a.imag() > z.imag()) != (b.imag() > z.imag());
    if (!straddles) continue;
    double xcross = a.real() + (z.imag() - a.imag()) / (b.imag() - a.imag()) * (b.real() - a.real());
    if (xcross > z.real()) inside = !inside;
  }
  if (inside) return true;
  return dist(z) == 0.0;
}

Complex PolylineRegion::nearest_boundary_point(Complex z) const {
  double best = std::numeric_limits<double>::infinity();
  Complex bp = loop_[0];
  std::size_t n = loop_.size();
  for (std::size_t i = 0; i < n; ++i) {
    Complex a = loop_[i], b = loop_[(i + 1) % n];
    Complex ab = b - a;
    double ab2 = std::norm(ab);
    double t = ab2 == 0.0 ? 0.0 : std::clamp(((z - a) * std::conj(ab)).real() / ab2, 0.0, 1.0);
    Complex p = a + t * ab;
    double d = std::abs(z - p);
    if (d < best) {
      best = d;
      bp = p;
    }
  }
  return bp;
}

double PolylineRegion::dist(Complex z) const {
  // contains() consults dist() for on-boundary points, so test parity inline.
  bool inside = false;
  std::size_t n = loop_.size();
  for (std::size_t i = 0; i < n; ++i) {
    Complex a = loop_[i], b = loop_[(i + 1) % n];
    bool straddles = (a.imag() > z.imag()) != (b.imag() > z.imag());
    if (!straddles) continue;
    double xcross = a.real() + (z.imag() - a.imag()) / (b.imag() - a.imag()) * (b.real() - a.real());
    if (xcross > z.real()) inside = !inside;
  }
  if (inside) return 0.0;
  return std::abs(z - nearest_boundary_point(z));
}

Complex PolylineRegion::dist_dir(Complex z) const {
  Complex p = nearest_boundary_point(z);
  Complex v = z - p;
  double a = std::abs(v);
  if (a < 1e-300) return {1.0, 0.0};
  return v / a;
}

std::vector<Complex> PolylineRegion::boundary_samples(int n) const {
  std::vector<Complex> out;
  out.reserve(std::size_t(n));
  std::size_t m = loop_.size();
  for (int j = 0; j < n; ++j) out.push_back(loop_[std::size_t(j) * m / std::size_t(n)]);
  return out;
}

BoundingBox PolylineRegion::bbox() const { return box_; }

ComplementRegion::ComplementRegion(RegionPtr inner, double far_radius, int cache_samples)
    : inner_(std::move(inner)), far_radius_(far_radius) {
  require(inner_ != nullptr, "complement region needs an inner region");
  cache_ = inner_->boundary_samples(cache_samples);
  require(!cache_.empty(), "complement region inner boundary is empty");
}

Complex ComplementRegion::nearest_cached(Complex z) const {
  double best = std::numeric_limits<double>::infinity();
  Complex bp = cache_[0];
  for (const auto& p : cache_) {
    double d = std::abs(z - p);
    if (d < best) {
      best = d;
      bp = p;
    }
  }
  return bp;
}

double ComplementRegion::dist(Complex z) const {
  if (!inner_->contains(z)) return 0.0;
  return std::abs(z - nearest_cached(z));
}

Complex ComplementRegion::dist_dir(Complex z) const {
  Complex v = z - nearest_cached(z);
  double a = std::abs(v);
  if (a < 1e-300) return {1.0, 0.0};
  return v / a;
}

double separation(const std::vector<RegionPtr>& regions, int n) {
  require(regions.size() >= 2, "separation needs at least two regions");
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::vector<Complex>> bounds;
  for (const auto& r : regions) bounds.push_back(r->boundary_samples(n));
  for (std::size_t i = 0; i < regions.size(); ++i)
    for (std::size_t j = 0; j < regions.size(); ++j) {
      if (i == j) continue;
      for (const auto& p : bounds[i]) {
        if (regions[j]->contains(p)) return 0.0;
        best = std::min(best, regions[j]->dist(p));
      }
    }
  return best;
}

}  // namespace wander
