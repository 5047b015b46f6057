#pragma once

#include <complex>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace wander {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

struct Disk {
  Complex center;
  double radius = 0.0;

  bool contains(Complex z) const { return std::abs(z - center) < radius; }
  bool contains_closed(Complex z) const { return std::abs(z - center) <= radius; }
};

// Open annulus {inner < |z - center| < outer}.
struct Annulus {
  Complex center;
  double inner = 0.0;
  double outer = 0.0;

  bool contains(Complex z) const {
    double r = std::abs(z - center);
    return r > inner && r < outer;
  }
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::runtime_error(msg);
}

inline bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Max pairwise distance of a point set. Exact for the set itself; callers pass
// boundary samples dense enough for their tolerance.
double diameter(const std::vector<Complex>& pts);

}  // namespace wander
