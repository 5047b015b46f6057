#include "wander/grid.hpp"

#include <cmath>

#include "wander/parallel.hpp"

namespace wander {

void ComplexGrid::fill(const std::function<Complex(Complex)>& f, int threads) {
  util::parallel_chunks(std::size_t(ny_), threads, [&](std::size_t jlo, std::size_t jhi) {
    for (std::size_t j = jlo; j < jhi; ++j)
      for (int i = 0; i < nx_; ++i) at(i, int(j)) = f(point(i, int(j)));
  });
}

void ComplexGrid::fill_supersampled(const std::function<Complex(Complex)>& f, int s, int threads) {
  require(s >= 1, "supersample factor must be >= 1");
  if (s == 1) {
    fill(f, threads);
    return;
  }
  double sub = spacing_ / s;
  Complex corner_shift = Complex(-0.5 * (spacing_ - sub), -0.5 * (spacing_ - sub));
  util::parallel_chunks(std::size_t(ny_), threads, [&](std::size_t jlo, std::size_t jhi) {
    for (std::size_t j = jlo; j < jhi; ++j)
      for (int i = 0; i < nx_; ++i) {
        Complex base = point(i, int(j)) + corner_shift;
        Complex acc{0.0, 0.0};
        for (int b = 0; b < s; ++b)
          for (int a = 0; a < s; ++a) acc += f(base + sub * Complex(a, b));
        at(i, int(j)) = acc / double(s * s);
      }
  });
}

ComplexGrid make_grid_over_box(Complex lo, Complex hi, double h_target) {
  require(hi.real() > lo.real() && hi.imag() > lo.imag(), "box must have positive extent");
  require(h_target > 0, "grid pitch must be positive");
  double wx = hi.real() - lo.real();
  double wy = hi.imag() - lo.imag();
  int nx = std::max(1, int(std::ceil(wx / h_target)));
  int ny = std::max(1, int(std::ceil(wy / h_target)));
  double h = std::max(wx / nx, wy / ny);
  Complex center = 0.5 * (lo + hi);
  Complex origin = center - 0.5 * h * Complex(nx - 1, ny - 1);
  return ComplexGrid(origin, h, nx, ny);
}

}  // namespace wander
