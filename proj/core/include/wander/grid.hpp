#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "wander/types.hpp"

namespace wander {

// Uniform square-cell grid. origin is the center of cell (0,0); cell (i,j)
// sits at origin + spacing*(i + j*i1i) with i scanning x and j scanning y.
// Storage is row major: index = j*nx + i.
class ComplexGrid {
 public:
  ComplexGrid() = default;
  ComplexGrid(Complex origin, double spacing, int nx, int ny)
      : origin_(origin), spacing_(spacing), nx_(nx), ny_(ny), data_(std::size_t(nx) * ny) {
    require(nx > 0 && ny > 0 && spacing > 0, "grid dimensions must be positive");
  }

  Complex origin() const { return origin_; }
  double spacing() const { return spacing_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  std::size_t size() const { return data_.size(); }

  Complex point(int i, int j) const { return origin_ + spacing_ * Complex(i, j); }
  Complex& at(int i, int j) { return data_[std::size_t(j) * nx_ + i]; }
  Complex at(int i, int j) const { return data_[std::size_t(j) * nx_ + i]; }
  const std::vector<Complex>& data() const { return data_; }
  std::vector<Complex>& data() { return data_; }

  // Deterministic fill: parallel across rows, each cell written exactly once.
  void fill(const std::function<Complex(Complex)>& f, int threads = 1);

  // Each cell averages an s-by-s stencil of samples. Used when the source has
  // jump discontinuities the plain midpoint rule would alias.
  void fill_supersampled(const std::function<Complex(Complex)>& f, int s, int threads = 1);

 private:
  Complex origin_{0.0, 0.0};
  double spacing_ = 1.0;
  int nx_ = 0;
  int ny_ = 0;
  std::vector<Complex> data_;
};

// Covers box [lo, hi] with cells of pitch <= h_target, cell centers symmetric
// about the box center.
ComplexGrid make_grid_over_box(Complex lo, Complex hi, double h_target);

}  // namespace wander
