#include <doctest.h>

#include <atomic>
#include <cstdio>
#include <filesystem>

#include "wander/curve.hpp"
#include "wander/grid.hpp"
#include "wander/io.hpp"
#include "wander/parallel.hpp"
#include "wander/region.hpp"
#include "wander/types.hpp"

using namespace wander;

TEST_CASE("parallel chunks cover the range exactly once") {
  const std::size_t n = 1003;
  std::vector<std::atomic<int>> hits(n);
  util::parallel_chunks(n, 7, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) hits[i].fetch_add(1);
  });
  for (std::size_t i = 0; i < n; ++i) CHECK(hits[i].load() == 1);
}

TEST_CASE("ellipse diameter matches the major axis") {
  auto e = BoundaryCurve::ellipse(2.0, 1.0);
  CHECK(e.diameter(4096) == doctest::Approx(4.0).epsilon(1e-6));
  CHECK(e.diameter(1000) == doctest::Approx(4.0).epsilon(1e-3));
}

TEST_CASE("wobbly circle has the advertised polar radius") {
  auto c = BoundaryCurve::wobbly_circle(0.01, 3);
  CHECK(c.roundness() == doctest::Approx(0.01).epsilon(1e-10));
  for (double th : {0.0, 0.3, 1.0, 2.5, 4.4, 6.0}) {
    double want = 1.0 + 0.01 * std::cos(3.0 * th);
    CHECK(c.polar_radius(th) == doctest::Approx(want).epsilon(1e-10));
  }
  CHECK(c.star_shaped());
  CHECK(c.is_jordan());
}

TEST_CASE("curve derivative matches finite differences") {
  auto c = BoundaryCurve::wobbly_circle(0.05, 4);
  double h = 1e-6;
  for (double t : {0.1, 1.7, 3.9, 5.5}) {
    Complex fd = (c.eval(t + h) - c.eval(t - h)) / (2.0 * h);
    CHECK(std::abs(c.deriv(t) - fd) < 1e-7);
    Complex fd2 = (c.deriv(t + h) - c.deriv(t - h)) / (2.0 * h);
    CHECK(std::abs(c.deriv2(t) - fd2) < 1e-6);
  }
}

TEST_CASE("inner-loop limacon is rejected") {
  // (1 + 2cos t) e^{it} = 1 + e^{it} + e^{2it}; the loop crosses itself.
  BoundaryCurve lim({{1.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}}, 0, 1.0);
  CHECK_FALSE(lim.is_jordan());
  CHECK_FALSE(lim.star_shaped());
}

TEST_CASE("fourier fit reproduces the curve it sampled") {
  auto c = BoundaryCurve::wobbly_circle(0.03, 5);
  auto fit = BoundaryCurve::from_samples(c.samples(256), 1e-13, c.extension_radius());
  for (double t : {0.0, 0.7, 2.9, 4.2}) CHECK(std::abs(fit.eval(t) - c.eval(t)) < 1e-12);
}

TEST_CASE("curve json round trip") {
  auto c = BoundaryCurve::ellipse(2.0, 1.0);
  auto back = BoundaryCurve::from_json(c.to_json());
  CHECK(back.min_index() == c.min_index());
  CHECK(back.extension_radius() == c.extension_radius());
  for (double t : {0.2, 1.1, 3.3}) CHECK(std::abs(back.eval(t) - c.eval(t)) < 1e-15);
}

TEST_CASE("grid fill is identical across thread counts") {
  auto f = [](Complex z) { return std::exp(Complex(0.0, 1.0) * z) + z * z; };
  ComplexGrid a({-1.0, -1.0}, 0.03, 64, 64), b({-1.0, -1.0}, 0.03, 64, 64);
  a.fill(f, 1);
  b.fill(f, 8);
  CHECK(a.data() == b.data());
}

TEST_CASE("supersampling converges on an indicator") {
  // Mean of the unit-disk indicator over [-2,2]^2 is pi/16.
  auto ind = [](Complex z) { return Complex(std::abs(z) <= 1.0 ? 1.0 : 0.0, 0.0); };
  ComplexGrid g = make_grid_over_box({-2.0, -2.0}, {2.0, 2.0}, 0.05);
  g.fill_supersampled(ind, 8, 4);
  double mean = 0.0;
  for (const auto& v : g.data()) mean += v.real();
  mean /= double(g.size());
  CHECK(mean == doctest::Approx(kPi / 16.0).epsilon(2e-3));
}

TEST_CASE("box grid covers the requested box") {
  auto g = make_grid_over_box({-1.0, -2.0}, {3.0, 1.0}, 0.21);
  CHECK(g.spacing() <= 0.21 + 1e-12);
  Complex first = g.point(0, 0), last = g.point(g.nx() - 1, g.ny() - 1);
  CHECK(first.real() - 0.5 * g.spacing() <= -1.0 + 1e-9);
  CHECK(last.real() + 0.5 * g.spacing() >= 3.0 - 1e-9);
  CHECK(first.imag() - 0.5 * g.spacing() <= -2.0 + 1e-9);
  CHECK(last.imag() + 0.5 * g.spacing() >= 1.0 - 1e-9);
}

TEST_CASE("disk region distance and direction") {
  DiskRegion r(Disk{{1.0, 0.0}, 2.0});
  CHECK(r.contains({2.0, 0.5}));
  CHECK(r.dist({4.0, 0.0}) == doctest::Approx(1.0));
  CHECK(std::abs(r.dist_dir({4.0, 0.0}) - Complex(1.0, 0.0)) < 1e-15);
  CHECK(r.dist({1.0, -3.5}) == doctest::Approx(1.5));
}

TEST_CASE("complement-of-disks distance inside a hole") {
  ComplementOfDisks r({Disk{{0.0, 0.0}, 1.0}, Disk{{5.0, 0.0}, 2.0}}, 10.0);
  CHECK(r.contains({2.5, 0.0}));
  CHECK_FALSE(r.contains({5.5, 0.0}));
  CHECK(r.dist({0.25, 0.0}) == doctest::Approx(0.75));
  CHECK(std::abs(r.dist_dir({0.25, 0.0}) - Complex(-1.0, 0.0)) < 1e-15);
  CHECK(r.dist({5.0, 1.0}) == doctest::Approx(1.0));
}

TEST_CASE("polyline region approximates its disk") {
  auto circle = BoundaryCurve::circle({0.0, 0.0}, 1.0);
  auto r = PolylineRegion::from_curve(circle, 4096);
  CHECK(r.contains({0.3, 0.4}));
  CHECK_FALSE(r.contains({0.8, 0.7}));
  CHECK(r.dist({2.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(std::abs(r.dist_dir({0.0, 3.0}) - Complex(0.0, 1.0)) < 1e-4);
}

TEST_CASE("separation of two disks is the rim gap") {
  std::vector<RegionPtr> rs = {std::make_shared<DiskRegion>(Disk{{0.0, 0.0}, 1.0}),
                               std::make_shared<DiskRegion>(Disk{{3.0, 0.0}, 1.0})};
  CHECK(separation(rs, 1024) == doctest::Approx(1.0).epsilon(1e-4));
  std::vector<RegionPtr> overlapping = {std::make_shared<DiskRegion>(Disk{{0.0, 0.0}, 2.0}),
                                        std::make_shared<DiskRegion>(Disk{{3.0, 0.0}, 2.0})};
  CHECK(separation(overlapping, 512) == 0.0);
}

TEST_CASE("binary grid file round trips exactly") {
  ComplexGrid g({-0.5, 0.25}, 0.125, 7, 5);
  g.fill([](Complex z) { return std::sin(z) + Complex(0.0, 1.0) / (z + Complex(9.0, 0.0)); });
  auto path = std::filesystem::temp_directory_path() / "wander_grid_rt.bin";
  io::write_grid_binary(path.string(), g);
  auto back = io::read_grid_binary(path.string());
  CHECK(back.nx() == g.nx());
  CHECK(back.ny() == g.ny());
  CHECK(back.origin() == g.origin());
  CHECK(back.spacing() == g.spacing());
  CHECK(back.data() == g.data());
  std::filesystem::remove(path);
}

TEST_CASE("csv and png writers emit files") {
  ComplexGrid g({0.0, 0.0}, 0.5, 8, 8);
  g.fill([](Complex z) { return std::exp(-std::norm(z)) * Complex(1.0, 0.0); });
  auto dir = std::filesystem::temp_directory_path();
  auto csv = (dir / "wander_io_test.csv").string();
  auto png = (dir / "wander_io_test.png").string();
  io::write_grid_csv(csv, g);
  io::write_grid_png(png, g, -6.0, 0.0);
  std::string head = io::read_file(csv).substr(0, 9);
  CHECK(head == "i,j,re,im");
  CHECK(std::filesystem::file_size(png) > 100);
  auto meta = io::read_json(png + ".json");
  CHECK(meta["log10_clamp"][0] == -6.0);
  for (auto p : {csv, png, png + ".json"}) std::filesystem::remove(p);
}
