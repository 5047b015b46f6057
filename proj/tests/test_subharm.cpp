#include "wander/subharm.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

#include "doctest.h"
#include "wander/region.hpp"

using namespace wander;
namespace sh = wander::subharm;

namespace {

double fd_lap(const std::function<double(Complex)>& f, Complex z, double h) {
  return (f(z + Complex(h, 0)) + f(z - Complex(h, 0)) + f(z + Complex(0, h)) +
          f(z - Complex(0, h)) - 4.0 * f(z)) /
         (h * h);
}

RegionPtr disk_region(Complex c, double r) {
  return std::make_shared<DiskRegion>(Disk{c, r});
}

RegionPtr outside_disk(Complex c, double r) {
  return std::make_shared<ComplementOfDisks>(std::vector<Disk>{{c, r}}, 4.0);
}

}  // namespace

TEST_CASE("exp field laplacian matches finite differences") {
  auto f = sh::exp_radial(0.2);
  auto val = [&](Complex z) { return f->value(z); };
  for (double r : {0.4, 0.9, 1.3}) {
    double closed = std::exp(r / 0.2) * (25.0 + 5.0 / r);
    CHECK(fd_lap(val, {r, 0.0}, 1e-4) == doctest::Approx(closed).epsilon(1e-5));
    // radius-zero interval pins the closed form itself
    CHECK(f->lap_lower({{r, 0.0}, 1e-14}) == doctest::Approx(closed).epsilon(1e-9));
  }
}

TEST_CASE("exp field disk infimum picks the right branch") {
  auto f = sh::exp_radial(0.2);
  // interval [1.16, 1.24] sits on the increasing branch: inner edge wins
  CHECK(f->lap_lower({{1.2, 0.0}, 0.04}) == doctest::Approx(9681.194).epsilon(1e-6));
  // interval [0.04, 0.08] is decreasing: outer edge wins
  CHECK(f->lap_lower({{0.06, 0.0}, 0.02}) ==
        doctest::Approx(std::exp(0.4) * (25.0 + 5.0 / 0.08)).epsilon(1e-12));
  // straddling the argmin: the interior minimum wins
  double rstar = 0.2 * 0.61803398874989484820;
  double at_star = std::exp(rstar / 0.2) * (25.0 + 5.0 / rstar);
  CHECK(f->lap_lower({{rstar, 0.0}, 0.05}) == doctest::Approx(at_star).epsilon(1e-12));
  CHECK(f->lap_lower({{rstar, 0.0}, 0.05}) == doctest::Approx(121.4295).epsilon(1e-4));
  // lower-bound property against finite differences across the disk
  auto val = [&](Complex z) { return f->value(z); };
  double m = f->lap_lower({{1.2, 0.3}, 0.1});
  for (int j = 0; j < 16; ++j) {
    Complex z = Complex(1.2, 0.3) + std::polar(0.1, kTwoPi * j / 16);
    CHECK(fd_lap(val, z, 1e-4) >= m * (1.0 - 1e-5));
  }
}

TEST_CASE("power field infimum sits at the far edge") {
  auto f = sh::power_radial(0.5);
  CHECK(f->value({4.0, 0.0}) == doctest::Approx(2.0));
  CHECK(f->lap_lower({{3.0, 0.0}, 1.0}) == doctest::Approx(0.25 * std::pow(4.0, -1.5)));
  auto val = [&](Complex z) { return f->value(z); };
  CHECK(fd_lap(val, {2.0, 1.0}, 1e-5) ==
        doctest::Approx(0.25 * std::pow(std::abs(Complex(2.0, 1.0)), -1.5)).epsilon(1e-4));
}

TEST_CASE("shifted power laplacian and guarded bounds") {
  auto f = sh::shifted_power(20.0, 0.5, 5.0);
  CHECK(f->value({9.0, 0.0}) == doctest::Approx(40.0));
  auto val = [&](Complex z) { return f->value(z); };
  double closed = 10.0 * std::pow(7.0, -1.5) * (0.5 - 5.0 / 12.0);
  CHECK(closed == doctest::Approx(0.04499575).epsilon(1e-5));
  CHECK(fd_lap(val, {12.0, 0.0}, 1e-4) == doctest::Approx(closed).epsilon(1e-3));
  // positive branch: both factor minima multiply
  CHECK(f->lap_lower({{12.0, 0.0}, 1.0}) == doctest::Approx(0.02008827).epsilon(1e-5));
  // close to the rim the field is not subharmonic and the bound goes negative
  CHECK(f->lap_lower({{5.5, 0.0}, 0.2}) < 0.0);
  CHECK_THROWS_AS((void)f->lap_lower({{5.5, 0.0}, 1.0}), std::runtime_error);
  CHECK_THROWS_AS((void)f->value({3.0, 0.0}), std::runtime_error);
}

TEST_CASE("log and gauge fields are harmonic") {
  auto f = sh::log_radial(2.0, 1.5);
  CHECK(f->value({3.0, 0.0}) == doctest::Approx(2.0 * std::log(2.0)));
  CHECK(f->lap_lower({{3.0, 0.0}, 0.5}) == 0.0);
  auto g = sh::log_gauge([](Complex z) { return std::log(std::abs(z - Complex(3.0, 0.0))); }, 1.0,
                         0.0, "pole at 3");
  auto gv = [&](Complex z) { return g->value(z); };
  // harmonic means the circle mean equals the center value
  auto mean = sh::mean_on_circle(gv, {0.0, 0.0}, 1.0);
  CHECK(mean.value == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  auto mx = sh::max_on_circle(gv, {0.0, 0.0}, 1.0);
  CHECK(mx.value == doctest::Approx(std::log(4.0)).epsilon(1e-12));
}

TEST_CASE("weight takes the max over covering pieces") {
  sh::Weight w;
  w.add_piece(disk_region({0.0, 0.0}, 1.0), sh::constant(2.0));
  w.add_piece(disk_region({1.0, 0.0}, 1.0), sh::constant(3.0));
  CHECK(w.value({0.5, 0.0}) == 3.0);   // overlap picks the larger
  CHECK(w.value({-0.5, 0.0}) == 2.0);  // only the first piece
  CHECK(w.covers({1.9, 0.0}));
  CHECK(!w.covers({3.0, 0.0}));
  CHECK_THROWS_AS((void)w.value({3.0, 0.0}), std::runtime_error);
}

TEST_CASE("weight laplacian bound only consults pieces meeting the disk") {
  sh::Weight w;
  w.add_piece(disk_region({0.0, 0.0}, 1.0), sh::quadratic());
  w.add_piece(outside_disk({0.0, 0.0}, 3.0), sh::exp_radial(0.2));
  CHECK(w.lap_lower({{0.2, 0.1}, 0.3}) == 4.0);
  // near the quadratic rim but not reaching the ring piece
  CHECK(w.lap_lower({{1.05, 0.0}, 0.1}) == 4.0);
  CHECK_THROWS_AS((void)w.lap_lower({{2.0, 0.0}, 0.3}), std::runtime_error);
}

TEST_CASE("well in a quadratic weight reproduces the log profile") {
  sh::Weight w;
  w.add_piece(disk_region({0.0, 0.0}, 2.0), sh::quadratic());
  auto rec = w.apply_puncture({{0.0, 0.0}, 1.0});
  CHECK(rec.mass == doctest::Approx(4.0));
  CHECK(rec.coefficient == doctest::Approx(1.0));
  // punctured |z|^2 with unit disk well collapses to 1 + log|z|
  CHECK(w.value({0.5, 0.0}) == doctest::Approx(1.0 + std::log(0.5)).epsilon(1e-14));
  CHECK(w.value({0.0, 0.3}) == doctest::Approx(1.0 + std::log(0.3)).epsilon(1e-14));
  CHECK(w.value({1.0, 0.0}) == doctest::Approx(1.0));
  CHECK(w.value({1.5, 0.0}) == doctest::Approx(2.25));  // outside the well
  CHECK(w.value({0.0, 0.0}) == -std::numeric_limits<double>::infinity());
  CHECK(w.base_value({0.5, 0.0}) == doctest::Approx(0.25));
  // budget accounting: a fresh probe of the same disk now sees mass spent
  CHECK(w.lap_lower({{0.5, 0.0}, 0.1}) == doctest::Approx(0.0));
  CHECK_THROWS_AS((void)w.apply_puncture({{0.5, 0.0}, 0.6}), std::runtime_error);  // overlap
  CHECK_THROWS_AS((void)w.apply_puncture({{0.0, 1.9}, 0.5}), std::runtime_error);  // rim uncovered
}

TEST_CASE("well drop certificate at the frozen example") {
  sh::Weight w;
  w.add_piece(disk_region({0.0, 0.0}, 2.0), sh::quadratic());
  w.apply_puncture({{0.0, 0.0}, 1.0});
  auto cert = sh::certify_well_drop(w, 0, std::exp(-2.0));
  CHECK(cert.measured == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(cert.bound == doctest::Approx(0.0));
  CHECK(cert.pass);
  auto deeper = sh::certify_well_drop(w, 0, std::exp(-4.0));
  CHECK(deeper.measured == doctest::Approx(-3.0).epsilon(1e-12));
  CHECK(deeper.bound == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(deeper.pass);
  CHECK_THROWS_AS((void)sh::certify_well_drop(w, 0, 0.2), std::runtime_error);
}

TEST_CASE("glued ring weight certifies both interface directions") {
  // exp core against the log tail, interfaces at 1.4 and 1.6 for eta = 1/5
  double big_c = 10.0 * std::exp(8.0);
  sh::Weight w;
  w.add_piece(disk_region({0.0, 0.0}, 1.6), sh::exp_radial(0.2));
  w.add_piece(outside_disk({0.0, 0.0}, 1.4), sh::log_radial(big_c, 1.4));
  auto out_over_in = sh::check_glue_interface(w, 1, 0);
  CHECK(out_over_in.pass);
  CHECK(out_over_in.samples == 1024);
  CHECK(out_over_in.worst_margin == doctest::Approx(999.556).epsilon(1e-4));
  auto in_over_out = sh::check_glue_interface(w, 0, 1);
  CHECK(in_over_out.pass);
  CHECK(in_over_out.worst_margin == doctest::Approx(std::exp(7.0)).epsilon(1e-12));
  // frozen interface values themselves
  CHECK(w.value({1.6, 0.0}) == doctest::Approx(big_c * std::log(1.6 / 1.4)).epsilon(1e-12));
  CHECK(w.value({1.6, 0.0}) == doctest::Approx(3980.514).epsilon(1e-4));
  CHECK(std::exp(8.0) == doctest::Approx(2980.958).epsilon(1e-6));
}

TEST_CASE("glue check flags pieces with no shared interface") {
  sh::Weight w;
  w.add_piece(disk_region({0.0, 0.0}, 1.0), sh::constant(1.0));
  w.add_piece(disk_region({5.0, 0.0}, 1.0), sh::constant(1.0));
  auto rep = sh::check_glue_interface(w, 0, 1);
  CHECK(!rep.pass);
  CHECK(rep.samples == 0);
}

TEST_CASE("glued punctured weight passes the sub mean value test") {
  double big_c = 10.0 * std::exp(8.0);
  sh::Weight w;
  w.add_piece(disk_region({0.0, 0.0}, 1.6), sh::exp_radial(0.2));
  w.add_piece(outside_disk({0.0, 0.0}, 1.4), sh::log_radial(big_c, 1.4));
  w.apply_puncture({{0.5, 0.0}, 0.04});
  auto val = [&](Complex z) { return w.value(z); };
  std::vector<Complex> pts = {{0.2, 0.0}, {0.52, 0.02}, {0.545, 0.0}, {1.45, 0.3}, {2.5, 0.0}};
  auto rep = sh::check_submean(val, pts, {0.01, 0.003}, 1e-8);
  CHECK(rep.tested == 10);
  CHECK(rep.pass);
  CHECK(rep.worst_gap <= 1e-8);
}

TEST_CASE("sub mean value test flags a superharmonic bump") {
  auto bad = [](Complex z) { return -std::norm(z); };
  auto rep = sh::check_submean(bad, {{0.5, 0.0}}, {0.1}, 1e-8);
  CHECK(!rep.pass);
  CHECK(rep.violations.size() == 1);
  CHECK(rep.worst_gap == doctest::Approx(0.01).epsilon(1e-9));
}

TEST_CASE("circle max lands on lattice aligned extrema") {
  auto f = sh::exp_radial(0.2);
  auto val = [&](Complex z) { return f->value(z); };
  auto st = sh::max_on_circle(val, {0.5, 0.0}, 0.2);
  CHECK(st.value == doctest::Approx(std::exp(3.5)).epsilon(1e-9));
  auto st2 = sh::max_on_circle(val, {0.0, 0.3}, 0.1);
  CHECK(st2.value == doctest::Approx(std::exp(2.0)).epsilon(1e-9));
}

TEST_CASE("complement region flips containment and measures rim distance") {
  auto inner = std::make_shared<PolylineRegion>(PolylineRegion::from_curve(
      BoundaryCurve::circle({0.0, 0.0}, 1.0), 2048));
  ComplementRegion comp(inner, 2.0);
  CHECK(comp.contains({1.5, 0.0}));
  CHECK(!comp.contains({0.5, 0.0}));
  CHECK(comp.dist({1.5, 0.0}) == 0.0);
  CHECK(comp.dist({0.5, 0.0}) == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(comp.dist_dir({0.5, 0.0}).real() == doctest::Approx(-1.0).epsilon(1e-4));
  CHECK(comp.boundary_samples(64).size() == 64);
}

TEST_CASE("weight description records pieces and wells") {
  sh::Weight w;
  w.add_piece(disk_region({0.0, 0.0}, 2.0), sh::quadratic());
  w.apply_puncture({{0.5, 0.0}, 0.1});
  auto j = w.describe();
  CHECK(j["pieces"].size() == 1);
  CHECK(j["pieces"][0]["kind"] == "quadratic");
  CHECK(j["punctures"].size() == 1);
  CHECK(j["punctures"][0]["mass"].get<double>() == doctest::Approx(4.0));
}
