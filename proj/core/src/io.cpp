#include "wander/io.hpp"

#include <png.h>

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace wander::io {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(bool(in), "cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(bool(out), "cannot open for writing: " + path);
  out << text;
  require(bool(out), "write failed: " + path);
}

Json read_json(const std::string& path) { return Json::parse(read_file(path)); }

void write_json(const std::string& path, const Json& j) { write_file(path, j.dump(2) + "\n"); }

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_grid_csv(const std::string& path, const ComplexGrid& g) {
  std::ostringstream ss;
  ss << "i,j,re,im\n";
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      Complex v = g.at(i, j);
      ss << i << ',' << j << ',' << fmt_double(v.real()) << ',' << fmt_double(v.imag()) << '\n';
    }
  write_file(path, ss.str());
}

namespace {

void put_f64_le(std::string& out, double v) {
  unsigned char b[8];
  std::memcpy(b, &v, 8);
  // Host is little endian on every target we build for; keep the assert cheap.
  static_assert(sizeof(double) == 8);
  out.append(reinterpret_cast<char*>(b), 8);
}

double take_f64_le(const std::string& s, std::size_t off) {
  double v;
  std::memcpy(&v, s.data() + off, 8);
  return v;
}

}  // namespace

void write_grid_binary(const std::string& path, const ComplexGrid& g) {
  std::string out;
  out.reserve(40 + g.size() * 16);
  put_f64_le(out, double(g.nx()));
  put_f64_le(out, double(g.ny()));
  put_f64_le(out, g.origin().real());
  put_f64_le(out, g.origin().imag());
  put_f64_le(out, g.spacing());
  for (const auto& v : g.data()) {
    put_f64_le(out, v.real());
    put_f64_le(out, v.imag());
  }
  write_file(path, out);
}

ComplexGrid read_grid_binary(const std::string& path) {
  std::string s = read_file(path);
  require(s.size() >= 40, "grid file truncated: " + path);
  int nx = int(take_f64_le(s, 0));
  int ny = int(take_f64_le(s, 8));
  Complex origin(take_f64_le(s, 16), take_f64_le(s, 24));
  double spacing = take_f64_le(s, 32);
  require(nx > 0 && ny > 0 && spacing > 0, "grid file header invalid: " + path);
  require(s.size() == 40 + std::size_t(nx) * ny * 16, "grid file size mismatch: " + path);
  ComplexGrid g(origin, spacing, nx, ny);
  std::size_t off = 40;
  for (auto& v : g.data()) {
    v = Complex(take_f64_le(s, off), take_f64_le(s, off + 8));
    off += 16;
  }
  return g;
}

void write_rgb_png(const std::string& path, int width, int height,
                   const std::vector<unsigned char>& rgb) {
  require(rgb.size() == std::size_t(width) * height * 3, "rgb buffer size mismatch");
  FILE* fp = std::fopen(path.c_str(), "wb");
  require(fp != nullptr, "cannot open for writing: " + path);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    throw std::runtime_error("png write failed: " + path);
  }
  png_init_io(png, fp);
  png_set_IHDR(png, info, png_uint_32(width), png_uint_32(height), 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int row = 0; row < height; ++row) {
    // Flip so grid row 0 (smallest imaginary part) lands at the image bottom.
    const unsigned char* src = rgb.data() + std::size_t(height - 1 - row) * width * 3;
    png_write_row(png, const_cast<png_bytep>(src));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(fp);
}

namespace {

// Dark-to-warm ramp; u in [0,1].
void ramp(double u, unsigned char* px) {
  u = std::clamp(u, 0.0, 1.0);
  double r = std::clamp(3.0 * u - 0.6, 0.0, 1.0);
  double g = std::clamp(2.2 * u * u, 0.0, 1.0);
  double b = std::clamp(0.35 + 1.4 * u - 1.6 * u * u, 0.0, 1.0);
  px[0] = static_cast<unsigned char>(255.0 * r);
  px[1] = static_cast<unsigned char>(255.0 * g);
  px[2] = static_cast<unsigned char>(255.0 * b);
}

}  // namespace

void write_grid_png(const std::string& path, const ComplexGrid& g, double lo_exp, double hi_exp) {
  require(hi_exp > lo_exp, "log clamp window must be increasing");
  std::vector<unsigned char> rgb(std::size_t(g.nx()) * g.ny() * 3);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      double mag = std::abs(g.at(i, j));
      double e = mag > 0 ? std::log10(mag) : lo_exp;
      double u = (std::clamp(e, lo_exp, hi_exp) - lo_exp) / (hi_exp - lo_exp);
      ramp(u, rgb.data() + (std::size_t(j) * g.nx() + i) * 3);
    }
  write_rgb_png(path, g.nx(), g.ny(), rgb);
  Json meta;
  meta["kind"] = "log10-magnitude heat map";
  meta["log10_clamp"] = {lo_exp, hi_exp};
  meta["nx"] = g.nx();
  meta["ny"] = g.ny();
  meta["origin"] = {g.origin().real(), g.origin().imag()};
  meta["spacing"] = g.spacing();
  write_json(path + ".json", meta);
}

}  // namespace wander::io
