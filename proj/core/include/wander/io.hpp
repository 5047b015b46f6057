#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "wander/grid.hpp"
#include "wander/types.hpp"

namespace wander::io {

using Json = nlohmann::ordered_json;

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);
Json read_json(const std::string& path);
void write_json(const std::string& path, const Json& j);

// Shortest round-trippable decimal; keeps runs byte-identical across thread
// counts.
std::string fmt_double(double v);

// One row per cell: i,j,re,im.
void write_grid_csv(const std::string& path, const ComplexGrid& g);

// Little-endian binary: five f64 header words nx, ny, origin_re, origin_im,
// spacing, then row-major re,im pairs.
void write_grid_binary(const std::string& path, const ComplexGrid& g);
ComplexGrid read_grid_binary(const std::string& path);

// |values| rendered on a log10 color ramp, clamped to [lo_exp, hi_exp]; the
// clamp window lands in a sidecar json next to the image.
void write_grid_png(const std::string& path, const ComplexGrid& g, double lo_exp, double hi_exp);

// 8-bit RGB raster, row 0 at the bottom.
void write_rgb_png(const std::string& path, int width, int height,
                   const std::vector<unsigned char>& rgb);

}  // namespace wander::io
