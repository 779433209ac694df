#include "jpe/raster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace jpe {

namespace {

std::string header(const char* magic, int width, int height, bool maxval) {
  std::string h = magic;
  h += '\n';
  h += std::to_string(width);
  h += ' ';
  h += std::to_string(height);
  h += '\n';
  if (maxval) h += "255\n";
  return h;
}

// Grid row iy maps to image row height-1-iy (y up).
std::size_t flip(int ix, int iy, int width, int height) {
  return static_cast<std::size_t>(height - 1 - iy) * width + ix;
}

}  // namespace

std::string pgm_bytes(int width, int height,
                      const std::vector<std::uint8_t>& gray) {
  if (gray.size() != static_cast<std::size_t>(width) * height)
    throw std::invalid_argument("pgm_bytes: size mismatch");
  std::string out = header("P5", width, height, true);
  out.append(reinterpret_cast<const char*>(gray.data()), gray.size());
  return out;
}

std::string ppm_bytes(int width, int height,
                      const std::vector<std::uint8_t>& rgb) {
  if (rgb.size() != static_cast<std::size_t>(width) * height * 3)
    throw std::invalid_argument("ppm_bytes: size mismatch");
  std::string out = header("P6", width, height, true);
  out.append(reinterpret_cast<const char*>(rgb.data()), rgb.size());
  return out;
}

std::string pbm_bytes(int width, int height,
                      const std::vector<std::uint8_t>& bits) {
  if (bits.size() != static_cast<std::size_t>(width) * height)
    throw std::invalid_argument("pbm_bytes: size mismatch");
  std::string out = header("P4", width, height, false);
  int row_bytes = (width + 7) / 8;
  for (int r = 0; r < height; ++r) {
    for (int b = 0; b < row_bytes; ++b) {
      std::uint8_t byte = 0;
      for (int k = 0; k < 8; ++k) {
        int c = b * 8 + k;
        if (c < width && bits[static_cast<std::size_t>(r) * width + c])
          byte |= static_cast<std::uint8_t>(0x80 >> k);
      }
      out += static_cast<char>(byte);
    }
  }
  return out;
}

std::array<std::uint8_t, 3> region_color(RegionLabel label) {
  switch (label) {
    case RegionLabel::E0:
      return {255, 255, 255};
    case RegionLabel::E:
      return {200, 200, 200};
    case RegionLabel::E1:
      return {70, 70, 70};
    case RegionLabel::Em1:
      return {40, 40, 120};
    default:
      return {0, 0, 0};
  }
}

std::string region_map_ppm(const RegionMap& map) {
  int w = map.grid.nx, h = map.grid.ny;
  std::vector<std::uint8_t> rgb(static_cast<std::size_t>(w) * h * 3);
  for (int iy = 0; iy < h; ++iy)
    for (int ix = 0; ix < w; ++ix) {
      auto c = region_color(map.labels[static_cast<std::size_t>(iy) * w + ix]);
      std::size_t o = flip(ix, iy, w, h) * 3;
      rgb[o] = c[0];
      rgb[o + 1] = c[1];
      rgb[o + 2] = c[2];
    }
  return ppm_bytes(w, h, rgb);
}

std::string field_pgm(const ResolventField& field) {
  int w = field.grid.nx, h = field.grid.ny;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (double v : field.values)
    if (std::isfinite(v) && v > 0) {
      lo = std::min(lo, std::log10(v));
      hi = std::max(hi, std::log10(v));
    }
  if (!(hi > lo)) {
    lo = 0;
    hi = 1;
  }
  std::vector<std::uint8_t> gray(static_cast<std::size_t>(w) * h, 0);
  for (int iy = 0; iy < h; ++iy)
    for (int ix = 0; ix < w; ++ix) {
      double v = field.values[static_cast<std::size_t>(iy) * w + ix];
      double t;
      if (!std::isfinite(v))
        t = 1.0;  // singular points render as the brightest finite level
      else if (v <= 0)
        t = 0.0;
      else
        t = (std::log10(v) - lo) / (hi - lo);
      gray[flip(ix, iy, w, h)] =
          static_cast<std::uint8_t>(std::lround(255 * std::clamp(t, 0.0, 1.0)));
    }
  return pgm_bytes(w, h, gray);
}

std::string mask_pbm(const ComplexGrid& grid,
                     const std::vector<std::uint8_t>& mask) {
  int w = grid.nx, h = grid.ny;
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(w) * h);
  for (int iy = 0; iy < h; ++iy)
    for (int ix = 0; ix < w; ++ix)
      bits[flip(ix, iy, w, h)] =
          mask[static_cast<std::size_t>(iy) * w + ix] ? 1 : 0;
  return pbm_bytes(w, h, bits);
}

}  // namespace jpe
