#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "jpe/pseudospec.hpp"
#include "jpe/regions.hpp"

namespace jpe {

// Binary netpbm serializers. Headers are exactly "P5\nW H\n255\n" (PGM),
// "P6\nW H\n255\n" (PPM) and "P4\nW H\n" (PBM, rows padded to whole bytes).
// Rasters are written top row first, i.e. the grid's y-axis is flipped so
// increasing y points up in the image.
std::string pgm_bytes(int width, int height,
                      const std::vector<std::uint8_t>& gray);
std::string ppm_bytes(int width, int height,
                      const std::vector<std::uint8_t>& rgb);
std::string pbm_bytes(int width, int height,
                      const std::vector<std::uint8_t>& bits);

// Fixed region palette: E0 white (255,255,255), E light gray (200,200,200),
// E1 dark gray (70,70,70), Em1 dark blue (40,40,120), boundary black (0,0,0).
std::array<std::uint8_t, 3> region_color(RegionLabel label);

std::string region_map_ppm(const RegionMap& map);

// log10-scaled field raster; +infinity renders as the maximum finite value.
std::string field_pgm(const ResolventField& field);

std::string mask_pbm(const ComplexGrid& grid,
                     const std::vector<std::uint8_t>& mask);

}  // namespace jpe
