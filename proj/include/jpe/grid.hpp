#pragma once

#include <cstddef>
#include <stdexcept>

#include "jpe/util.hpp"

namespace jpe {

// Regular lattice over [x0,x1] x [y0,y1], endpoints included.
struct ComplexGrid {
  double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
  int nx = 0, ny = 0;

  ComplexGrid() = default;
  ComplexGrid(double x0_, double x1_, double y0_, double y1_, int nx_, int ny_)
      : x0(x0_), x1(x1_), y0(y0_), y1(y1_), nx(nx_), ny(ny_) {
    if (!(x0 < x1) || !(y0 < y1) || nx < 2 || ny < 2)
      throw std::invalid_argument("ComplexGrid: need x0<x1, y0<y1, nx,ny >= 2");
  }

  double dx() const { return (x1 - x0) / (nx - 1); }
  double dy() const { return (y1 - y0) / (ny - 1); }
  std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
  cplx point(int ix, int iy) const {
    return {x0 + ix * dx(), y0 + iy * dy()};
  }
  cplx point(std::size_t flat) const {
    return point(static_cast<int>(flat % nx), static_cast<int>(flat / nx));
  }
};

}  // namespace jpe
