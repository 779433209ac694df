#pragma once

#include <optional>
#include <vector>

#include "jpe/ellipse.hpp"
#include "jpe/grid.hpp"
#include "jpe/symbols.hpp"

namespace jpe {

// Partition of the plane induced by the symbol ellipses: E0 outside all,
// E1/Em1 inside all (clockwise resp. counter-clockwise everywhere), E the
// rest. Boundary points belong to E in the partition but are tracked
// separately so grid renderings can show the curves.
enum class RegionLabel { E0, E, E1, Em1, OnBoundary };

struct IndexClass {
  // kappa set: the index every symbol ellipse reports at this point, when the
  // region determines one. kappa unset: the point certifiably lies in the
  // spectrum (E region) or on a boundary.
  std::optional<int> kappa;
  static IndexClass Kappa(int k) { return IndexClass{k}; }
  static IndexClass NotFredholmCandidate() { return IndexClass{}; }
};

struct RegionMap {
  ComplexGrid grid;
  std::vector<RegionLabel> labels;  // nx*ny, row-major from y0
};

// All |U|*|V|*|W| ellipses of the triple.
std::vector<OrientedEllipse> symbol_ellipses(const SymbolTriple& triple);

RegionLabel classify_region(const SymbolTriple& triple, cplx lambda,
                            double tol = kEllipseTol);

IndexClass kappa_at(const SymbolTriple& triple, cplx lambda);

RegionMap region_map(const SymbolTriple& triple, const ComplexGrid& grid,
                     unsigned threads = 0);

// False guarantees lambda is outside every spectrum over the triple.
bool upper_bound_contains(const SymbolTriple& triple, cplx lambda);

// sigma_estimate united with the grid points labelled E1/Em1: the grid
// approximation of the semi-infinite spectrum.
std::vector<cplx> gap_compose(const std::vector<cplx>& sigma_estimate,
                              const SymbolTriple& triple,
                              const ComplexGrid& grid);

struct BidiagonalSpectra {
  ComplexGrid grid;
  std::vector<std::uint8_t> sigma_mask;       // the bi-infinite spectrum
  std::vector<std::uint8_t> sigma_plus_mask;  // the semi-infinite spectrum
  std::vector<cplx> sigma_points() const;
  std::vector<cplx> sigma_plus_points() const;
};

// Exact grid masks for the bidiagonal case (U = {0} or W = {0}).
BidiagonalSpectra bidiagonal_spectra(const SymbolTriple& triple,
                                     const ComplexGrid& grid);

// Convex hull of sampled ellipse boundaries: contains every spectrum over the
// triple (within sampling resolution). CCW polygon; may degenerate to a
// segment or point.
std::vector<cplx> hull_bound(const SymbolTriple& triple,
                             int samples_per_ellipse = 512);

// Euclidean distance from z to the hull polygon (0 inside).
double dist_to_hull(const std::vector<cplx>& hull, cplx z);

}  // namespace jpe
