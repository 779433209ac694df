#include "jpe/regions.hpp"

#include <algorithm>
#include <cmath>

namespace jpe {

std::vector<OrientedEllipse> symbol_ellipses(const SymbolTriple& triple) {
  std::vector<OrientedEllipse> out;
  out.reserve(triple.U().size() * triple.V().size() * triple.W().size());
  for (cplx u : triple.U())
    for (cplx v : triple.V())
      for (cplx w : triple.W()) out.push_back(make_ellipse(u, v, w));
  return out;
}

RegionLabel classify_region(const SymbolTriple& triple, cplx lambda,
                            double tol) {
  bool all_exterior = true;
  bool all_interior = true;
  bool all_cw = true;
  bool all_ccw = true;
  for (cplx u : triple.U())
    for (cplx v : triple.V())
      for (cplx w : triple.W()) {
        OrientedEllipse e = make_ellipse(u, v, w);
        switch (classify_point(e, lambda, tol)) {
          case PointClass::OnCurve:
            return RegionLabel::OnBoundary;
          case PointClass::Exterior:
            all_interior = false;
            break;
          case PointClass::Interior:
            all_exterior = false;
            if (e.orientation == Orientation::Clockwise)
              all_ccw = false;
            else
              all_cw = false;
            break;
        }
      }
  if (all_exterior) return RegionLabel::E0;
  if (all_interior && all_cw) return RegionLabel::E1;
  if (all_interior && all_ccw) return RegionLabel::Em1;
  return RegionLabel::E;
}

IndexClass kappa_at(const SymbolTriple& triple, cplx lambda) {
  switch (classify_region(triple, lambda)) {
    case RegionLabel::E0:
      return IndexClass::Kappa(0);
    case RegionLabel::E1:
      return IndexClass::Kappa(1);
    case RegionLabel::Em1:
      return IndexClass::Kappa(-1);
    default:
      return IndexClass::NotFredholmCandidate();
  }
}

RegionMap region_map(const SymbolTriple& triple, const ComplexGrid& grid,
                     unsigned threads) {
  RegionMap map{grid, std::vector<RegionLabel>(grid.size())};
  parallel_for(
      grid.size(),
      [&](std::size_t i) {
        map.labels[i] = classify_region(triple, grid.point(i));
      },
      threads);
  return map;
}

bool upper_bound_contains(const SymbolTriple& triple, cplx lambda) {
  double d = std::numeric_limits<double>::infinity();
  for (cplx v : triple.V()) d = std::min(d, std::abs(lambda - v));
  return d <= triple.u_star_max() + triple.w_star_max();
}

std::vector<cplx> gap_compose(const std::vector<cplx>& sigma_estimate,
                              const SymbolTriple& triple,
                              const ComplexGrid& grid) {
  std::vector<cplx> out = sigma_estimate;
  RegionMap map = region_map(triple, grid);
  for (std::size_t i = 0; i < map.labels.size(); ++i)
    if (map.labels[i] == RegionLabel::E1 || map.labels[i] == RegionLabel::Em1)
      out.push_back(grid.point(i));
  // Drop exact duplicates introduced by the union.
  std::sort(out.begin(), out.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  out.erase(std::unique(out.begin(), out.end(),
                        [](cplx a, cplx b) {
                          return a.real() == b.real() && a.imag() == b.imag();
                        }),
            out.end());
  return out;
}

namespace {

std::vector<cplx> mask_points(const ComplexGrid& g,
                              const std::vector<std::uint8_t>& mask) {
  std::vector<cplx> pts;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) pts.push_back(g.point(i));
  return pts;
}

}  // namespace

std::vector<cplx> BidiagonalSpectra::sigma_points() const {
  return mask_points(grid, sigma_mask);
}
std::vector<cplx> BidiagonalSpectra::sigma_plus_points() const {
  return mask_points(grid, sigma_plus_mask);
}

BidiagonalSpectra bidiagonal_spectra(const SymbolTriple& triple,
                                     const ComplexGrid& grid) {
  bool u_zero = triple.U().size() == 1 && triple.U()[0] == cplx(0);
  bool w_zero = triple.W().size() == 1 && triple.W()[0] == cplx(0);
  if (!u_zero && !w_zero)
    throw std::invalid_argument(
        "bidiagonal_spectra: requires U = {0} or W = {0}");
  // With U = {0} the ellipses are circles v + wT; with W = {0} swap roles.
  double r_max = u_zero ? triple.w_star_max() : triple.u_star_max();
  double r_min = u_zero ? triple.w_star_min() : triple.u_star_min();

  BidiagonalSpectra out{grid, std::vector<std::uint8_t>(grid.size()),
                        std::vector<std::uint8_t>(grid.size())};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    cplx z = grid.point(i);
    bool in_union = false;   // some closed disk v + r_max*D contains z
    bool in_inter = true;    // every open disk v + r_min*D contains z
    for (cplx v : triple.V()) {
      double d = std::abs(z - v);
      if (d <= r_max) in_union = true;
      if (!(d < r_min)) in_inter = false;
    }
    out.sigma_plus_mask[i] = in_union;
    out.sigma_mask[i] = in_union && !in_inter;
  }
  return out;
}

std::vector<cplx> hull_bound(const SymbolTriple& triple,
                             int samples_per_ellipse) {
  std::vector<cplx> pts;
  for (const OrientedEllipse& e : symbol_ellipses(triple)) {
    auto b = sample_boundary(e, samples_per_ellipse);
    pts.insert(pts.end(), b.begin(), b.end());
  }
  // Andrew's monotone chain.
  std::sort(pts.begin(), pts.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](cplx a, cplx b) {
                          return a.real() == b.real() && a.imag() == b.imag();
                        }),
            pts.end());
  if (pts.size() <= 2) return pts;
  auto cross = [](cplx o, cplx a, cplx b) {
    return (a.real() - o.real()) * (b.imag() - o.imag()) -
           (a.imag() - o.imag()) * (b.real() - o.real());
  };
  std::vector<cplx> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

double dist_to_hull(const std::vector<cplx>& hull, cplx z) {
  if (hull.empty()) return std::numeric_limits<double>::infinity();
  if (hull.size() == 1) return std::abs(z - hull[0]);
  bool inside = hull.size() >= 3;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < hull.size(); ++i) {
    cplx a = hull[i], b = hull[(i + 1) % hull.size()];
    cplx ab = b - a;
    double len2 = std::norm(ab);
    double t = len2 > 0
                   ? std::clamp(((z - a) * std::conj(ab)).real() / len2, 0.0, 1.0)
                   : 0.0;
    best = std::min(best, std::abs(z - (a + t * ab)));
    double cr = (ab * std::conj(z - a)).imag();
    // CCW polygon: inside iff z is to the left of every edge.
    if (-cr < 0) inside = false;
  }
  return inside ? 0.0 : best;
}

}  // namespace jpe
