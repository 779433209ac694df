#include "jpe/pseudospec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace jpe {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

ResolventField resolvent_field(const DiagonalStream& stream, int n,
                               const ComplexGrid& grid, NormKind kind,
                               unsigned threads) {
  if (n < 1) throw std::invalid_argument("resolvent_field: n must be >= 1");
  ResolventField f;
  f.grid = grid;
  f.values.resize(grid.size());
  f.certified_lower.assign(grid.size(), 0);
  f.n = n;
  f.kind = kind;
  f.seed = stream.seed();
  f.triple = stream.triple().to_string();

  FiniteJacobi J = window(stream, 1, n);
  parallel_for(
      grid.size(),
      [&](std::size_t i) {
        NormEstimate est = inv_norm(shift_lambda(J, grid.point(i)), kind);
        f.values[i] = est.value;
        f.certified_lower[i] = est.certified_lower;
      },
      threads);
  return f;
}

std::size_t EpsSet::count() const {
  return static_cast<std::size_t>(
      std::count(membership.begin(), membership.end(), std::uint8_t(1)));
}

std::vector<cplx> EpsSet::points() const {
  std::vector<cplx> pts;
  for (std::size_t i = 0; i < membership.size(); ++i)
    if (membership[i]) pts.push_back(grid.point(i));
  return pts;
}

EpsSet eps_set(const ResolventField& field, double eps, bool closed) {
  if (!(eps > 0)) throw std::invalid_argument("eps_set: eps must be > 0");
  EpsSet s;
  s.grid = field.grid;
  s.eps = eps;
  s.closed = closed;
  s.membership.resize(field.values.size());
  double thr = 1.0 / eps;
  for (std::size_t i = 0; i < field.values.size(); ++i)
    s.membership[i] =
        closed ? field.values[i] >= thr : field.values[i] > thr;
  return s;
}

double hausdorff(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.empty() || b.empty())
    throw EmptySet("hausdorff: both sets must be non-empty");
  auto one_sided = [](std::span<const cplx> from, std::span<const cplx> to) {
    double worst = 0;
    for (cplx p : from) {
      double best = kInf;
      for (cplx q : to) best = std::min(best, std::abs(p - q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(one_sided(a, b), one_sided(b, a));
}

namespace {

// 1D squared-distance transform over samples at positions k*h
// (Felzenszwalb-Huttenlocher lower envelope of parabolas).
void dt1d(const double* f, double* d, int* v, double* z, int n, double h) {
  int q0 = 0;
  while (q0 < n && f[q0] == kInf) ++q0;
  if (q0 == n) {
    std::fill(d, d + n, kInf);
    return;
  }
  auto intersect = [&](int p, int q) {
    double xp = p * h, xq = q * h;
    return ((f[q] + xq * xq) - (f[p] + xp * xp)) / (2 * (xq - xp));
  };
  int k = 0;
  v[0] = q0;
  z[0] = -kInf;
  z[1] = kInf;
  for (int q = q0 + 1; q < n; ++q) {
    if (f[q] == kInf) continue;
    double s = intersect(v[k], q);
    while (k > 0 && s <= z[k]) {
      --k;
      s = intersect(v[k], q);
    }
    if (k == 0 && s <= z[0]) {
      v[0] = q;
    } else {
      ++k;
      v[k] = q;
      z[k] = s;
    }
    z[k + 1] = kInf;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    double xq = q * h;
    while (z[k + 1] < xq) ++k;
    double dx = xq - v[k] * h;
    d[q] = dx * dx + f[v[k]];
  }
}

}  // namespace

std::vector<double> distance_transform(const ComplexGrid& grid,
                                       const std::vector<std::uint8_t>& mask) {
  int nx = grid.nx, ny = grid.ny;
  std::vector<double> g(grid.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = mask[i] ? 0.0 : kInf;

  int m = std::max(nx, ny);
  std::vector<double> f(m), d(m), z(m + 1);
  std::vector<int> v(m);

  // Columns (along y, spacing dy).
  for (int ix = 0; ix < nx; ++ix) {
    for (int iy = 0; iy < ny; ++iy) f[iy] = g[iy * std::size_t(nx) + ix];
    dt1d(f.data(), d.data(), v.data(), z.data(), ny, grid.dy());
    for (int iy = 0; iy < ny; ++iy) g[iy * std::size_t(nx) + ix] = d[iy];
  }
  // Rows (along x, spacing dx).
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) f[ix] = g[iy * std::size_t(nx) + ix];
    dt1d(f.data(), d.data(), v.data(), z.data(), nx, grid.dx());
    for (int ix = 0; ix < nx; ++ix)
      g[iy * std::size_t(nx) + ix] = std::sqrt(d[ix]);
  }
  return g;
}

double hausdorff_masks(const ComplexGrid& grid,
                       const std::vector<std::uint8_t>& a,
                       const std::vector<std::uint8_t>& b) {
  bool a_empty = std::find(a.begin(), a.end(), std::uint8_t(1)) == a.end();
  bool b_empty = std::find(b.begin(), b.end(), std::uint8_t(1)) == b.end();
  if (a_empty || b_empty)
    throw EmptySet("hausdorff_masks: both masks must be non-empty");
  std::vector<double> da = distance_transform(grid, a);
  std::vector<double> db = distance_transform(grid, b);
  double worst = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i]) worst = std::max(worst, db[i]);
    if (b[i]) worst = std::max(worst, da[i]);
  }
  return worst;
}

ConvergenceReport convergence_sweep(const DiagonalStream& stream,
                                    const ComplexGrid& grid, double eps,
                                    std::span<const int> sizes,
                                    unsigned threads) {
  for (std::size_t i = 1; i < sizes.size(); ++i)
    if (sizes[i] <= sizes[i - 1])
      throw std::invalid_argument("convergence_sweep: sizes must increase");
  if (sizes.empty())
    throw std::invalid_argument("convergence_sweep: no sizes given");

  ConvergenceReport rep;
  rep.sizes.assign(sizes.begin(), sizes.end());

  std::vector<ResolventField> fields;
  fields.reserve(sizes.size());
  std::vector<EpsSet> sets;
  sets.reserve(sizes.size());
  for (int n : sizes) {
    fields.push_back(resolvent_field(stream, n, grid, NormKind::P2, threads));
    sets.push_back(eps_set(fields.back(), eps));
    rep.counts.push_back(sets.back().count());
  }
  rep.limit_values = fields.back().values;

  for (std::size_t s = 0; s + 1 < sizes.size(); ++s) {
    rep.inclusion_violations += [&] {
      std::size_t bad = 0;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        double vn = fields[s].values[i];
        double lim = rep.limit_values[i];
        if (sets[s].membership[i] && std::isfinite(vn) && std::isfinite(lim) &&
            vn > lim * (1.0 + kLimitSlack))
          ++bad;
      }
      return bad;
    }();
    try {
      rep.consecutive_hausdorff.push_back(
          hausdorff_masks(grid, sets[s].membership, sets[s + 1].membership));
    } catch (const EmptySet&) {
      rep.consecutive_hausdorff.push_back(kInf);
    }
  }

  std::size_t slack = 2 * (std::size_t(grid.nx) + grid.ny);
  rep.counts_nondecreasing = true;
  for (std::size_t s = 0; s + 1 < rep.counts.size(); ++s)
    if (rep.counts[s + 1] + slack < rep.counts[s])
      rep.counts_nondecreasing = false;
  return rep;
}

SandwichReport sandwich_check(const SymbolTriple& triple,
                              const ResolventField& field, double eps) {
  if (field.kind != NormKind::P2)
    throw std::invalid_argument("sandwich_check: field must be P2");
  if (!(eps > 0)) throw std::invalid_argument("sandwich_check: eps must be > 0");

  const ComplexGrid& grid = field.grid;
  double cell = std::max(grid.dx(), grid.dy());
  double thr = 1.0 / eps;

  std::vector<OrientedEllipse> ellipses = symbol_ellipses(triple);
  std::vector<std::vector<cplx>> boundaries;
  boundaries.reserve(ellipses.size());
  for (const OrientedEllipse& e : ellipses)
    boundaries.push_back(sample_boundary(e, 1024));
  std::vector<cplx> hull = hull_bound(triple);

  auto dist_to_union = [&](cplx z) {
    double best = kInf;
    for (std::size_t k = 0; k < ellipses.size(); ++k) {
      try {
        if (classify_point(ellipses[k], z) == PointClass::Interior) return 0.0;
      } catch (const OnCurveAmbiguity&) {
        return 0.0;
      }
      for (cplx q : boundaries[k]) best = std::min(best, std::abs(z - q));
    }
    return best;
  };

  SandwichReport rep;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    cplx z = grid.point(i);
    bool member = field.values[i] > thr;
    if (member) ++rep.members;
    if (!member && dist_to_union(z) <= eps - cell) ++rep.inner_misses;
    if (member && dist_to_hull(hull, z) > eps + cell) ++rep.outer_violations;
  }
  return rep;
}

}  // namespace jpe
