#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "jpe/grid.hpp"
#include "jpe/regions.hpp"
#include "jpe/symbols.hpp"
#include "jpe/tridiag.hpp"

namespace jpe {

// Resolvent norms ||(A_n - lambda)^{-1}|| over a grid, +infinity where the
// truncation is singular.
struct ResolventField {
  ComplexGrid grid;
  std::vector<double> values;
  std::vector<std::uint8_t> certified_lower;  // per point: only a lower bound
  int n = 0;
  NormKind kind = NormKind::P2;
  std::uint64_t seed = 0;
  std::string triple;
};

ResolventField resolvent_field(const DiagonalStream& stream, int n,
                               const ComplexGrid& grid, NormKind kind,
                               unsigned threads = 0);

// Grid shadow of the eps-pseudospectrum: value > 1/eps (strict by default,
// matching the open definition; `closed` switches to >=).
struct EpsSet {
  ComplexGrid grid;
  double eps = 0;
  bool closed = false;
  std::vector<std::uint8_t> membership;

  std::size_t count() const;
  std::vector<cplx> points() const;
};

EpsSet eps_set(const ResolventField& field, double eps, bool closed = false);

struct EmptySet : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Exact discrete Hausdorff distance between finite point sets.
double hausdorff(std::span<const cplx> a, std::span<const cplx> b);

// Euclidean distance from every grid cell to the nearest set cell (exact on
// the lattice, Felzenszwalb's transform per axis). +infinity when mask is
// empty.
std::vector<double> distance_transform(const ComplexGrid& grid,
                                       const std::vector<std::uint8_t>& mask);

// Hausdorff distance between two grid masks via distance transforms.
double hausdorff_masks(const ComplexGrid& grid,
                       const std::vector<std::uint8_t>& a,
                       const std::vector<std::uint8_t>& b);

// Tolerance for comparing a finite-n field value against the estimated limit
// field in convergence_sweep.
constexpr double kLimitSlack = 0.05;

struct ConvergenceReport {
  std::vector<int> sizes;
  std::vector<std::size_t> counts;  // membership count per size
  std::vector<double> consecutive_hausdorff;
  std::size_t inclusion_violations = 0;
  bool counts_nondecreasing = false;  // within boundary-cell slack
  std::vector<double> limit_values;   // field at the largest size
};

// spec_eps A_n grows toward spec_eps A_+ at p = 2: computes the eps-set per
// size and reports inclusion violations, membership growth and consecutive
// Hausdorff distances.
ConvergenceReport convergence_sweep(const DiagonalStream& stream,
                                    const ComplexGrid& grid, double eps,
                                    std::span<const int> sizes,
                                    unsigned threads = 0);

struct SandwichReport {
  std::size_t inner_misses = 0;      // E_union (+ eps, eroded a cell) not hit
  std::size_t outer_violations = 0;  // members beyond conv hull + eps + cell
  std::size_t members = 0;
  bool outer_ok() const { return outer_violations == 0; }
};

// Grid check of E_union + eps*D  subset  spec_eps^2  subset  conv(E_union) +
// eps*D, with one grid cell of slack on both inclusions. The outer inclusion
// holds at every n; inner misses measure finite-n undershoot.
SandwichReport sandwich_check(const SymbolTriple& triple,
                              const ResolventField& field, double eps);

}  // namespace jpe
