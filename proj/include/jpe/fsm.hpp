#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "jpe/symbols.hpp"
#include "jpe/tridiag.hpp"

namespace jpe {

enum class Side { SemiInfinite, BiInfinite };

enum class FsmFailure { TruncationSingular, ProfileDiverging, NotConverged };

// Finitely supported right-hand side b : Z -> C.
struct Rhs {
  std::vector<std::pair<std::int64_t, cplx>> support;

  cplx at(std::int64_t j) const;
  // Sum of |b(j)| dropped when truncating to [lo, hi].
  double mass_outside(std::int64_t lo, std::int64_t hi) const;

  static Rhs unit(std::int64_t j) { return Rhs{{{j, cplx(1.0)}}}; }
};

struct Cutoff {
  std::int64_t lo = 0, hi = 0;
};

// Full cut-offs: (1, k*step) on the half axis, (-k*step, k*step) on the
// whole axis, k = 1..count.
std::vector<Cutoff> make_cutoffs(Side side, int count, std::int64_t step);

struct FsmProblem {
  DiagonalStream stream;
  Side side = Side::SemiInfinite;
  Rhs rhs;
  std::vector<Cutoff> cutoffs;
  // Row renumbering already applied to the system: solve (S^shift A) x =
  // S^shift b instead of A x = b. Solutions keep the original column
  // numbering. Set via cancel_index.
  int shift = 0;
};

// Throws std::invalid_argument when the cut-offs or the shift violate the
// problem invariants (semi-infinite windows frozen at lo = 1, lo
// nonincreasing, hi increasing, shift in {-1,0,+1} and 0 unless bi-infinite).
void validate(const FsmProblem& problem);

struct FsmSolution {
  std::int64_t lo = 0;        // column index of x.front()
  std::vector<cplx> x;
  cplx at(std::int64_t j) const {
    std::int64_t k = j - lo;
    return k >= 0 && k < static_cast<std::int64_t>(x.size()) ? x[k] : cplx(0);
  }
};

struct FsmReport {
  std::vector<FsmSolution> solutions;
  bool converged = false;
  double final_error_estimate = 0.0;
  std::vector<NormEstimate> stability_profile;
  std::optional<FsmFailure> failure_mode;
};

// Convergence detection: successive solutions must agree on the probe window
// |j| <= kProbeRadius to kProbeAtol for kProbeStreak consecutive cut-offs,
// with a bounded stability profile (last value < 2x median).
constexpr std::int64_t kProbeRadius = 20;
constexpr double kProbeAtol = 1e-8;
constexpr int kProbeStreak = 3;

FsmReport fsm_solve(const FsmProblem& problem);

// The problem for S^kappa A x = S^kappa b, kappa in {-1,+1}. Requires a
// bi-infinite unshifted problem; throws std::invalid_argument otherwise.
FsmProblem cancel_index(const FsmProblem& problem, int kappa);

struct StabilityWitness {
  std::uint64_t seed = 0;
  int n = 0;
  double inv_norm = 0.0;  // +infinity for a singular instance
};

struct StabilityEvidence {
  bool ok = false;
  double max_inv_norm = 0.0;
  std::optional<StabilityWitness> witness;  // set when ok is false
};

// Samples matrices from M_n(U, V - lambda, W) for every (seed, size) pair and
// reports whether all were invertible with a bounded inverse-norm profile.
StabilityEvidence stability_check(const SymbolTriple& triple, cplx lambda,
                                  std::span<const std::uint64_t> seeds,
                                  std::span<const int> sizes);

struct GlueFill {
  cplx u, v, w;
};

// Finite window of the periodic glueing matrix: `copies` copies of F on the
// diagonal separated by (u, v, w) glue rows; size copies*(n+1) - 1.
FiniteJacobi glueing_matrix(const FiniteJacobi& F, GlueFill fill, int copies);

enum class RkBranch { Plus, Minus };

// The sequence (r_k) from the glueing construction: geometric with ratio
// rho = -u*xn / (w*x1) when both products are nonzero, otherwise a single
// unit impulse at k = 0 (Plus) or k = -1 (Minus).
struct RkRule {
  RkBranch branch = RkBranch::Plus;
  bool geometric = false;
  cplx rho;  // only meaningful when geometric

  cplx r(std::int64_t k) const;
  // z_k = r_{k-1} u xn + r_k w x1; identically zero on the chosen side.
  cplx z(std::int64_t k, cplx x1, cplx xn, cplx u, cplx w) const {
    return r(k - 1) * u * xn + r(k) * w * x1;
  }
};

RkRule choose_rk(cplx x1, cplx xn, cplx u, cplx w);

}  // namespace jpe
