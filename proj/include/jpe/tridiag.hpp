#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "jpe/symbols.hpp"
#include "jpe/util.hpp"

namespace jpe {

enum class NormKind { P1, P2, Pinf };

inline NormKind dual(NormKind k) {
  switch (k) {
    case NormKind::P1:
      return NormKind::Pinf;
    case NormKind::Pinf:
      return NormKind::P1;
    default:
      return NormKind::P2;
  }
}

struct NormEstimate {
  double value = 0.0;  // may be +infinity
  NormKind kind = NormKind::P2;
  bool certified_lower = false;  // true when only a lower bound was obtained
  int iterations = 0;
};

struct SingularMatrix : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Default absolute pivot threshold below which a matrix is declared
// numerically singular.
constexpr double kPivotFloor = 1e-300;

// Banded LU with partial pivoting of a tridiagonal matrix (one fill-in
// superdiagonal), factored once and solved repeatedly in O(n).
class TridiagLU {
 public:
  explicit TridiagLU(const FiniteJacobi& J, double pivot_floor = kPivotFloor);

  bool singular() const { return singular_; }
  int size() const { return n_; }

  // Solves J x = b in place. Throws SingularMatrix if the factorization met a
  // pivot below the threshold.
  void solve_in_place(std::span<cplx> b) const;

 private:
  int n_;
  bool singular_ = false;
  std::vector<cplx> d_, du_, du2_, dl_;  // pivots, 2 superdiagonals, multipliers
  std::vector<cplx> dinv_;
  std::vector<std::uint8_t> swapped_;
};

// Conjugate transpose (also tridiagonal).
FiniteJacobi adjoint(const FiniteJacobi& J);

std::vector<cplx> solve(const FiniteJacobi& J, std::span<const cplx> b);

NormEstimate inv_norm(const FiniteJacobi& J, NormKind kind);
NormEstimate op_norm(const FiniteJacobi& J, NormKind kind);

// Smallest singular value; 0 when singular. Equals 1/inv_norm(J, P2).
double sigma_min(const FiniteJacobi& J);

// inv_norm of (window(stream,1,n) - lambda I) for each n in sizes.
std::vector<NormEstimate> norm_growth_profile(const DiagonalStream& stream,
                                              cplx lambda,
                                              std::span<const int> sizes,
                                              NormKind kind);

// ---- shared iteration cores -------------------------------------------------

struct SigmaResult {
  double sigma = 0.0;
  bool converged = false;
  int iterations = 0;
};

constexpr double kIterRtol = 1e-10;
constexpr int kIterMax = 500;
constexpr int kIterRestarts = 3;

// Largest eigenvalue of the symmetric tridiagonal matrix with diagonal
// `a` (size m) and off-diagonal `b` (size m-1), by bisection on Sturm counts.
double tridiag_largest_eig(std::span<const double> a, std::span<const double> b);

// Inverse Lanczos on the Hermitian positive definite B = (A A*)^{-1} using
// caller-supplied solves with A and A*. The Ritz estimate of the largest
// eigenvalue of B (a Rayleigh-quotient estimate) is considered converged when
// its relative change stays below rtol for 3 consecutive steps; plain
// per-step change is unreliable near clustered singular values. Values that
// overflow the solve are reported as sigma = 0, converged. Restarts fire only
// on breakdown of the iteration.
template <class SolveA, class SolveAH>
SigmaResult smallest_singular_generic(int n, SolveA&& solve_a,
                                      SolveAH&& solve_ah,
                                      std::uint64_t seed = 0x5eedULL) {
  auto norm2 = [](const std::vector<cplx>& v) {
    double s = 0;
    for (cplx z : v) s += std::norm(z);
    return std::sqrt(s);
  };
  auto cdot = [n](const std::vector<cplx>& x, const std::vector<cplx>& y) {
    cplx s = 0;
    for (int i = 0; i < n; ++i) s += std::conj(x[i]) * y[i];
    return s;
  };

  SigmaResult best;
  best.sigma = std::numeric_limits<double>::infinity();
  int total_iters = 0;
  int m_cap = std::min(n, kIterMax);
  for (int attempt = 0; attempt <= kIterRestarts; ++attempt) {
    std::vector<double> alpha, beta;
    std::vector<cplx> v_prev(n, cplx(0)), v(n), w(n);
    for (int i = 0; i < n; ++i) {
      std::uint64_t h = hash_combine(seed + attempt, i);
      v[i] = cplx(2.0 * unit_double(h) - 1.0,
                  2.0 * unit_double(splitmix64(h)) - 1.0);
    }
    double nv = norm2(v);
    for (cplx& z : v) z /= nv;

    double theta_prev = 0.0;
    int stall = 0;
    bool breakdown = false;
    for (int j = 0; j < m_cap; ++j, ++total_iters) {
      w = v;
      solve_ah(w);  // w = A^{-*} v_j
      double nw = norm2(w);
      if (!std::isfinite(nw) || nw > 1e250) return {0.0, true, total_iters};
      solve_a(w);  // w = (A A^*)^{-1} v_j
      nw = norm2(w);
      if (!std::isfinite(nw) || nw > 1e250) return {0.0, true, total_iters};

      double a_j = cdot(v, w).real();
      if (j > 0) {
        double b_prev = beta[j - 1];
        for (int i = 0; i < n; ++i) w[i] -= a_j * v[i] + b_prev * v_prev[i];
      } else {
        for (int i = 0; i < n; ++i) w[i] -= a_j * v[i];
      }
      // One extra orthogonalization pass against v keeps the recurrence
      // stable; the stall rule stops shortly after convergence, before
      // orthogonality against older vectors degrades.
      cplx c = cdot(v, w);
      for (int i = 0; i < n; ++i) w[i] -= c * v[i];
      alpha.push_back(a_j);

      double theta = tridiag_largest_eig(alpha, beta);
      if (!(theta > 0)) {
        breakdown = true;  // numerically lost positivity; try a fresh start
        break;
      }
      double sigma = 1.0 / std::sqrt(theta);
      if (sigma < best.sigma) best = {sigma, false, total_iters + 1};
      if (theta_prev > 0 && std::abs(theta - theta_prev) <= kIterRtol * theta) {
        if (++stall >= 3) return {sigma, true, total_iters + 1};
      } else {
        stall = 0;
      }
      theta_prev = theta;

      double b_j = norm2(w);
      if (b_j <= 1e-14 * std::abs(a_j)) {
        // Invariant subspace found: the Ritz value is (numerically) exact.
        return {sigma, true, total_iters + 1};
      }
      beta.push_back(b_j);
      v_prev.swap(v);
      v.swap(w);
      for (cplx& z : v) z /= b_j;
    }
    if (!breakdown) break;  // budget exhausted; restarting would not help
  }
  best.iterations = total_iters;
  return best;  // not converged: sigma is an upper bound on sigma_min,
                // equivalently 1/sigma is a certified lower bound on the norm
}

}  // namespace jpe
