#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "jpe/util.hpp"

namespace jpe {

// The three finite alphabets (U, V, W) for the sub-, main and superdiagonal,
// with cached modulus extremes. Elements are deduplicated bitwise at
// construction; the sets are immutable afterwards.
class SymbolTriple {
 public:
  SymbolTriple(std::vector<cplx> u, std::vector<cplx> v, std::vector<cplx> w);

  const std::vector<cplx>& U() const { return u_; }
  const std::vector<cplx>& V() const { return v_; }
  const std::vector<cplx>& W() const { return w_; }

  double u_star_max() const { return u_max_; }
  double u_star_min() const { return u_min_; }
  double w_star_max() const { return w_max_; }
  double w_star_min() const { return w_min_; }
  double v_star_max() const { return v_max_; }

  // The triple (U, V - lambda, W).
  SymbolTriple shifted(cplx lambda) const;

  std::string to_string() const;

 private:
  std::vector<cplx> u_, v_, w_;
  double u_max_, u_min_, w_max_, w_min_, v_max_;
};

// Parses `U = [-1, 1]; V = [0]; W = [2+0i]` or the JSON form
// {"U": [[re, im], ...], "V": ..., "W": ...}. Throws std::invalid_argument.
SymbolTriple parse_triple(const std::string& text);

// An n x n tridiagonal matrix held as its three diagonals.
struct FiniteJacobi {
  int n = 0;
  std::vector<cplx> sub;    // n-1 entries, row i couples to column i-1
  std::vector<cplx> main;   // n entries
  std::vector<cplx> super;  // n-1 entries, row i couples to column i+1

  static FiniteJacobi zero(int n);
};

// A seeded bi-infinite sequence of (u_i, v_i, w_i) rows. Sampling is a pure
// function of (triple, seed, index), so windows at arbitrary offsets agree
// without replaying any state.
class DiagonalStream {
 public:
  DiagonalStream(SymbolTriple triple, std::uint64_t seed,
                 std::int64_t index_origin = 0)
      : triple_(std::move(triple)), seed_(seed), origin_(index_origin) {}

  const SymbolTriple& triple() const { return triple_; }
  std::uint64_t seed() const { return seed_; }
  std::int64_t index_origin() const { return origin_; }

  cplx u(std::int64_t i) const { return pick(triple_.U(), i, 0); }
  cplx v(std::int64_t i) const { return pick(triple_.V(), i, 1); }
  cplx w(std::int64_t i) const { return pick(triple_.W(), i, 2); }

 private:
  cplx pick(const std::vector<cplx>& set, std::int64_t i, int lane) const;

  SymbolTriple triple_;
  std::uint64_t seed_;
  std::int64_t origin_;
};

// Uniform reproducible sample from M_n(U, V, W).
FiniteJacobi sample_finite(const SymbolTriple& triple, int n,
                           std::uint64_t seed);

// Principal submatrix of the stream's infinite matrix over rows lo..hi.
FiniteJacobi window(const DiagonalStream& stream, std::int64_t lo,
                    std::int64_t hi);

// J - lambda*I.
FiniteJacobi shift_lambda(const FiniteJacobi& J, cplx lambda);

// The flip R_n J^T R_n: each diagonal reversed in place. An involution on
// M_n(U, V, W).
FiniteJacobi reflect(const FiniteJacobi& J);

}  // namespace jpe
