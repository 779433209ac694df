#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>
#include <cmath>

#include "jpe/fsm.hpp"
#include "jpe/regions.hpp"

using namespace jpe;

namespace {

// Exact complex rationals for the z_k annihilation identity. An arbitrary
// precision backend: the powers of rho overflow 64-bit rationals.
using Rat = boost::rational<boost::multiprecision::cpp_int>;
struct CRat {
  Rat re, im;
  friend CRat operator*(const CRat& a, const CRat& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend CRat operator+(const CRat& a, const CRat& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend CRat operator-(const CRat& a, const CRat& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend CRat operator/(const CRat& a, const CRat& b) {
    Rat d = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
  }
  bool zero() const { return re == Rat(0) && im == Rat(0); }
};

CRat cpow(CRat base, long long k) {
  CRat one{Rat(1), Rat(0)};
  if (k == 0) return one;
  bool neg = k < 0;
  if (neg) k = -k;
  CRat acc = one;
  for (long long i = 0; i < k; ++i) acc = acc * base;
  if (neg) return one / acc;
  return acc;
}

}  // namespace

TEST_CASE("make_cutoffs shapes") {
  auto semi = make_cutoffs(Side::SemiInfinite, 3, 10);
  REQUIRE(semi.size() == 3);
  CHECK(semi[0].lo == 1);
  CHECK(semi[2].hi == 30);
  auto bi = make_cutoffs(Side::BiInfinite, 2, 5);
  CHECK(bi[1].lo == -10);
  CHECK(bi[1].hi == 10);
  CHECK_THROWS_AS(make_cutoffs(Side::SemiInfinite, 0, 1),
                  std::invalid_argument);
}

TEST_CASE("validate rejects malformed problems") {
  SymbolTriple t = parse_triple("U=[0];V=[2];W=[1]");
  DiagonalStream s(t, 1);
  FsmProblem p{s, Side::SemiInfinite, Rhs::unit(1),
               make_cutoffs(Side::SemiInfinite, 3, 10), 0};
  CHECK_NOTHROW(validate(p));

  FsmProblem bad_lo = p;
  bad_lo.cutoffs[1].lo = 2;
  CHECK_THROWS_AS(validate(bad_lo), std::invalid_argument);

  FsmProblem bad_hi = p;
  bad_hi.cutoffs[2].hi = p.cutoffs[1].hi;
  CHECK_THROWS_AS(validate(bad_hi), std::invalid_argument);

  FsmProblem shifted_semi = p;
  shifted_semi.shift = 1;
  CHECK_THROWS_AS(validate(shifted_semi), std::invalid_argument);

  FsmProblem empty = p;
  empty.cutoffs.clear();
  CHECK_THROWS_AS(validate(empty), std::invalid_argument);
}

TEST_CASE("semi-infinite Toeplitz u=0,v=2,w=1 with b=e1") {
  SymbolTriple t = parse_triple("U=[0];V=[2];W=[1]");
  FsmProblem p{DiagonalStream(t, 1), Side::SemiInfinite, Rhs::unit(1),
               make_cutoffs(Side::SemiInfinite, 6, 10), 0};
  FsmReport r = fsm_solve(p);
  CHECK(r.converged);
  CHECK(!r.failure_mode.has_value());
  const FsmSolution& x = r.solutions.back();
  CHECK(std::abs(x.at(1) - cplx(0.5)) < 1e-14);
  for (std::int64_t j = 2; j <= 10; ++j) CHECK(std::abs(x.at(j)) < 1e-14);
  CHECK(r.final_error_estimate < kProbeAtol);
}

TEST_CASE("manufactured solution on a random semi-infinite stream") {
  SymbolTriple t = parse_triple("U=[1];V=[4];W=[0,2]");
  DiagonalStream s(t, 17);
  // Finitely supported target solution.
  auto xhat = [](std::int64_t j) -> cplx {
    if (j < 1 || j > 12) return 0.0;
    return cplx(std::pow(0.5, j), 0.25 / j);
  };
  Rhs b;
  for (std::int64_t i = 1; i <= 14; ++i) {
    cplx bi = s.v(i) * xhat(i) + s.w(i) * xhat(i + 1);
    if (i > 1) bi += s.u(i) * xhat(i - 1);
    if (bi != cplx(0)) b.support.push_back({i, bi});
  }
  FsmProblem p{s, Side::SemiInfinite, b,
               make_cutoffs(Side::SemiInfinite, 8, 25), 0};
  FsmReport r = fsm_solve(p);
  CHECK(r.converged);
  const FsmSolution& x = r.solutions.back();
  for (std::int64_t j = 1; j <= 20; ++j)
    CHECK(std::abs(x.at(j) - xhat(j)) < 1e-8);
}

TEST_CASE("cancel_index on the pure shift gives the identity system") {
  SymbolTriple t = parse_triple("U=[0];V=[0];W=[1]");
  Rhs b;
  b.support = {{-2, cplx(3, 1)}, {0, cplx(1, 0)}, {4, cplx(0, -2)}};
  FsmProblem p{DiagonalStream(t, 1), Side::BiInfinite, b,
               make_cutoffs(Side::BiInfinite, 4, 8), 0};
  FsmProblem q = cancel_index(p, 1);
  CHECK(q.shift == 1);
  FsmReport r = fsm_solve(q);
  CHECK(r.converged);
  const FsmSolution& x = r.solutions.back();
  // S A = identity, so x(i) = (S b)(i) = b(i-1).
  for (std::int64_t j = -6; j <= 6; ++j)
    CHECK(std::abs(x.at(j) - (j - 1 == -2   ? cplx(3, 1)
                              : j - 1 == 0  ? cplx(1, 0)
                              : j - 1 == 4  ? cplx(0, -2)
                                            : cplx(0))) < 1e-14);
}

TEST_CASE("cancel_index rejects semi-infinite and double shifts") {
  SymbolTriple t = parse_triple("U=[0.2];V=[0];W=[1]");
  FsmProblem semi{DiagonalStream(t, 1), Side::SemiInfinite, Rhs::unit(1),
                  make_cutoffs(Side::SemiInfinite, 2, 10), 0};
  CHECK_THROWS_AS(cancel_index(semi, 1), std::invalid_argument);
  FsmProblem bi{DiagonalStream(t, 1), Side::BiInfinite, Rhs::unit(0),
                make_cutoffs(Side::BiInfinite, 2, 10), 0};
  CHECK_THROWS_AS(cancel_index(bi, 2), std::invalid_argument);
  FsmProblem once = cancel_index(bi, 1);
  CHECK_THROWS_AS(cancel_index(once, 1), std::invalid_argument);
}

TEST_CASE("kappa=+1 without shift fails, with shift converges") {
  SymbolTriple t = parse_triple("U=[0.2];V=[0];W=[1]");
  REQUIRE(kappa_at(t, cplx(0)).kappa == 1);
  // Even-sized windows keep the truncations nonsingular, so the failure is a
  // diverging profile rather than an exactly singular cut.
  std::vector<Cutoff> cuts;
  for (int k = 1; k <= 6; ++k) cuts.push_back({-25 * k + 1, 25 * k});
  FsmProblem p{DiagonalStream(t, 1), Side::BiInfinite, Rhs::unit(0), cuts, 0};
  FsmReport r = fsm_solve(p);
  CHECK(!r.converged);
  CHECK(r.failure_mode == FsmFailure::ProfileDiverging);

  FsmReport rs = fsm_solve(cancel_index(p, 1));
  CHECK(rs.converged);
  double lo = 1e300, hi = 0;
  for (const NormEstimate& e : rs.stability_profile) {
    lo = std::min(lo, e.value);
    hi = std::max(hi, e.value);
  }
  CHECK(hi / lo < 2.0);
}

TEST_CASE("odd windows of the kappa=+1 triple are exactly singular") {
  SymbolTriple t = parse_triple("U=[0.2];V=[0];W=[1]");
  FsmProblem p{DiagonalStream(t, 1), Side::BiInfinite, Rhs::unit(0),
               make_cutoffs(Side::BiInfinite, 3, 10), 0};  // sizes 21,41,61
  FsmReport r = fsm_solve(p);
  CHECK(r.failure_mode == FsmFailure::TruncationSingular);
}

TEST_CASE("stability_check passes a compatible kappa=0 triple") {
  SymbolTriple t = parse_triple("U=[1];V=[4];W=[0,2]");
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  std::vector<int> sizes = {1, 2, 5, 10, 25, 50};
  StabilityEvidence ev = stability_check(t, cplx(0), seeds, sizes);
  CHECK(ev.ok);
  CHECK(ev.max_inv_norm > 0);
  CHECK(std::isfinite(ev.max_inv_norm));
  CHECK(!ev.witness.has_value());
}

TEST_CASE("stability_check finds the singular witness of ex:possi") {
  SymbolTriple t = parse_triple("U=[1];V=[0];W=[0,2]");
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = 1; s <= 30; ++s) seeds.push_back(s);
  std::vector<int> sizes = {1, 2, 3};
  StabilityEvidence ev = stability_check(t, cplx(0), seeds, sizes);
  CHECK(!ev.ok);
  REQUIRE(ev.witness.has_value());
  CHECK(std::isinf(ev.witness->inv_norm));
}

TEST_CASE("glueing_matrix structure") {
  FiniteJacobi F = FiniteJacobi::zero(2);
  F.main = {cplx(10), cplx(11)};
  F.sub = {cplx(20)};
  F.super = {cplx(30)};
  GlueFill fill{cplx(1), cplx(2), cplx(3)};

  FiniteJacobi one = glueing_matrix(F, fill, 1);
  CHECK(one.n == 2);
  CHECK(one.main == F.main);
  CHECK(one.sub == F.sub);
  CHECK(one.super == F.super);

  FiniteJacobi two = glueing_matrix(F, fill, 2);
  REQUIRE(two.n == 5);
  CHECK(two.main[0] == cplx(10));
  CHECK(two.main[1] == cplx(11));
  CHECK(two.main[2] == cplx(2));   // glue row v
  CHECK(two.main[3] == cplx(10));
  CHECK(two.main[4] == cplx(11));
  CHECK(two.sub[0] == cplx(20));
  CHECK(two.sub[1] == cplx(1));    // glue row u at (2,1)
  CHECK(two.sub[2] == cplx(1));    // next block leads with u at (3,2)
  CHECK(two.sub[3] == cplx(20));
  CHECK(two.super[0] == cplx(30));
  CHECK(two.super[1] == cplx(3));  // w at (1,2)
  CHECK(two.super[2] == cplx(3));  // glue row w at (2,3)
  CHECK(two.super[3] == cplx(30));

  CHECK(glueing_matrix(F, fill, 3).n == 8);
  CHECK_THROWS_AS(glueing_matrix(F, fill, 0), std::invalid_argument);
}

TEST_CASE("glueing a singular block keeps the window singular") {
  // F = [[1,1],[-1,-1]] has kernel (1,-1); with glue u = w = 1, v = 0 the
  // vector repeating (1,-1) per block and 0 on glue rows is killed by every
  // window (z_k = r_{k+1} - r_k = 0 with constant r).
  FiniteJacobi F = FiniteJacobi::zero(2);
  F.main = {cplx(1), cplx(-1)};
  F.sub = {cplx(-1)};
  F.super = {cplx(1)};
  GlueFill fill{cplx(1), cplx(0), cplx(1)};
  for (int copies : {1, 2, 3, 6})
    CHECK(sigma_min(glueing_matrix(F, fill, copies)) < 1e-10);
}

TEST_CASE("choose_rk case split") {
  RkRule g = choose_rk(cplx(1), cplx(1), cplx(1), cplx(2));
  CHECK(g.geometric);
  CHECK(g.branch == RkBranch::Plus);
  CHECK(std::abs(g.rho - cplx(-0.5)) < 1e-15);

  RkRule m = choose_rk(cplx(1), cplx(1), cplx(2), cplx(1));
  CHECK(m.branch == RkBranch::Minus);

  RkRule p0 = choose_rk(cplx(1), cplx(1), cplx(0), cplx(2));
  CHECK(!p0.geometric);
  CHECK(p0.branch == RkBranch::Plus);
  CHECK(p0.r(0) == cplx(1));
  CHECK(p0.r(1) == cplx(0));
  CHECK(p0.r(-1) == cplx(0));

  RkRule mm = choose_rk(cplx(0), cplx(1), cplx(1), cplx(2));  // w*x1 = 0
  CHECK(!mm.geometric);
  CHECK(mm.branch == RkBranch::Minus);
  CHECK(mm.r(-1) == cplx(1));
  CHECK(mm.r(0) == cplx(0));
}

TEST_CASE("z_k vanishes on the chosen side, floating point") {
  std::uint64_t st = 5;
  auto rnd = [&st] {
    st = splitmix64(st);
    double re = 2 * unit_double(st) - 1;
    st = splitmix64(st);
    double im = 2 * unit_double(st) - 1;
    return cplx(re, im);
  };
  for (int trial = 0; trial < 500; ++trial) {
    cplx x1 = rnd(), xn = rnd(), u = rnd(), w = rnd();
    if (trial % 7 == 0) u = 0;
    if (trial % 11 == 0) x1 = 0;
    RkRule rule = choose_rk(x1, xn, u, w);
    double scale = std::abs(u * xn) + std::abs(w * x1) + 1.0;
    if (rule.branch == RkBranch::Plus) {
      for (std::int64_t k = 1; k <= 12; ++k)
        CHECK(std::abs(rule.z(k, x1, xn, u, w)) <= 1e-12 * scale);
    } else {
      for (std::int64_t k = -1; k >= -12; --k)
        CHECK(std::abs(rule.z(k, x1, xn, u, w)) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("z_k vanishes exactly in rational arithmetic") {
  std::uint64_t st = 123;
  auto rnd = [&st] {
    st = splitmix64(st);
    long long p = static_cast<long long>(st % 19) - 9;
    st = splitmix64(st);
    long long q = 1 + static_cast<long long>(st % 7);
    st = splitmix64(st);
    long long r = static_cast<long long>(st % 19) - 9;
    return CRat{Rat(p, q), Rat(r, q)};
  };
  for (int trial = 0; trial < 200; ++trial) {
    CRat x1 = rnd(), xn = rnd(), u = rnd(), w = rnd();
    CRat a = u * xn, b = w * x1;
    // Mirror choose_rk exactly: geometric when both products are nonzero.
    // The impulse branches annihilate their side trivially (z_k = 0 * a + 0 *
    // b), so only the geometric branch needs exact arithmetic.
    if (a.zero() || b.zero()) continue;
    CRat zero{Rat(0), Rat(0)};
    CRat rho = (zero - a) / b;
    for (long long k = -4; k <= 4; ++k) {
      CRat z = cpow(rho, k - 1) * a + cpow(rho, k) * b;
      CHECK(z.zero());
    }
  }
}
