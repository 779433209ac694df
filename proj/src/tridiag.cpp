#include "jpe/tridiag.hpp"

#include <algorithm>
#include <cmath>

namespace jpe {

TridiagLU::TridiagLU(const FiniteJacobi& J, double pivot_floor) : n_(J.n) {
  // dgttrf-style factorization: partial pivoting between adjacent rows only,
  // producing one fill-in superdiagonal.
  d_ = J.main;
  du_ = J.super;
  dl_ = J.sub;
  du2_.assign(std::max(0, n_ - 2), 0.0);
  swapped_.assign(std::max(0, n_ - 1), 0);

  for (int i = 0; i + 1 < n_; ++i) {
    if (std::abs(dl_[i]) > std::abs(d_[i])) {
      swapped_[i] = 1;
      std::swap(d_[i], dl_[i]);
      std::swap(du_[i], d_[i + 1]);
      if (i + 2 < n_) {
        du2_[i] = du_[i + 1];
        du_[i + 1] = 0.0;
      }
    }
    if (std::abs(d_[i]) < pivot_floor) {
      singular_ = true;
      return;
    }
    cplx m = dl_[i] / d_[i];
    dl_[i] = m;  // store the multiplier
    d_[i + 1] -= m * du_[i];
    if (swapped_[i] && i + 2 < n_) du_[i + 1] = -m * du2_[i];
  }
  if (n_ > 0 && std::abs(d_[n_ - 1]) < pivot_floor) {
    singular_ = true;
    return;
  }
  dinv_.resize(n_);
  for (int i = 0; i < n_; ++i) dinv_[i] = 1.0 / d_[i];
}

void TridiagLU::solve_in_place(std::span<cplx> b) const {
  if (singular_) throw SingularMatrix("tridiagonal matrix is numerically singular");
  if (static_cast<int>(b.size()) != n_)
    throw std::invalid_argument("solve: right-hand side has wrong length");
  // Forward sweep, replaying the row swaps.
  for (int i = 0; i + 1 < n_; ++i) {
    if (swapped_[i]) std::swap(b[i], b[i + 1]);
    b[i + 1] -= dl_[i] * b[i];
  }
  // Back substitution against d, du, du2.
  if (n_ == 0) return;
  b[n_ - 1] *= dinv_[n_ - 1];
  if (n_ >= 2) b[n_ - 2] = (b[n_ - 2] - du_[n_ - 2] * b[n_ - 1]) * dinv_[n_ - 2];
  for (int i = n_ - 3; i >= 0; --i)
    b[i] = (b[i] - du_[i] * b[i + 1] - du2_[i] * b[i + 2]) * dinv_[i];
}

double tridiag_largest_eig(std::span<const double> a, std::span<const double> b) {
  int m = static_cast<int>(a.size());
  if (m == 1) return a[0];
  double lo = a[0], hi = a[0];
  for (int i = 0; i < m; ++i) {
    double r = (i > 0 ? std::abs(b[i - 1]) : 0.0) +
               (i + 1 < m ? std::abs(b[i]) : 0.0);
    lo = std::min(lo, a[i] - r);
    hi = std::max(hi, a[i] + r);
  }
  // Sturm count: number of eigenvalues below x.
  auto count_below = [&](double x) {
    int cnt = 0;
    double d = a[0] - x;
    if (d < 0) ++cnt;
    for (int i = 1; i < m; ++i) {
      if (d == 0.0) d = 1e-300;
      d = a[i] - x - b[i - 1] * b[i - 1] / d;
      if (d < 0) ++cnt;
    }
    return cnt;
  };
  double l = lo, h = hi + 1e-12 * (std::abs(hi) + 1.0);
  for (int it = 0; it < 120; ++it) {
    double mid = 0.5 * (l + h);
    if (count_below(mid) == m)
      h = mid;
    else
      l = mid;
    if (h - l <= 1e-14 * std::max({std::abs(l), std::abs(h), 1e-300})) break;
  }
  return 0.5 * (l + h);
}

FiniteJacobi adjoint(const FiniteJacobi& J) {
  FiniteJacobi out = FiniteJacobi::zero(J.n);
  for (int i = 0; i < J.n; ++i) out.main[i] = std::conj(J.main[i]);
  for (int i = 0; i + 1 < J.n; ++i) {
    out.sub[i] = std::conj(J.super[i]);
    out.super[i] = std::conj(J.sub[i]);
  }
  return out;
}

std::vector<cplx> solve(const FiniteJacobi& J, std::span<const cplx> b) {
  TridiagLU lu(J);
  std::vector<cplx> x(b.begin(), b.end());
  lu.solve_in_place(x);
  return x;
}

namespace {

double inv_norm_p1_pinf(const FiniteJacobi& J, NormKind kind) {
  TridiagLU lu(J);
  if (lu.singular()) return std::numeric_limits<double>::infinity();
  int n = J.n;
  std::vector<double> row_sums(n, 0.0);
  double max_col = 0.0;
  std::vector<cplx> col(n);
  for (int j = 0; j < n; ++j) {
    std::fill(col.begin(), col.end(), cplx(0));
    col[j] = 1.0;
    lu.solve_in_place(col);
    double cs = 0.0;
    for (int i = 0; i < n; ++i) {
      double a = std::abs(col[i]);
      cs += a;
      row_sums[i] += a;
    }
    max_col = std::max(max_col, cs);
  }
  if (kind == NormKind::P1) return max_col;
  return *std::max_element(row_sums.begin(), row_sums.end());
}

SigmaResult sigma_min_impl(const FiniteJacobi& J) {
  TridiagLU lu(J);
  if (lu.singular()) return {0.0, true, 0};
  TridiagLU lu_h(adjoint(J));
  if (lu_h.singular()) return {0.0, true, 0};
  return smallest_singular_generic(
      J.n, [&](std::vector<cplx>& v) { lu.solve_in_place(v); },
      [&](std::vector<cplx>& v) { lu_h.solve_in_place(v); });
}

}  // namespace

NormEstimate inv_norm(const FiniteJacobi& J, NormKind kind) {
  NormEstimate est;
  est.kind = kind;
  if (kind != NormKind::P2) {
    est.value = inv_norm_p1_pinf(J, kind);
    return est;
  }
  SigmaResult r = sigma_min_impl(J);
  est.iterations = r.iterations;
  est.value = r.sigma == 0.0 ? std::numeric_limits<double>::infinity()
                             : 1.0 / r.sigma;
  est.certified_lower = !r.converged;
  return est;
}

NormEstimate op_norm(const FiniteJacobi& J, NormKind kind) {
  NormEstimate est;
  est.kind = kind;
  int n = J.n;
  if (kind == NormKind::P1 || kind == NormKind::Pinf) {
    double best = 0.0;
    for (int i = 0; i < n; ++i) {
      double s = std::abs(J.main[i]);
      if (kind == NormKind::Pinf) {
        if (i > 0) s += std::abs(J.sub[i - 1]);
        if (i + 1 < n) s += std::abs(J.super[i]);
      } else {
        if (i + 1 < n) s += std::abs(J.sub[i]);
        if (i > 0) s += std::abs(J.super[i - 1]);
      }
      best = std::max(best, s);
    }
    est.value = best;
    return est;
  }

  // Lanczos on the Hermitian PSD operator A*A; the Ritz value converges much
  // faster and more reliably than power iteration when the top singular
  // values are clustered.
  FiniteJacobi ah = adjoint(J);
  auto apply = [n](const FiniteJacobi& M, const std::vector<cplx>& x,
                   std::vector<cplx>& y) {
    for (int i = 0; i < n; ++i) {
      cplx s = M.main[i] * x[i];
      if (i > 0) s += M.sub[i - 1] * x[i - 1];
      if (i + 1 < n) s += M.super[i] * x[i + 1];
      y[i] = s;
    }
  };
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

  std::vector<double> alpha, beta;
  std::vector<cplx> v_prev(n, cplx(0)), v(n), t(n), w(n);
  for (int i = 0; i < n; ++i) {
    std::uint64_t h = hash_combine(0xa11ceULL, i);
    v[i] = cplx(2.0 * unit_double(h) - 1.0,
                2.0 * unit_double(splitmix64(h)) - 1.0);
  }
  double nv = norm2(v);
  for (cplx& z : v) z /= nv;

  double theta_prev = 0.0;
  int stall = 0;
  int m_cap = std::min(n, kIterMax);
  for (int j = 0; j < m_cap; ++j) {
    apply(J, v, t);
    apply(ah, t, w);
    est.iterations = j + 1;

    double a_j = cdot(v, w).real();
    if (j > 0) {
      double b_prev = beta[j - 1];
      for (int i = 0; i < n; ++i) w[i] -= a_j * v[i] + b_prev * v_prev[i];
    } else {
      for (int i = 0; i < n; ++i) w[i] -= a_j * v[i];
    }
    cplx c = cdot(v, w);
    for (int i = 0; i < n; ++i) w[i] -= c * v[i];
    alpha.push_back(a_j);

    double theta = std::max(0.0, tridiag_largest_eig(alpha, beta));
    est.value = std::sqrt(theta);
    if (theta == 0.0 && j + 1 == n) return est;  // zero matrix
    if (theta_prev > 0 && std::abs(theta - theta_prev) <= kIterRtol * theta) {
      if (++stall >= 3) return est;
    } else {
      stall = 0;
    }
    theta_prev = theta;

    double b_j = norm2(w);
    if (b_j <= 1e-14 * std::max(std::abs(a_j), 1e-300)) return est;
    beta.push_back(b_j);
    v_prev.swap(v);
    v.swap(w);
    for (cplx& z : v) z /= b_j;
  }
  // After n steps the Krylov space is the whole space and the Ritz value is
  // exact; only a truncated run leaves a mere lower bound.
  est.certified_lower = m_cap < n;
  return est;
}

double sigma_min(const FiniteJacobi& J) { return sigma_min_impl(J).sigma; }

std::vector<NormEstimate> norm_growth_profile(const DiagonalStream& stream,
                                              cplx lambda,
                                              std::span<const int> sizes,
                                              NormKind kind) {
  for (std::size_t i = 1; i < sizes.size(); ++i)
    if (sizes[i] <= sizes[i - 1])
      throw std::invalid_argument("norm_growth_profile: sizes must increase");
  std::vector<NormEstimate> out;
  out.reserve(sizes.size());
  for (int n : sizes)
    out.push_back(inv_norm(shift_lambda(window(stream, 1, n), lambda), kind));
  return out;
}

}  // namespace jpe
