#include "jpe/fsm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace jpe {

cplx Rhs::at(std::int64_t j) const {
  cplx s = 0;
  for (const auto& [idx, val] : support)
    if (idx == j) s += val;
  return s;
}

double Rhs::mass_outside(std::int64_t lo, std::int64_t hi) const {
  double s = 0;
  for (const auto& [idx, val] : support)
    if (idx < lo || idx > hi) s += std::abs(val);
  return s;
}

std::vector<Cutoff> make_cutoffs(Side side, int count, std::int64_t step) {
  if (count < 1 || step < 1)
    throw std::invalid_argument("make_cutoffs: count and step must be >= 1");
  std::vector<Cutoff> out;
  out.reserve(count);
  for (int k = 1; k <= count; ++k)
    out.push_back(side == Side::SemiInfinite ? Cutoff{1, k * step}
                                             : Cutoff{-k * step, k * step});
  return out;
}

void validate(const FsmProblem& p) {
  if (p.shift < -1 || p.shift > 1)
    throw std::invalid_argument("FsmProblem: shift must be in {-1, 0, +1}");
  if (p.shift != 0 && p.side != Side::BiInfinite)
    throw std::invalid_argument(
        "FsmProblem: a shifted system must be bi-infinite");
  if (p.cutoffs.empty())
    throw std::invalid_argument("FsmProblem: no cut-offs given");
  for (std::size_t i = 0; i < p.cutoffs.size(); ++i) {
    const Cutoff& c = p.cutoffs[i];
    if (c.lo > c.hi) throw std::invalid_argument("FsmProblem: lo > hi");
    if (p.side == Side::SemiInfinite && c.lo != 1)
      throw std::invalid_argument(
          "FsmProblem: semi-infinite cut-offs are frozen at lo = 1");
    if (i > 0) {
      if (c.lo > p.cutoffs[i - 1].lo)
        throw std::invalid_argument("FsmProblem: lo must be nonincreasing");
      if (c.hi <= p.cutoffs[i - 1].hi)
        throw std::invalid_argument("FsmProblem: hi must be increasing");
    }
  }
}

FsmProblem cancel_index(const FsmProblem& p, int kappa) {
  if (p.side != Side::BiInfinite)
    throw std::invalid_argument(
        "cancel_index: the semi-infinite operator has index kappa != 0 and is "
        "not invertible; only bi-infinite systems can be shifted");
  if (kappa != 1 && kappa != -1)
    throw std::invalid_argument("cancel_index: kappa must be +1 or -1");
  if (p.shift != 0)
    throw std::invalid_argument("cancel_index: problem is already shifted");
  FsmProblem out = p;
  out.shift = kappa;
  return out;
}

namespace {

// The window of S^kappa A over rows/columns lo..hi: a triangular 3-band
// matrix. Row k holds d0[k] on the diagonal, d1[k] at offset -kappa and
// d2[k] at offset -2*kappa.
struct TriangularBand {
  int n = 0;
  int kappa = 0;
  bool singular = false;
  std::vector<cplx> d0, d1, d2;

  void solve_in_place(std::span<cplx> b) const {
    if (kappa == 1) {  // lower triangular: forward substitution
      for (int k = 0; k < n; ++k) {
        cplx s = b[k];
        if (k >= 1) s -= d1[k] * b[k - 1];
        if (k >= 2) s -= d2[k] * b[k - 2];
        b[k] = s / d0[k];
      }
    } else {  // upper triangular: back substitution
      for (int k = n - 1; k >= 0; --k) {
        cplx s = b[k];
        if (k + 1 < n) s -= d1[k] * b[k + 1];
        if (k + 2 < n) s -= d2[k] * b[k + 2];
        b[k] = s / d0[k];
      }
    }
  }

  void solve_adjoint_in_place(std::span<cplx> b) const {
    if (kappa == 1) {  // adjoint is upper triangular
      for (int k = n - 1; k >= 0; --k) {
        cplx s = b[k];
        if (k + 1 < n) s -= std::conj(d1[k + 1]) * b[k + 1];
        if (k + 2 < n) s -= std::conj(d2[k + 2]) * b[k + 2];
        b[k] = s / std::conj(d0[k]);
      }
    } else {  // adjoint is lower triangular
      for (int k = 0; k < n; ++k) {
        cplx s = b[k];
        if (k >= 1) s -= std::conj(d1[k - 1]) * b[k - 1];
        if (k >= 2) s -= std::conj(d2[k - 2]) * b[k - 2];
        b[k] = s / std::conj(d0[k]);
      }
    }
  }
};

TriangularBand shifted_window(const DiagonalStream& stream, std::int64_t lo,
                              std::int64_t hi, int kappa) {
  TriangularBand M;
  M.n = static_cast<int>(hi - lo + 1);
  M.kappa = kappa;
  M.d0.resize(M.n);
  M.d1.resize(M.n);
  M.d2.resize(M.n);
  for (int k = 0; k < M.n; ++k) {
    // Row lo+k of the shifted matrix is row lo+k-kappa of A, whose entries
    // u, v, w sit in columns lo+k-kappa + {-1, 0, +1}.
    std::int64_t src = lo + k - kappa;
    if (kappa == 1) {
      M.d0[k] = stream.w(src);
      M.d1[k] = stream.v(src);
      M.d2[k] = stream.u(src);
    } else {
      M.d0[k] = stream.u(src);
      M.d1[k] = stream.v(src);
      M.d2[k] = stream.w(src);
    }
    if (std::abs(M.d0[k]) < kPivotFloor) M.singular = true;
  }
  return M;
}

double profile_median(const std::vector<NormEstimate>& prof) {
  std::vector<double> v;
  v.reserve(prof.size());
  for (const NormEstimate& e : prof) v.push_back(e.value);
  std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  return v[mid];
}

bool profile_bounded(const std::vector<NormEstimate>& prof) {
  if (prof.empty()) return false;
  double last = prof.back().value;
  if (!std::isfinite(last)) return false;
  return last < 2.0 * profile_median(prof);
}

}  // namespace

FsmReport fsm_solve(const FsmProblem& p) {
  validate(p);
  FsmReport rep;
  int streak = 0;
  double last_diff = std::numeric_limits<double>::infinity();
  std::int64_t last_lo = 0, last_hi = 0;

  for (const Cutoff& c : p.cutoffs) {
    int n = static_cast<int>(c.hi - c.lo + 1);
    std::vector<cplx> x(n);
    for (int k = 0; k < n; ++k) x[k] = p.rhs.at(c.lo + k - p.shift);

    NormEstimate est;
    est.kind = NormKind::P2;
    bool singular = false;
    if (p.shift == 0) {
      FiniteJacobi J = window(p.stream, c.lo, c.hi);
      TridiagLU lu(J);
      if (lu.singular()) {
        singular = true;
      } else {
        lu.solve_in_place(x);
        est = inv_norm(J, NormKind::P2);
      }
    } else {
      TriangularBand M = shifted_window(p.stream, c.lo, c.hi, p.shift);
      if (M.singular) {
        singular = true;
      } else {
        M.solve_in_place(x);
        SigmaResult r = smallest_singular_generic(
            n, [&](std::vector<cplx>& v) { M.solve_in_place(v); },
            [&](std::vector<cplx>& v) { M.solve_adjoint_in_place(v); });
        est.value = r.sigma == 0.0 ? std::numeric_limits<double>::infinity()
                                   : 1.0 / r.sigma;
        est.certified_lower = !r.converged;
        est.iterations = r.iterations;
      }
    }
    if (singular) {
      rep.failure_mode = FsmFailure::TruncationSingular;
      rep.final_error_estimate = std::numeric_limits<double>::infinity();
      return rep;
    }
    rep.stability_profile.push_back(est);

    FsmSolution sol{c.lo, std::move(x)};
    if (!rep.solutions.empty()) {
      const FsmSolution& prev = rep.solutions.back();
      double d = 0;
      for (std::int64_t j = -kProbeRadius; j <= kProbeRadius; ++j)
        d = std::max(d, std::abs(sol.at(j) - prev.at(j)));
      last_diff = d;
      streak = d <= kProbeAtol ? streak + 1 : 0;
    }
    rep.solutions.push_back(std::move(sol));
    last_lo = c.lo;
    last_hi = c.hi;

    if (streak >= kProbeStreak && profile_bounded(rep.stability_profile)) {
      rep.converged = true;
      rep.final_error_estimate =
          last_diff + p.rhs.mass_outside(last_lo - p.shift, last_hi - p.shift);
      return rep;
    }
  }

  rep.final_error_estimate =
      last_diff + p.rhs.mass_outside(last_lo - p.shift, last_hi - p.shift);
  const auto& prof = rep.stability_profile;
  double first = prof.front().value;
  double last = prof.back().value;
  if (!std::isfinite(last) || last > 10.0 * first)
    rep.failure_mode = FsmFailure::ProfileDiverging;
  else
    rep.failure_mode = FsmFailure::NotConverged;
  return rep;
}

StabilityEvidence stability_check(const SymbolTriple& triple, cplx lambda,
                                  std::span<const std::uint64_t> seeds,
                                  std::span<const int> sizes) {
  StabilityEvidence ev;
  std::vector<double> per_size_max(sizes.size(), 0.0);
  StabilityWitness last_size_argmax;
  for (std::size_t si = 0; si < sizes.size(); ++si) {
    int n = sizes[si];
    for (std::uint64_t seed : seeds) {
      FiniteJacobi J = shift_lambda(sample_finite(triple, n, seed), lambda);
      TridiagLU lu(J);
      double inv;
      if (lu.singular()) {
        inv = std::numeric_limits<double>::infinity();
      } else {
        double s = sigma_min(J);
        inv = s == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / s;
      }
      if (!std::isfinite(inv)) {
        ev.ok = false;
        ev.max_inv_norm = inv;
        ev.witness = StabilityWitness{seed, n, inv};
        return ev;
      }
      if (inv > per_size_max[si]) {
        per_size_max[si] = inv;
        if (si + 1 == sizes.size()) last_size_argmax = {seed, n, inv};
      }
      ev.max_inv_norm = std::max(ev.max_inv_norm, inv);
    }
  }
  std::vector<double> sorted = per_size_max;
  std::size_t mid = sorted.size() / 2;
  std::nth_element(sorted.begin(), sorted.begin() + mid, sorted.end());
  if (per_size_max.back() >= 2.0 * sorted[mid] && sizes.size() > 1) {
    ev.ok = false;
    ev.witness = last_size_argmax;
    return ev;
  }
  ev.ok = true;
  return ev;
}

FiniteJacobi glueing_matrix(const FiniteJacobi& F, GlueFill fill, int copies) {
  if (copies < 1)
    throw std::invalid_argument("glueing_matrix: copies must be >= 1");
  int n = F.n;
  int N = copies * (n + 1) - 1;
  FiniteJacobi B = FiniteJacobi::zero(N);
  for (int k = 0; k < copies; ++k) {
    int base = k * (n + 1);
    for (int j = 0; j < n; ++j) B.main[base + j] = F.main[j];
    for (int j = 0; j + 1 < n; ++j) {
      B.sub[base + j] = F.sub[j];
      B.super[base + j] = F.super[j];
    }
    if (k + 1 < copies) {
      int g = base + n;  // glue row between block k and block k+1
      B.main[g] = fill.v;
      B.sub[g - 1] = fill.u;    // (g, g-1)
      B.super[g - 1] = fill.w;  // (g-1, g)
      B.sub[g] = fill.u;        // (g+1, g)
      B.super[g] = fill.w;      // (g, g+1)
    }
  }
  return B;
}

cplx RkRule::r(std::int64_t k) const {
  if (geometric) return std::pow(rho, static_cast<double>(k));
  if (branch == RkBranch::Plus) return k == 0 ? cplx(1.0) : cplx(0.0);
  return k == -1 ? cplx(1.0) : cplx(0.0);
}

RkRule choose_rk(cplx x1, cplx xn, cplx u, cplx w) {
  RkRule rule;
  cplx a = u * xn;
  cplx b = w * x1;
  if (a == cplx(0)) {
    rule.branch = RkBranch::Plus;
    return rule;
  }
  if (b == cplx(0)) {
    rule.branch = RkBranch::Minus;
    return rule;
  }
  rule.geometric = true;
  rule.rho = -a / b;
  rule.branch = std::abs(rule.rho) <= 1.0 ? RkBranch::Plus : RkBranch::Minus;
  return rule;
}

}  // namespace jpe
