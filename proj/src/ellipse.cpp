#include "jpe/ellipse.hpp"

#include <algorithm>
#include <cmath>

namespace jpe {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

cplx OrientedEllipse::at(double theta) const {
  return u * std::polar(1.0, theta) + v + w * std::polar(1.0, -theta);
}

OrientedEllipse make_ellipse(cplx u, cplx v, cplx w) {
  OrientedEllipse e;
  e.u = u;
  e.v = v;
  e.w = w;
  double au = std::abs(u), aw = std::abs(w);
  e.semi_major = au + aw;
  e.semi_minor = std::abs(au - aw);
  if (au != 0.0 && aw != 0.0)
    e.major_axis_angle = (std::arg(u) + std::arg(w)) / 2.0;
  else
    e.major_axis_angle = 0.0;  // circle (or point): any axis direction
  e.orientation = au > aw   ? Orientation::CounterClockwise
                  : au < aw ? Orientation::Clockwise
                            : Orientation::Degenerate;
  // z = x + iy maps to u z + w conj(z).
  double a = u.real(), b = u.imag(), c = w.real(), d = w.imag();
  e.linmap = {a + c, -b + d, b + d, a - c};  // det = |u|^2 - |w|^2
  return e;
}

namespace {

// Distance from z to the degenerate segment, which runs between
// v - L e^{i phi} and v + L e^{i phi} with L = semi_major.
double segment_distance(const OrientedEllipse& e, cplx z) {
  double phi = e.major_axis_angle;
  cplx rel = (z - e.v) * std::polar(1.0, -phi);
  double x = rel.real(), y = rel.imag(), L = e.semi_major;
  double t = std::clamp(x, -L, L);
  return std::hypot(x - t, y);
}

}  // namespace

PointClass classify_point(const OrientedEllipse& e, cplx z, double tol) {
  if (e.orientation == Orientation::Degenerate) {
    double len = 2.0 * e.semi_major;
    double lim = len > 0 ? tol * len : tol;
    if (segment_distance(e, z) <= lim) return PointClass::OnCurve;
    return PointClass::Exterior;
  }
  double det = std::norm(e.u) - std::norm(e.w);
  cplx rel = z - e.v;
  // Inverse of the 2x2 real-linear map.
  double x = (e.linmap[3] * rel.real() - e.linmap[1] * rel.imag()) / det;
  double y = (-e.linmap[2] * rel.real() + e.linmap[0] * rel.imag()) / det;
  double r = std::hypot(x, y);
  if (r < 1.0 - tol) return PointClass::Interior;
  if (r > 1.0 + tol) return PointClass::Exterior;
  return PointClass::OnCurve;
}

int winding(const OrientedEllipse& e, cplx z, int samples) {
  if (samples < 64) samples = 64;
  double scale = std::max({e.semi_major, std::abs(z - e.v), 1e-300});
  double near_tol = 1e-13 * scale;

  double total = 0.0;
  cplx prev = e.at(0.0) - z;
  if (std::abs(prev) <= near_tol)
    throw OnCurveAmbiguity("winding: sample point coincides with z");
  for (int k = 1; k <= samples; ++k) {
    double t0 = 2.0 * kPi * (k - 1) / samples;
    double t1 = 2.0 * kPi * k / samples;
    // Subdivide until the argument step is unambiguous (< pi/2).
    struct Seg {
      double a, b;
      cplx fa;
    };
    std::vector<Seg> stack{{t0, t1, prev}};
    while (!stack.empty()) {
      Seg s = stack.back();
      stack.pop_back();
      cplx fb = e.at(s.b) - z;
      if (std::abs(fb) <= near_tol)
        throw OnCurveAmbiguity("winding: sample point coincides with z");
      double d = std::arg(fb / s.fa);
      if (std::abs(d) < kPi / 2 || s.b - s.a < 1e-9) {
        total += d;
        prev = fb;
      } else {
        double mid = (s.a + s.b) / 2;
        cplx fm = e.at(mid) - z;
        if (std::abs(fm) <= near_tol)
          throw OnCurveAmbiguity("winding: sample point coincides with z");
        stack.push_back({mid, s.b, fm});
        stack.push_back({s.a, mid, s.fa});
      }
    }
  }
  return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

std::vector<cplx> sample_boundary(const OrientedEllipse& e, int n) {
  std::vector<cplx> pts;
  pts.reserve(n);
  for (int k = 0; k < n; ++k) pts.push_back(e.at(2.0 * kPi * k / n));
  return pts;
}

}  // namespace jpe
