#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "jpe/util.hpp"

namespace jpe {

enum class Orientation { CounterClockwise, Clockwise, Degenerate };
enum class PointClass { Interior, Exterior, OnCurve };

// The curve {u t + v + w/t : t on the unit circle}: an ellipse centered at v
// with semi-axes |u|+|w| and ||u|-|w||, traversed counter-clockwise when
// |u| > |w|, clockwise when |u| < |w|, and collapsed to a segment when
// |u| = |w|. linmap is the real-linear map z -> u z + w conj(z) whose image
// of the unit circle (translated by v) is the curve.
struct OrientedEllipse {
  cplx u, v, w;
  double semi_major = 0.0;
  double semi_minor = 0.0;
  double major_axis_angle = 0.0;
  Orientation orientation = Orientation::Degenerate;
  std::array<double, 4> linmap{};  // row-major 2x2

  cplx at(double theta) const;  // point on the curve at parameter angle theta
};

constexpr double kEllipseTol = 1e-12;

OrientedEllipse make_ellipse(cplx u, cplx v, cplx w);

PointClass classify_point(const OrientedEllipse& e, cplx z,
                          double tol = kEllipseTol);

struct OnCurveAmbiguity : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Total argument increment of the curve around z, in turns. Off-curve points
// give exactly -1, 0 or +1; sample points too close to z raise
// OnCurveAmbiguity. Steps whose argument jump is too large are subdivided, so
// the rounding is reliable for any off-curve z.
int winding(const OrientedEllipse& e, cplx z, int samples = 256);

// N points of the curve for plotting/hull building.
std::vector<cplx> sample_boundary(const OrientedEllipse& e, int n);

}  // namespace jpe
