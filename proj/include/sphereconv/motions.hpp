// Rigid motions (R, t) in SE(3): group operations, actions and the geodesic metric.
#pragma once

#include "sphereconv/kernels.hpp"

namespace sphereconv {

struct RigidMotion {
  Mat3 R = Mat3::Identity();
  Vec3 t = Vec3::Zero();

  static RigidMotion identity() { return {}; }
  static RigidMotion translation(const Vec3& t);
  /// Rotation by `angle` radians about `axis` (any nonzero length), then
  /// translation by t.
  static RigidMotion axis_angle(const Vec3& axis, double angle, const Vec3& t = Vec3::Zero());

  /// Throws UsageError unless R R^T = I and det R = 1 within `tol` per entry.
  void validate(double tol = 1e-9) const;
};

/// (R1 R2, t1 + R1 t2); the rotation is re-orthonormalized when it drifts.
RigidMotion compose(const RigidMotion& a, const RigidMotion& b);
RigidMotion invert(const RigidMotion& m);

Vec3 act_point(const RigidMotion& m, const Vec3& x);
/// Moves the center; the radius coordinate is untouched.
Vec4 act_knot(const RigidMotion& m, const Vec4& a);

KnotSet3 transform_knots(const RigidMotion& m, const KnotSet3& k);
KnotSet4 transform_knots(const RigidMotion& m, const KnotSet4& k);

/// Skew-symmetric log of a rotation matrix via axis-angle, theta in [0, pi].
Mat3 rotation_log(const Mat3& R);

/// sqrt(|log(R1^T R2)|_F^2 + |t2 - t1|^2).
double geodesic_distance(const RigidMotion& a, const RigidMotion& b);

/// Nearest rotation in the Frobenius sense.
Mat3 orthonormalize(const Mat3& R);

/// Parses "[axis] ax ay az angle_deg tx ty tz".
RigidMotion parse_motion(const std::string& literal);
/// Inverse of parse_motion, with the leading "axis" keyword.
std::string format_motion(const RigidMotion& m);

}  // namespace sphereconv
