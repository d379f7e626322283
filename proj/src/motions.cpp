#include "sphereconv/motions.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <numbers>
#include <sstream>

namespace sphereconv {

RigidMotion RigidMotion::translation(const Vec3& t) { return {Mat3::Identity(), t}; }

RigidMotion RigidMotion::axis_angle(const Vec3& axis, double angle, const Vec3& t) {
  const double n = axis.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw UsageError("rotation axis must be nonzero");
  return {Eigen::AngleAxisd(angle, axis / n).toRotationMatrix(), t};
}

void RigidMotion::validate(double tol) const {
  if (!R.allFinite() || !t.allFinite()) throw UsageError("motion has non-finite entries");
  if (((R * R.transpose()) - Mat3::Identity()).cwiseAbs().maxCoeff() > tol ||
      std::abs(R.determinant() - 1.0) > tol)
    throw UsageError("rotation matrix is not orthonormal with det +1");
}

Mat3 orthonormalize(const Mat3& R) {
  Eigen::JacobiSVD<Mat3> svd(R, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 U = svd.matrixU();
  const Mat3 V = svd.matrixV();
  if ((U * V.transpose()).determinant() < 0.0) U.col(2) *= -1.0;
  return U * V.transpose();
}

RigidMotion compose(const RigidMotion& a, const RigidMotion& b) {
  RigidMotion out{a.R * b.R, a.t + a.R * b.t};
  if (((out.R * out.R.transpose()) - Mat3::Identity()).cwiseAbs().maxCoeff() > 1e-9)
    out.R = orthonormalize(out.R);
  return out;
}

RigidMotion invert(const RigidMotion& m) {
  const Mat3 Rt = m.R.transpose();
  return {Rt, -(Rt * m.t)};
}

Vec3 act_point(const RigidMotion& m, const Vec3& x) { return m.R * x + m.t; }

Vec4 act_knot(const RigidMotion& m, const Vec4& a) {
  Vec4 out;
  out.head<3>() = act_point(m, a.head<3>());
  out[3] = a[3];
  return out;
}

KnotSet3 transform_knots(const RigidMotion& m, const KnotSet3& k) {
  std::vector<Vec3> pts;
  pts.reserve(k.size());
  for (const auto& x : k.points()) pts.push_back(act_point(m, x));
  return KnotSet3(std::move(pts), k.radius(), k.weights());
}

KnotSet4 transform_knots(const RigidMotion& m, const KnotSet4& k) {
  std::vector<Ball> balls;
  balls.reserve(k.size());
  for (const auto& b : k.knots()) balls.push_back({act_point(m, b.center), b.radius});
  return KnotSet4(std::move(balls), k.trim_height(), k.weights()).with_mirror_flag(k.mirrored());
}

Mat3 rotation_log(const Mat3& R) {
  const double c = std::clamp((R.trace() - 1.0) / 2.0, -1.0, 1.0);
  const double theta = std::acos(c);
  const Mat3 A = R - R.transpose();
  if (theta < 1e-6) {
    // log R = (theta / (2 sin theta)) (R - R^T), series 1/2 + theta^2/12.
    return (0.5 + theta * theta / 12.0) * A;
  }
  if (std::numbers::pi - theta < 1e-6) {
    // Near pi the antisymmetric part vanishes; recover the axis from R + I.
    const Mat3 B = 0.5 * (R + Mat3::Identity());
    int k;
    B.diagonal().maxCoeff(&k);
    Vec3 axis = B.col(k) / std::sqrt(std::max(B(k, k), 1e-300));
    axis.normalize();
    // Fix the sign from the remaining antisymmetric part when it is usable.
    const Vec3 w(A(2, 1), A(0, 2), A(1, 0));
    if (w.dot(axis) < 0.0) axis = -axis;
    Mat3 K;
    K << 0, -axis.z(), axis.y(), axis.z(), 0, -axis.x(), -axis.y(), axis.x(), 0;
    return theta * K;
  }
  return (theta / (2.0 * std::sin(theta))) * A;
}

double geodesic_distance(const RigidMotion& a, const RigidMotion& b) {
  const Mat3 L = rotation_log(a.R.transpose() * b.R);
  return std::sqrt(L.squaredNorm() + (b.t - a.t).squaredNorm());
}

RigidMotion parse_motion(const std::string& literal) {
  std::istringstream in(literal);
  std::vector<std::string> tok;
  for (std::string s; in >> s;) tok.push_back(s);
  if (!tok.empty() && tok.front() == "axis") tok.erase(tok.begin());
  if (tok.size() != 7)
    throw UsageError("motion literal must be 'axis ax ay az angle_deg tx ty tz': '" + literal + "'");
  double v[7];
  for (int i = 0; i < 7; ++i) {
    std::size_t used = 0;
    try {
      v[i] = std::stod(tok[i], &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok[i].size() || !std::isfinite(v[i]))
      throw UsageError("bad number '" + tok[i] + "' in motion literal");
  }
  const Vec3 axis(v[0], v[1], v[2]);
  const Vec3 t(v[4], v[5], v[6]);
  if (v[3] == 0.0 && axis.norm() == 0.0) return RigidMotion::translation(t);
  return RigidMotion::axis_angle(axis, v[3] * std::numbers::pi / 180.0, t);
}

std::string format_motion(const RigidMotion& m) {
  const Eigen::AngleAxisd aa(m.R);
  std::ostringstream os;
  os.precision(17);
  os << "axis " << aa.axis().x() << ' ' << aa.axis().y() << ' ' << aa.axis().z() << ' '
     << aa.angle() * 180.0 / std::numbers::pi << ' ' << m.t.x() << ' ' << m.t.y() << ' '
     << m.t.z();
  return os.str();
}

}  // namespace sphereconv
