#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sphereconv/correlation.hpp"

#include <numbers>
#include <random>

using namespace sphereconv;

namespace {

constexpr double kPi = std::numbers::pi;

bool near(const RigidMotion& a, const RigidMotion& b, double tol) {
  return (a.R - b.R).cwiseAbs().maxCoeff() <= tol && (a.t - b.t).cwiseAbs().maxCoeff() <= tol;
}

RigidMotion random_motion(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  return RigidMotion::axis_angle(Vec3(u(rng), u(rng), u(rng)), kPi * u(rng),
                                 Vec3(u(rng), u(rng), u(rng)));
}

}  // namespace

TEST_CASE("validate") {
  RigidMotion::identity().validate();
  RigidMotion::axis_angle(Vec3(1, 2, 3), 0.7).validate();
  RigidMotion bad;
  bad.R(0, 0) = 2.0;
  CHECK_THROWS_AS(bad.validate(), UsageError);
  RigidMotion reflection;
  reflection.R(2, 2) = -1.0;
  CHECK_THROWS_AS(reflection.validate(), UsageError);
}

TEST_CASE("compose and invert") {
  std::mt19937_64 rng(1);
  const RigidMotion m = random_motion(rng);
  CHECK(near(compose(RigidMotion::identity(), m), m, 0.0));
  CHECK(near(compose(m, invert(m)), RigidMotion::identity(), 1e-9));
  CHECK(near(invert(invert(m)), m, 1e-12));
  CHECK(near(invert(RigidMotion::identity()), RigidMotion::identity(), 0.0));
  const auto tr = invert(RigidMotion::translation(Vec3(1, -2, 3)));
  CHECK(tr.R == Mat3::Identity());
  CHECK(tr.t == Vec3(-1, 2, -3));

  const auto q = RigidMotion::axis_angle(Vec3::UnitZ(), kPi / 2);
  const auto h = compose(q, q);
  CHECK(near(h, RigidMotion::axis_angle(Vec3::UnitZ(), kPi), 1e-12));
  Mat3 half;
  half << -1, 0, 0, 0, -1, 0, 0, 0, 1;
  CHECK((h.R - half).cwiseAbs().maxCoeff() < 1e-12);

  // many compositions stay a rotation
  RigidMotion acc;
  for (int i = 0; i < 10000; ++i) acc = compose(acc, random_motion(rng));
  acc.validate(1e-9);
}

TEST_CASE("actions") {
  const Vec3 x(0.3, -0.2, 0.9);
  CHECK(act_point(RigidMotion::identity(), x) == x);
  const auto q = RigidMotion::axis_angle(Vec3::UnitZ(), kPi / 2);
  CHECK((act_point(q, Vec3(1, 0, 0)) - Vec3(0, 1, 0)).norm() < 1e-15);
  std::mt19937_64 rng(2);
  const RigidMotion m = random_motion(rng);
  const Vec4 a(0.1, 0.2, 0.3, 0.77);
  CHECK(act_knot(m, a)[3] == 0.77);
  CHECK((act_knot(m, a).head<3>() - act_point(m, a.head<3>())).norm() == 0.0);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 100; ++i) {
    const Vec3 p(u(rng), u(rng), u(rng)), r(u(rng), u(rng), u(rng));
    CHECK(std::abs((act_point(m, p) - act_point(m, r)).norm() - (p - r).norm()) < 1e-12);
  }
}

TEST_CASE("transform knots") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<Ball> balls;
  for (int i = 0; i < 20; ++i) balls.push_back({Vec3(u(rng), u(rng), u(rng)), 0.1 + 0.05 * (u(rng) + 1)});
  const KnotSet4 k(balls, 1.0);
  const KnotSet4 same = transform_knots(RigidMotion::identity(), k);
  for (std::size_t i = 0; i < k.size(); ++i) CHECK(same.knots()[i].center == k.knots()[i].center);

  const Vec3 t(0.5, -0.25, 1.0);
  const KnotSet4 moved = transform_knots(RigidMotion::translation(t), k);
  for (std::size_t i = 0; i < k.size(); ++i) {
    CHECK((moved.knots()[i].center - (k.knots()[i].center + t)).norm() < 1e-15);
    CHECK(moved.knots()[i].radius == k.knots()[i].radius);
  }
  const RigidMotion m1 = random_motion(rng), m2 = random_motion(rng);
  const KnotSet4 lhs = transform_knots(m1, transform_knots(m2, k));
  const KnotSet4 rhs = transform_knots(compose(m1, m2), k);
  for (std::size_t i = 0; i < k.size(); ++i)
    CHECK((lhs.knots()[i].center - rhs.knots()[i].center).norm() < 1e-12);

  const KnotSet3 k3({Vec3(1, 0, 0)}, 0.5, {2.0});
  const KnotSet3 m3 = transform_knots(RigidMotion::axis_angle(Vec3::UnitZ(), kPi / 2), k3);
  CHECK((m3.points()[0] - Vec3(0, 1, 0)).norm() < 1e-15);
  CHECK(m3.radius() == 0.5);
  CHECK(m3.weights()[0] == 2.0);
  CHECK(transform_knots(m1, mirror_r(k)).mirrored());
}

TEST_CASE("geodesic distance") {
  std::mt19937_64 rng(4);
  const RigidMotion m = random_motion(rng);
  CHECK(geodesic_distance(m, m) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(geodesic_distance(RigidMotion::translation(Vec3(1, 2, 3)),
                          RigidMotion::translation(Vec3(1, 2, 5))) == doctest::Approx(2.0));
  for (double theta : {1e-9, 1e-4, 0.3, 2.0, kPi - 1e-6}) {
    CAPTURE(theta);
    const auto r = RigidMotion::axis_angle(Vec3(1, 1, 0), theta);
    CHECK(geodesic_distance(RigidMotion::identity(), r) ==
          doctest::Approx(std::sqrt(2.0) * theta).epsilon(1e-9));
  }
  for (int i = 0; i < 200; ++i) {
    const RigidMotion a = random_motion(rng), b = random_motion(rng), c = random_motion(rng);
    const double ab = geodesic_distance(a, b), ba = geodesic_distance(b, a);
    CHECK(ab == doctest::Approx(ba).epsilon(1e-9));
    CHECK(ab <= geodesic_distance(a, c) + geodesic_distance(c, b) + 1e-9);
  }
}

TEST_CASE("rotation log") {
  const Mat3 R = RigidMotion::axis_angle(Vec3::UnitX(), 0.5).R;
  const Mat3 W = rotation_log(R);
  CHECK(W(2, 1) == doctest::Approx(0.5));
  CHECK(W(1, 2) == doctest::Approx(-0.5));
  CHECK(rotation_log(Mat3::Identity()).norm() == 0.0);
  const Mat3 P = RigidMotion::axis_angle(Vec3(0, 1, 1), kPi).R;
  CHECK(rotation_log(P).norm() == doctest::Approx(std::sqrt(2.0) * kPi));
}

TEST_CASE("orthonormalize") {
  Mat3 R = RigidMotion::axis_angle(Vec3(1, 2, 3), 1.0).R;
  const Mat3 noisy = R + 1e-6 * Mat3::Ones();
  const Mat3 Q = orthonormalize(noisy);
  CHECK((Q * Q.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(Q.determinant() == doctest::Approx(1.0));
  CHECK((Q - R).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("motion literal") {
  const auto m = parse_motion("axis 0 0 1 90 1 2 3");
  CHECK((act_point(m, Vec3(1, 0, 0)) - Vec3(1, 3, 3)).norm() < 1e-12);
  const auto n = parse_motion("0 0 1 90 1 2 3");
  CHECK(near(m, n, 0.0));
  const auto pure = parse_motion("0 0 0 0 1 2 3");
  CHECK(pure.R == Mat3::Identity());
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    const RigidMotion r = random_motion(rng);
    CHECK(near(parse_motion(format_motion(r)), r, 1e-12));
  }
  CHECK_THROWS_AS(parse_motion("axis 0 0 1"), UsageError);
  CHECK_THROWS_AS(parse_motion("axis 0 0 1 x 0 0 0"), UsageError);
  CHECK_THROWS_AS(parse_motion("axis 0 0 0 10 0 0 0"), UsageError);
}

TEST_CASE("collision invariant under a common motion") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Ball> a, b;
    for (int i = 0; i < 4; ++i) a.push_back({0.3 * Vec3(u(rng), u(rng), u(rng)), 0.1});
    for (int i = 0; i < 3; ++i) b.push_back({0.3 * Vec3(u(rng), u(rng), u(rng)), 0.12});
    const KnotSet4 k1(a, 1.0), k2(b, 1.0);
    const RigidMotion rel = random_motion(rng);
    const RigidMotion g = random_motion(rng);
    // moving both sets by g turns the relative motion into g rel g^-1
    const RigidMotion rel2 = compose(g, compose(rel, invert(g)));
    CHECK(collide(transform_knots(g, k1), transform_knots(g, k2), rel2).hit == collide(k1, k2, rel).hit);
  }
}
