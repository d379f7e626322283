#include "sphereconv/correlation.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>

namespace sphereconv {

KnotSet4 mirror_r(const KnotSet4& k) { return k.with_mirror_flag(!k.mirrored()); }

namespace {

void check_pair_cap(std::size_t n1, std::size_t n2, std::size_t cap) {
  if (n1 != 0 && n2 > cap / n1)
    throw ResourceError("obstacle needs " + std::to_string(n1) + " x " + std::to_string(n2) +
                        " pairs, over the cap of " + std::to_string(cap));
}

}  // namespace

ObstacleKnots obstacle_knots(const KnotSet4& k1, const KnotSet4& k2, const Mat3& R,
                             std::size_t pair_cap) {
  const std::size_t n1 = k1.size(), n2 = k2.size();
  check_pair_cap(n1, n2, pair_cap);
  std::vector<Vec3> rotated(n2);
  for (std::size_t j = 0; j < n2; ++j) rotated[j] = R * k2.knots()[j].center;
  std::vector<Ball> balls(n1 * n2);
  std::vector<double> w(n1 * n2);
  parallel_for(n1, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const Ball& bi = k1.knots()[i];
      for (std::size_t j = 0; j < n2; ++j) {
        balls[i * n2 + j] = {bi.center - rotated[j], bi.radius + k2.knots()[j].radius};
        w[i * n2 + j] = k1.weights()[i] * k2.weights()[j];
      }
    }
  });
  return {KnotSet4(std::move(balls), k1.trim_height() + k2.trim_height(), std::move(w)), R};
}

ObstacleKnots obstacle_knots(const KnotSet3& k1, const KnotSet3& k2, const Mat3& R,
                             std::size_t pair_cap) {
  const double trim = 2.0 * (k1.radius() + k2.radius());
  return obstacle_knots(KnotSet4::lift(k1, trim / 2.0), KnotSet4::lift(k2, trim / 2.0), R,
                        pair_cap);
}

KnotSet4 slice_at(const ObstacleKnots& o, double level) {
  std::vector<Ball> balls;
  std::vector<double> w;
  const auto& src = o.knots.knots();
  for (std::size_t k = 0; k < src.size(); ++k) {
    const double r = src[k].radius - level;
    if (!(r > 0.0)) continue;
    balls.push_back({src[k].center, r});
    w.push_back(o.knots.weights()[k]);
  }
  return KnotSet4(std::move(balls), o.knots.trim_height(), std::move(w));
}

CollisionResult collide(const KnotSet4& k1, const KnotSet4& k2, const RigidMotion& m) {
  const std::size_t n1 = k1.size(), n2 = k2.size();
  std::vector<Vec3> moved(n2);
  for (std::size_t j = 0; j < n2; ++j) moved[j] = act_point(m, k2.knots()[j].center);
  // Lowest colliding row so far; chunks skip rows past it.
  std::atomic<std::size_t> best_i{std::numeric_limits<std::size_t>::max()};
  std::mutex mu;
  std::size_t best_j = 0;
  parallel_for(n1, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e && i < best_i.load(); ++i) {
      const Ball& bi = k1.knots()[i];
      for (std::size_t j = 0; j < n2; ++j) {
        const double rr = bi.radius + k2.knots()[j].radius;
        if ((moved[j] - bi.center).squaredNorm() <= rr * rr) {
          std::lock_guard lock(mu);
          if (i < best_i.load()) {
            best_i = i;
            best_j = j;
          }
          return;
        }
      }
    }
  });
  CollisionResult res;
  if (best_i.load() != std::numeric_limits<std::size_t>::max()) {
    res.hit = true;
    res.witness = std::make_pair(best_i.load(), best_j);
  }
  return res;
}

CollisionResult collide(const KnotSet3& k1, const KnotSet3& k2, const RigidMotion& m) {
  return collide(KnotSet4::lift(k1, 2.0 * k1.radius()), KnotSet4::lift(k2, 2.0 * k2.radius()),
                 m);
}

bool trimmed_cones_intersect(const Vec4& apex1, bool flipped1, const Vec4& apex2,
                             bool flipped2, double trim) {
  // Cross-section radius is linear in r over each cone's r-range, so the sum
  // of the two radii is linear on the shared range and peaks at an end.
  struct Cone {
    double lo, hi, a, s;  // radius(r) = s (r - a) on [lo, hi]
  };
  auto make = [&](const Vec4& apex, bool flipped) {
    const double a = flipped ? -apex[3] : apex[3];
    return flipped ? Cone{a, a + trim, a, 1.0} : Cone{a - trim, a, a, -1.0};
  };
  const Cone c1 = make(apex1, flipped1), c2 = make(apex2, flipped2);
  const double lo = std::max(c1.lo, c2.lo), hi = std::min(c1.hi, c2.hi);
  if (lo > hi) return false;
  const double d = (apex1.head<3>() - apex2.head<3>()).norm();
  auto reach = [&](double r) { return c1.s * (r - c1.a) + c2.s * (r - c2.a); };
  return d <= std::max(reach(lo), reach(hi));
}

namespace {

ScalarField gap_from_balls(const KnotSet4& balls, const UniformGrid& grid,
                           const MollifierParams& p, const std::vector<double>& r1,
                           const std::vector<double>& r2, double level, GapKernel kernel) {
  const auto& b = balls.knots();
  if (kernel == GapKernel::Substituted) {
    return rasterize_radial(b, balls.weights(), grid, [&](std::size_t i, double d) {
      return mollifier(d / b[i].radius, p);
    });
  }
  // One table per distinct (r_i + level-shift, r_j) pair.
  std::map<std::pair<double, double>, std::shared_ptr<ConvolvedKernelTable>> tables;
  std::vector<const ConvolvedKernelTable*> which(b.size());
  for (std::size_t k = 0; k < b.size(); ++k) {
    // A level shift shrinks the first operand's balls.
    const std::pair<double, double> key{r1[k] - level, r2[k]};
    if (!(key.first > 0.0)) throw UsageError("level shift removes a whole ball");
    auto& t = tables[key];
    if (!t) t = std::make_shared<ConvolvedKernelTable>(key.first, key.second, p);
    which[k] = t.get();
  }
  return rasterize_radial(b, balls.weights(), grid,
                          [&](std::size_t i, double d) { return (*which[i])(d); });
}

}  // namespace

ScalarField gap_field_spatial(const KnotSet4& k1, const KnotSet4& k2, const Mat3& R,
                              const UniformGrid& grid, const MollifierParams& p,
                              double level, GapKernel kernel) {
  const ObstacleKnots o = obstacle_knots(k1, k2, R);
  const std::size_t n2 = k2.size();
  std::vector<double> r1, r2;
  KnotSet4 balls;
  if (kernel == GapKernel::Convolved) {
    // Keep index alignment with the pair list: no ball is dropped here.
    r1.resize(o.knots.size());
    r2.resize(o.knots.size());
    std::vector<Ball> bs = o.knots.knots();
    for (std::size_t k = 0; k < bs.size(); ++k) {
      r1[k] = k1.knots()[k / n2].radius;
      r2[k] = k2.knots()[k % n2].radius;
      bs[k].radius -= level;
      if (!(bs[k].radius > 0.0)) throw UsageError("level shift removes a whole ball");
    }
    balls = KnotSet4(std::move(bs), o.knots.trim_height(), o.knots.weights());
  } else {
    balls = slice_at(o, level);
  }
  return gap_from_balls(balls, grid, p, r1, r2, level, kernel);
}

ScalarField gap_field_spatial(const KnotSet3& k1, const KnotSet3& k2, const Mat3& R,
                              const UniformGrid& grid, const MollifierParams& p,
                              double level, GapKernel kernel) {
  return gap_field_spatial(KnotSet4::lift(k1, 2.0 * k1.radius()),
                           KnotSet4::lift(k2, 2.0 * k2.radius()), R, grid, p, level, kernel);
}

double gap_at(const KnotSet4& k1, const KnotSet4& k2, const RigidMotion& m,
              const MollifierParams& p, double level) {
  double g = 0.0;
  for (std::size_t i = 0; i < k1.size(); ++i) {
    const Ball& bi = k1.knots()[i];
    for (std::size_t j = 0; j < k2.size(); ++j) {
      const Ball& bj = k2.knots()[j];
      const double s = bi.radius + bj.radius - level;
      if (!(s > 0.0)) continue;
      const double d = (act_point(m, bj.center) - bi.center).norm();
      g += k1.weights()[i] * k2.weights()[j] * mollifier(d / s, p);
    }
  }
  return g;
}

}  // namespace sphereconv
