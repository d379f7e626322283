#include "sphereconv/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace sphereconv {

double mollifier(double x, const MollifierParams& p) {
  const double a = std::abs(x);
  if (a >= 1.0) return 0.0;
  if (p.is_sharp()) return 1.0;
  if (a == 0.0) return 1.0;
  const double q = std::pow(a, -p.alpha);
  return std::exp(1.0 / (1.0 - q));
}

double ball_bump(const Vec3& x, const Vec3& center, double radius,
                 const MollifierParams& p) {
  if (!(radius > 0.0)) return 0.0;
  return mollifier((x - center).norm() / radius, p);
}

double cone_bump(const Vec4& a, const Vec4& apex, double trim, const MollifierParams& p) {
  const Vec4 d = a - apex;
  const double rp = d[3];
  if (!(rp < 0.0)) return 0.0;
  const double xp = d.head<3>().norm();
  return mollifier(xp / rp, p) * mollifier(1.0 + 2.0 * rp / trim, p);
}

KnotSet3::KnotSet3(std::vector<Vec3> points, double radius, std::vector<double> weights)
    : points_(std::move(points)), radius_(radius), weights_(std::move(weights)) {
  if (!(radius_ > 0.0)) throw UsageError("knot radius must be positive");
  if (weights_.empty()) weights_.assign(points_.size(), 1.0);
  if (weights_.size() != points_.size()) throw UsageError("knot weight count mismatch");
}

KnotSet4::KnotSet4(std::vector<Ball> knots, double trim_height, std::vector<double> weights)
    : knots_(std::move(knots)), weights_(std::move(weights)), trim_(trim_height) {
  if (!(trim_ > 0.0)) throw UsageError("trim height must be positive");
  for (const auto& b : knots_) {
    if (!(b.radius > 0.0) || !std::isfinite(b.radius) || !b.center.allFinite())
      throw UsageError("knot radii must be positive and finite");
  }
  if (weights_.empty()) weights_.assign(knots_.size(), 1.0);
  if (weights_.size() != knots_.size()) throw UsageError("knot weight count mismatch");
}

KnotSet4 KnotSet4::lift(const KnotSet3& k, double trim_height) {
  std::vector<Ball> balls;
  balls.reserve(k.size());
  for (const auto& x : k.points()) balls.push_back({x, k.radius()});
  return KnotSet4(std::move(balls), trim_height, k.weights());
}

double KnotSet4::max_radius() const {
  double r = 0.0;
  for (const auto& b : knots_) r = std::max(r, b.radius);
  return r;
}

double KnotSet4::min_radius() const {
  if (knots_.empty()) return 0.0;
  double r = knots_.front().radius;
  for (const auto& b : knots_) r = std::min(r, b.radius);
  return r;
}

bool KnotSet4::union_contains(const Vec3& x) const {
  for (const auto& b : knots_)
    if ((x - b.center).squaredNorm() <= b.radius * b.radius) return true;
  return false;
}

bool KnotSet4::union_contains_open(const Vec3& x) const {
  for (const auto& b : knots_)
    if ((x - b.center).squaredNorm() < b.radius * b.radius) return true;
  return false;
}

KnotSet4 KnotSet4::with_mirror_flag(bool flag) const {
  KnotSet4 out = *this;
  out.mirrored_ = flag;
  return out;
}

std::size_t OccupancyBitmap::count() const {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), char(1)));
}

namespace {

void warn_if_clipped(const std::vector<Ball>& balls, double L) {
  std::size_t clipped = 0;
  for (const auto& b : balls) {
    for (int a = 0; a < 3; ++a) {
      if (b.center[a] - b.radius < -L || b.center[a] + b.radius > L) {
        ++clipped;
        break;
      }
    }
  }
  if (clipped > 0) {
    std::ostringstream os;
    os << clipped << " kernel support(s) reach outside [-L, L)^3 and are clipped";
    warn(os.str());
  }
}

}  // namespace

ScalarField rasterize_radial(const std::vector<Ball>& balls, const std::vector<double>& w,
                             const UniformGrid& grid,
                             const std::function<double(std::size_t, double)>& profile) {
  if (grid.dimension() != 3) throw UsageError("expected a 3D grid");
  if (w.size() != balls.size()) throw UsageError("weight count mismatch");
  warn_if_clipped(balls, grid.half_extent());
  ScalarField f(grid);
  // Work is split over z slabs so writes never collide.
  parallel_for(static_cast<std::size_t>(grid.per_axis()), [&](std::size_t z0, std::size_t z1) {
    for (std::size_t i = 0; i < balls.size(); ++i) {
      const Vec3& c = balls[i].center;
      const double r = balls[i].radius;
      int xl, xh, yl, yh, zl, zh;
      if (!grid.axis_range(c.z() - r, c.z() + r, zl, zh)) continue;
      zl = std::max<int>(zl, static_cast<int>(z0));
      zh = std::min<int>(zh, static_cast<int>(z1) - 1);
      if (zl > zh) continue;
      if (!grid.axis_range(c.x() - r, c.x() + r, xl, xh)) continue;
      if (!grid.axis_range(c.y() - r, c.y() + r, yl, yh)) continue;
      for (int iz = zl; iz <= zh; ++iz) {
        const double dz = grid.axis_coord(iz) - c.z();
        for (int iy = yl; iy <= yh; ++iy) {
          const double dy = grid.axis_coord(iy) - c.y();
          const double dyz = dy * dy + dz * dz;
          if (dyz >= r * r) continue;
          const std::size_t base = grid.index(0, iy, iz);
          for (int ix = xl; ix <= xh; ++ix) {
            const double dx = grid.axis_coord(ix) - c.x();
            const double d2 = dx * dx + dyz;
            if (d2 >= r * r) continue;
            f.values[base + ix] += w[i] * profile(i, std::sqrt(d2));
          }
        }
      }
    }
  });
  return f;
}

namespace {

// 8-point Gauss-Legendre nodes and weights on [-1, 1].
constexpr double kGlX[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                            -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                            0.7966664774136267,  0.9602898564975363};
constexpr double kGlW[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                            0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                            0.2223810344533745, 0.1012285362903763};

template <class F>
double gauss_legendre(F&& f, double a, double b, int panels) {
  if (!(b > a)) return 0.0;
  const double h = (b - a) / panels;
  double sum = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double mid = a + (k + 0.5) * h;
    for (int q = 0; q < 8; ++q) sum += kGlW[q] * f(mid + 0.5 * h * kGlX[q]);
  }
  return 0.5 * h * sum;
}

}  // namespace

double convolved_ball_bumps(double d, double r1, double r2, const MollifierParams& p) {
  if (!(r1 > 0.0) || !(r2 > 0.0)) throw UsageError("radii must be positive");
  d = std::abs(d);
  if (d >= r1 + r2) return 0.0;
  constexpr double pi = 3.14159265358979323846;
  // Phi(a) = int_0^a psi(s / r2) s ds.
  auto phi = [&](double a) {
    a = std::min(a, r2);
    return gauss_legendre([&](double s) { return mollifier(s / r2, p) * s; }, 0.0, a, 16);
  };
  auto inner = [&](double rho) {
    if (d < 1e-12 * (r1 + r2)) return 4.0 * pi * rho * rho * mollifier(rho / r2, p);
    const double hi = d + rho, lo = std::abs(d - rho);
    if (lo >= r2) return 0.0;
    return 2.0 * pi * rho / d * (phi(hi) - phi(lo));
  };
  // The integrand has kinks where |d - rho| or d + rho crosses r2.
  std::vector<double> cuts = {0.0, r1};
  for (double c : {r2 - d, d - r2, d + r2})
    if (c > 0.0 && c < r1) cuts.push_back(c);
  std::sort(cuts.begin(), cuts.end());
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
    sum += gauss_legendre([&](double rho) { return mollifier(rho / r1, p) * inner(rho); },
                          cuts[k], cuts[k + 1], 24);
  return sum;
}

ConvolvedKernelTable::ConvolvedKernelTable(double r1, double r2, const MollifierParams& p,
                                           int samples)
    : support_(r1 + r2), values_(static_cast<std::size_t>(samples) + 1) {
  parallel_for(values_.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i)
      values_[i] = convolved_ball_bumps(support_ * static_cast<double>(i) / samples, r1, r2, p);
  });
}

double ConvolvedKernelTable::operator()(double d) const {
  d = std::abs(d);
  if (d >= support_) return 0.0;
  const int n = static_cast<int>(values_.size()) - 1;
  const double u = d / support_ * n;
  const int i = std::min(static_cast<int>(u), n - 1);
  const double t = u - i;
  auto v = [&](int k) {
    if (k < 0) return values_[static_cast<std::size_t>(-k)];  // even in d
    if (k > n) return 0.0;
    return values_[static_cast<std::size_t>(k)];
  };
  // Catmull-Rom through i-1 .. i+2.
  const double p0 = v(i - 1), p1 = v(i), p2 = v(i + 1), p3 = v(i + 2);
  return p1 + 0.5 * t * (p2 - p0 + t * (2 * p0 - 5 * p1 + 4 * p2 - p3 + t * (3 * (p1 - p2) + p3 - p0)));
}

ScalarField rasterize_bumps3(const KnotSet3& k, const UniformGrid& grid,
                             const MollifierParams& p) {
  std::vector<Ball> balls;
  balls.reserve(k.size());
  for (const auto& x : k.points()) balls.push_back({x, k.radius()});
  const double inv = 1.0 / k.radius();
  return rasterize_radial(balls, k.weights(), grid,
                          [&](std::size_t, double d) { return mollifier(d * inv, p); });
}

ScalarField rasterize_balls(const KnotSet4& k, const UniformGrid& grid,
                            const MollifierParams& p) {
  const auto& balls = k.knots();
  return rasterize_radial(balls, k.weights(), grid, [&](std::size_t i, double d) {
    return mollifier(d / balls[i].radius, p);
  });
}

ScalarField rasterize_bumps4(const KnotSet4& k, const UniformGrid& grid4,
                             const MollifierParams& p) {
  if (grid4.dimension() != 4) throw UsageError("expected a 4D grid");
  ScalarField f(grid4);
  const int nr = grid4.r_count();
  const double trim = k.trim_height();
  const auto& balls = k.knots();
  const auto& w = k.weights();
  // Each radius slice is independent: split the work over r.
  parallel_for(static_cast<std::size_t>(nr), [&](std::size_t r0, std::size_t r1) {
    for (std::size_t i = 0; i < balls.size(); ++i) {
      const Vec3& c = balls[i].center;
      const double ra = balls[i].radius;
      int rl, rh;
      if (!grid4.r_range(ra - trim, ra, rl, rh)) continue;
      rl = std::max<int>(rl, static_cast<int>(r0));
      rh = std::min<int>(rh, static_cast<int>(r1) - 1);
      for (int ir = rl; ir <= rh; ++ir) {
        const double rp = grid4.r_coord(ir) - ra;
        if (!(rp < 0.0)) continue;
        const double trim_factor = mollifier(1.0 + 2.0 * rp / trim, p);
        if (trim_factor == 0.0) continue;
        const double rad = -rp;
        int xl, xh, yl, yh, zl, zh;
        if (!grid4.axis_range(c.x() - rad, c.x() + rad, xl, xh)) continue;
        if (!grid4.axis_range(c.y() - rad, c.y() + rad, yl, yh)) continue;
        if (!grid4.axis_range(c.z() - rad, c.z() + rad, zl, zh)) continue;
        for (int iz = zl; iz <= zh; ++iz) {
          const double dz = grid4.axis_coord(iz) - c.z();
          for (int iy = yl; iy <= yh; ++iy) {
            const double dy = grid4.axis_coord(iy) - c.y();
            const double dyz = dy * dy + dz * dz;
            if (dyz >= rad * rad) continue;
            const std::size_t base = grid4.index(0, iy, iz, ir);
            for (int ix = xl; ix <= xh; ++ix) {
              const double dx = grid4.axis_coord(ix) - c.x();
              const double d2 = dx * dx + dyz;
              if (d2 >= rad * rad) continue;
              f.values[base + ix] += w[i] * trim_factor * mollifier(std::sqrt(d2) / rad, p);
            }
          }
        }
      }
    }
  });
  return f;
}

double default_sublevel_threshold(const ScalarField& f) {
  return 1e-9 * std::max(f.max_value(), 0.0);
}

OccupancyBitmap sublevel_extract(const ScalarField& f, std::optional<double> tau) {
  const double t = tau ? *tau : default_sublevel_threshold(f);
  OccupancyBitmap out{f.grid, std::vector<char>(f.values.size(), 0)};
  for (std::size_t i = 0; i < f.values.size(); ++i) out.bits[i] = f.values[i] > t ? 1 : 0;
  return out;
}

namespace {

double cell_measure(const UniformGrid& g) {
  double m = std::pow(g.spacing(), 3);
  if (g.dimension() == 4) m *= g.r_spacing();
  return m;
}

}  // namespace

double volume_functional(const ScalarField& f) {
  return cell_measure(f.grid) * std::accumulate(f.values.begin(), f.values.end(), 0.0);
}

double inner_product(const ScalarField& a, const ScalarField& b) {
  if (!(a.grid == b.grid)) throw UsageError("inner product of fields on different grids");
  double s = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) s += a.values[i] * b.values[i];
  return cell_measure(a.grid) * s;
}

SetSampler ball_union_sampler(const KnotSet4& k) {
  if (k.empty()) throw UsageError("cannot sample an empty ball union");
  auto balls = std::make_shared<std::vector<Ball>>(k.knots());
  auto cumulative = std::make_shared<std::vector<double>>();
  double acc = 0.0;
  for (const auto& b : *balls) {
    acc += b.radius * b.radius;
    cumulative->push_back(acc);
  }
  SetSampler s;
  s.sample = [balls, cumulative](std::mt19937_64& rng) -> Vec3 {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> g(0.0, 1.0);
    Vec3 last = balls->front().center;
    for (int attempt = 0; attempt < 100000; ++attempt) {
      const double t = u(rng) * cumulative->back();
      const auto it = std::upper_bound(cumulative->begin(), cumulative->end(), t);
      const std::size_t i =
          std::min<std::size_t>(it - cumulative->begin(), balls->size() - 1);
      Vec3 d(g(rng), g(rng), g(rng));
      const double dn = d.norm();
      if (dn == 0.0) continue;
      const Vec3 x = (*balls)[i].center + (*balls)[i].radius / dn * d;
      last = x;
      bool buried = false;
      for (std::size_t j = 0; j < balls->size() && !buried; ++j) {
        if (j == i) continue;
        const double rj = (*balls)[j].radius;
        buried = (x - (*balls)[j].center).squaredNorm() < rj * rj * (1.0 - 1e-12);
      }
      if (!buried) return x;
    }
    return last;
  };
  s.distance = [balls](const Vec3& x) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& b : *balls) best = std::min(best, (x - b.center).norm() - b.radius);
    return std::max(best, 0.0);
  };
  return s;
}

}  // namespace sphereconv
