#include "sphereconv/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>

namespace sphereconv {

namespace {

constexpr double kPi = std::numbers::pi;

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Runs an in-place complex FFT over the grid's axes (x fastest).
void fft_inplace(std::vector<Complex>& data, const UniformGrid& g, int sign) {
  const auto d = g.dims();
  int rank = g.dimension();
  int n[4];
  // FFTW is row-major (last index fastest); our x is fastest.
  if (rank == 4) {
    n[0] = d[3];
    n[1] = d[2];
    n[2] = d[1];
    n[3] = d[0];
  } else {
    n[0] = d[2];
    n[1] = d[1];
    n[2] = d[0];
  }
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft(rank, n, ptr, ptr, sign, FFTW_ESTIMATE);
  }
  if (!plan) throw Error("FFT planning failed");
  fftw_execute(plan);
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plan);
}

double spatial_cell(const UniformGrid& g) {
  double c = std::pow(g.spacing(), 3);
  if (g.dimension() == 4) c *= g.r_spacing();
  return c;
}

// (-1)^{sum of signed indices}: the shift of the lattice origin to -L.
double origin_phase(const SpectralField& F, std::size_t idx) {
  const auto s = F.signed_indices(idx);
  const int sum = s[0] + s[1] + s[2] + s[3];
  return (sum % 2 == 0) ? 1.0 : -1.0;
}

// exp(-2 pi i s x / (2L)) for signed s over an axis of `count` nodes.
void axis_phases(double x, int count, double L, std::vector<Complex>& out) {
  out.resize(static_cast<std::size_t>(count));
  const double base = -2.0 * kPi * x / (2.0 * L);
  for (int k = 0; k < count; ++k) {
    const double a = base * SpectralField::signed_index(k, count);
    out[k] = Complex(std::cos(a), std::sin(a));
  }
}

// |omega| for every lattice index of a 3D grid.
std::vector<double> frequency_norms(const SpectralField& F) {
  std::vector<double> q(F.coeffs.size());
  const double step = F.frequency_step();
  for (std::size_t i = 0; i < q.size(); ++i) {
    const auto s = F.signed_indices(i);
    q[i] = step * std::sqrt(double(s[0]) * s[0] + double(s[1]) * s[1] + double(s[2]) * s[2]);
  }
  return q;
}

double max_frequency(const UniformGrid& g) {
  const double half = 0.5 * g.per_axis() + 1.0;
  return std::sqrt(3.0) * half * 0.5 / g.half_extent();
}

// 8-point Gauss-Legendre on [-1, 1].
constexpr double kGlX[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                            -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                            0.7966664774136267,  0.9602898564975363};
constexpr double kGlW[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                            0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                            0.2223810344533745, 0.1012285362903763};

}  // namespace

SpectralField::SpectralField(UniformGrid g, std::vector<Complex> c)
    : grid(g), coeffs(std::move(c)) {
  if (coeffs.size() != grid.node_count())
    throw UsageError("coefficient count does not match the lattice size");
}

SpectralField::SpectralField(UniformGrid g) : grid(g), coeffs(g.node_count()) {}

std::array<int, 4> SpectralField::signed_indices(std::size_t idx) const {
  const auto c = grid.coords(idx);
  const auto d = grid.dims();
  return {signed_index(c[0], d[0]), signed_index(c[1], d[1]), signed_index(c[2], d[2]),
          signed_index(c[3], d[3])};
}

std::size_t SpectralField::negated_index(std::size_t idx) const {
  const auto c = grid.coords(idx);
  const auto d = grid.dims();
  auto neg = [](int k, int n) { return (n - k) % n; };
  return grid.index(neg(c[0], d[0]), neg(c[1], d[1]), neg(c[2], d[2]), neg(c[3], d[3]));
}

double SpectralField::cell_measure() const {
  return std::pow(frequency_step(), dimension());
}

double SpectralField::norm() const {
  double s = 0.0;
  for (const auto& c : coeffs) s += std::norm(c);
  return std::sqrt(s * cell_measure());
}

SpectralField dft_forward(const ScalarField& f) {
  SpectralField F(f.grid);
  for (std::size_t i = 0; i < f.values.size(); ++i) F.coeffs[i] = f.values[i];
  fft_inplace(F.coeffs, f.grid, FFTW_FORWARD);
  const double cell = spatial_cell(f.grid);
  for (std::size_t i = 0; i < F.coeffs.size(); ++i) F.coeffs[i] *= cell * origin_phase(F, i);
  return F;
}

std::vector<Complex> dft_inverse_complex(const SpectralField& F) {
  std::vector<Complex> data(F.coeffs.size());
  const double scale = F.cell_measure();
  for (std::size_t i = 0; i < data.size(); ++i)
    data[i] = F.coeffs[i] * (scale * origin_phase(F, i));
  fft_inplace(data, F.grid, FFTW_BACKWARD);
  return data;
}

ScalarField dft_inverse(const SpectralField& F) {
  const auto data = dft_inverse_complex(F);
  ScalarField f(F.grid);
  for (std::size_t i = 0; i < data.size(); ++i) f.values[i] = data[i].real();
  return f;
}

SpectralField dft_direct(const ScalarField& f) {
  const UniformGrid& g = f.grid;
  const auto d = g.dims();
  const double L = g.half_extent();
  // tables[a][j * n + k] = exp(-2 pi i omega_j x_k) along axis a.
  std::array<std::vector<Complex>, 4> tables;
  for (int a = 0; a < 4; ++a) {
    const int n = d[a];
    tables[a].resize(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j) {
      const int s = SpectralField::signed_index(j, n);
      for (int k = 0; k < n; ++k) {
        const double x = (a == 3) ? (g.dimension() == 4 ? g.r_coord(k) : 0.0) : g.axis_coord(k);
        const double ang = -2.0 * kPi * s * x / (2.0 * L);
        tables[a][static_cast<std::size_t>(j) * n + k] = Complex(std::cos(ang), std::sin(ang));
      }
    }
  }
  SpectralField F(g);
  const double cell = spatial_cell(g);
  parallel_for(F.coeffs.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t jdx = b; jdx < e; ++jdx) {
      const auto j = g.coords(jdx);
      Complex acc = 0.0;
      for (std::size_t kdx = 0; kdx < f.values.size(); ++kdx) {
        const auto k = g.coords(kdx);
        Complex ph = tables[0][static_cast<std::size_t>(j[0]) * d[0] + k[0]] *
                     tables[1][static_cast<std::size_t>(j[1]) * d[1] + k[1]] *
                     tables[2][static_cast<std::size_t>(j[2]) * d[2] + k[2]];
        if (d[3] > 1) ph *= tables[3][static_cast<std::size_t>(j[3]) * d[3] + k[3]];
        acc += f.values[kdx] * ph;
      }
      F.coeffs[jdx] = cell * acc;
    }
  });
  return F;
}

namespace {

// Separable NDFT over points (x, optional r) with weights.
SpectralField ndft_points(const std::vector<Vec4>& pts, const std::vector<double>& w,
                          const UniformGrid& grid) {
  SpectralField F(grid);
  const auto d = grid.dims();
  const double L = grid.half_extent();
  const bool four = grid.dimension() == 4;
  const std::size_t slabs = static_cast<std::size_t>(d[2]) * d[3];
  parallel_for(slabs, [&](std::size_t b, std::size_t e) {
    std::vector<Complex> ex, ey, ez, er;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      axis_phases(pts[i][0], d[0], L, ex);
      axis_phases(pts[i][1], d[1], L, ey);
      axis_phases(pts[i][2], d[2], L, ez);
      if (four) axis_phases(pts[i][3], d[3], L, er);
      for (std::size_t s = b; s < e; ++s) {
        const int kz = static_cast<int>(s % d[2]);
        const int kr = static_cast<int>(s / d[2]);
        Complex zr = w[i] * ez[kz];
        if (four) zr *= er[kr];
        for (int ky = 0; ky < d[1]; ++ky) {
          const Complex yzr = zr * ey[ky];
          Complex* row = &F.coeffs[grid.index(0, ky, kz, kr)];
          for (int kx = 0; kx < d[0]; ++kx) row[kx] += yzr * ex[kx];
        }
      }
    }
  });
  return F;
}

}  // namespace

SpectralField ndft_knots(const KnotSet3& k, const UniformGrid& grid) {
  if (grid.dimension() != 3) throw UsageError("equiradius knots need a 3D lattice");
  std::vector<Vec4> pts;
  pts.reserve(k.size());
  for (const auto& x : k.points()) pts.emplace_back(x.x(), x.y(), x.z(), 0.0);
  return ndft_points(pts, k.weights(), grid);
}

SpectralField ndft_knots(const KnotSet4& k, const UniformGrid& grid4) {
  if (grid4.dimension() != 4) throw UsageError("lifted knots need a 4D lattice");
  std::vector<Vec4> pts;
  pts.reserve(k.size());
  const double sgn = k.mirrored() ? -1.0 : 1.0;
  for (const auto& b : k.knots())
    pts.emplace_back(b.center.x(), b.center.y(), b.center.z(), sgn * b.radius);
  return ndft_points(pts, k.weights(), grid4);
}

SpectralField ndft_centers(const KnotSet4& k, const UniformGrid& grid) {
  if (grid.dimension() != 3) throw UsageError("expected a 3D lattice");
  std::vector<Vec4> pts;
  pts.reserve(k.size());
  for (const auto& b : k.knots()) pts.emplace_back(b.center.x(), b.center.y(), b.center.z(), 0.0);
  return ndft_points(pts, k.weights(), grid);
}

double RadialTransform::evaluate(double q, const MollifierParams& p) {
  q = std::abs(q);
  const int panels = 32 + static_cast<int>(std::ceil(8.0 * q));
  const double h = 1.0 / panels;
  double sum = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double mid = (k + 0.5) * h;
    for (int g = 0; g < 8; ++g) {
      const double rho = mid + 0.5 * h * kGlX[g];
      const double arg = 2.0 * kPi * q * rho;
      const double sinc = std::abs(arg) < 1e-8 ? 1.0 - arg * arg / 6.0 : std::sin(arg) / arg;
      sum += kGlW[g] * mollifier(rho, p) * rho * rho * sinc;
    }
  }
  return 4.0 * kPi * 0.5 * h * sum;
}

RadialTransform::RadialTransform(const MollifierParams& p, double q_max, int samples)
    : q_max_(q_max), values_(static_cast<std::size_t>(samples) + 1) {
  if (!(q_max > 0.0) || samples < 4) throw UsageError("bad radial table range");
  parallel_for(values_.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i)
      values_[i] = evaluate(q_max_ * static_cast<double>(i) / samples, p);
  });
}

double RadialTransform::operator()(double q) const {
  q = std::abs(q);
  const int n = static_cast<int>(values_.size()) - 1;
  if (q >= q_max_) {
    if (q == q_max_) return values_.back();
    throw UsageError("radial transform queried beyond its table");
  }
  const double u = q / q_max_ * n;
  const int i = std::min(static_cast<int>(u), n - 1);
  const double t = u - i;
  auto v = [&](int k) {
    if (k < 0) return values_[static_cast<std::size_t>(-k)];  // even in q
    if (k > n) return values_[static_cast<std::size_t>(2 * n - k)];
    return values_[static_cast<std::size_t>(k)];
  };
  const double p0 = v(i - 1), p1 = v(i), p2 = v(i + 1), p3 = v(i + 2);
  return p1 + 0.5 * t * (p2 - p0 + t * (2 * p0 - 5 * p1 + 4 * p2 - p3 + t * (3 * (p1 - p2) + p3 - p0)));
}

SpectralField kernel_spectrum(KernelKind kind, double size, const MollifierParams& p,
                              const UniformGrid& grid, int oversample) {
  if (!(size > 0.0)) throw UsageError("kernel size must be positive");
  if (oversample < 1) throw UsageError("oversampling factor must be >= 1");
  const double L = grid.half_extent();
  ScalarField fine = [&] {
    if (kind == KernelKind::Ball) {
      if (grid.dimension() != 3) throw UsageError("ball kernel needs a 3D lattice");
      const UniformGrid g(L, grid.per_axis() * oversample);
      return rasterize_balls(KnotSet4({{Vec3::Zero(), size}}, 2.0 * size), g, p);
    }
    if (grid.dimension() != 4) throw UsageError("cone kernel needs a 4D lattice");
    const UniformGrid g(L, grid.per_axis() * oversample, grid.r_count() * oversample);
    ScalarField f(g);
    for (std::size_t i = 0; i < f.values.size(); ++i) {
      const Vec3 x = g.node(i);
      f.values[i] = cone_bump(Vec4(x.x(), x.y(), x.z(), g.node_r(i)), Vec4::Zero(), size, p);
    }
    return f;
  }();
  const SpectralField Ffine = dft_forward(fine);
  SpectralField F(grid);
  const auto d = grid.dims();
  const auto df = fine.grid.dims();
  for (std::size_t i = 0; i < F.coeffs.size(); ++i) {
    const auto s = F.signed_indices(i);
    auto wrap = [](int v, int n) { return ((v % n) + n) % n; };
    const std::size_t src = fine.grid.index(wrap(s[0], df[0]), wrap(s[1], df[1]),
                                            wrap(s[2], df[2]), d[3] > 1 ? wrap(s[3], df[3]) : 0);
    F.coeffs[i] = Ffine.coeffs[src];
  }
  return F;
}

namespace {

// Spectrum of a ball bump of radius s at the origin, from the chosen source.
std::vector<Complex> ball_kernel(double s, const MollifierParams& p, const UniformGrid& grid,
                                 KernelSource source, const RadialTransform* table) {
  if (source == KernelSource::Rasterized)
    return kernel_spectrum(KernelKind::Ball, s, p, grid).coeffs;
  SpectralField tmp(grid);
  const auto q = frequency_norms(tmp);
  std::vector<Complex> out(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) out[i] = s * s * s * (*table)(s * q[i]);
  return out;
}

}  // namespace

SpectralField multiply(const SpectralField& a, const SpectralField& b, bool conjugate_b) {
  if (!(a.grid == b.grid)) throw UsageError("spectral lattices differ");
  SpectralField out(a.grid);
  for (std::size_t i = 0; i < out.coeffs.size(); ++i)
    out.coeffs[i] = a.coeffs[i] * (conjugate_b ? std::conj(b.coeffs[i]) : b.coeffs[i]);
  return out;
}

SpectralField fourier_gap(const KnotSet3& k1, const KnotSet3& k2, const Mat3& R,
                          const UniformGrid& grid, const MollifierParams& p,
                          const FourierGapOptions& opt) {
  std::vector<Vec3> rotated;
  rotated.reserve(k2.size());
  for (const auto& x : k2.points()) rotated.push_back(R * x);
  const SpectralField rho1 = ndft_knots(k1, grid);
  const SpectralField rho2 = ndft_knots(KnotSet3(rotated, k2.radius(), k2.weights()), grid);
  SpectralField g = multiply(rho1, rho2, true);

  std::unique_ptr<RadialTransform> table;
  if (opt.source == KernelSource::Radial)
    table = std::make_unique<RadialTransform>(
        p, max_frequency(grid) * (k1.radius() + k2.radius() + std::max(opt.offset, 0.0)) * 1.01);
  std::vector<Complex> K;
  if (opt.kernel == GapKernel::Substituted) {
    K = ball_kernel(k1.radius() + k2.radius() + opt.offset, p, grid, opt.source, table.get());
  } else {
    const auto a = ball_kernel(k1.radius() + opt.offset, p, grid, opt.source, table.get());
    const auto b = ball_kernel(k2.radius(), p, grid, opt.source, table.get());
    K.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) K[i] = a[i] * b[i];
  }
  for (std::size_t i = 0; i < K.size(); ++i) g.coeffs[i] *= K[i];
  return g;
}

SpectralField fourier_gap(const KnotSet4& k1, const KnotSet4& k2, const Mat3& R,
                          const UniformGrid& grid, const MollifierParams& p,
                          const FourierGapOptions& opt) {
  if (grid.dimension() != 3) throw UsageError("expected a 3D lattice");
  const ObstacleKnots o = obstacle_knots(k1, k2, R);
  const std::size_t n2 = k2.size();
  // Group pairs by kernel: (obstacle radius, 0) or (grown r_i, r_j).
  std::map<std::pair<double, double>, std::vector<std::size_t>> groups;
  for (std::size_t k = 0; k < o.knots.size(); ++k) {
    const double ri = k1.knots()[k / n2].radius, rj = k2.knots()[k % n2].radius;
    if (opt.kernel == GapKernel::Substituted)
      groups[{ri + rj + opt.offset, 0.0}].push_back(k);
    else
      groups[{ri + opt.offset, rj}].push_back(k);
  }
  double smax = 0.0;
  for (const auto& [key, idx] : groups) smax = std::max({smax, key.first, key.second});
  RadialTransform table(p, max_frequency(grid) * smax * 1.01);

  SpectralField g(grid);
  const auto q = frequency_norms(g);
  for (const auto& [key, idx] : groups) {
    std::vector<Ball> balls;
    std::vector<double> w;
    for (std::size_t k : idx) {
      balls.push_back(o.knots.knots()[k]);
      w.push_back(o.knots.weights()[k]);
    }
    if (!(key.first > 0.0)) throw UsageError("offset removes a whole ball");
    const SpectralField rho = ndft_centers(KnotSet4(balls, o.knots.trim_height(), w), grid);
    const double a = key.first, b = key.second;
    parallel_for(q.size(), [&](std::size_t s, std::size_t e) {
      for (std::size_t i = s; i < e; ++i) {
        double K = a * a * a * table(a * q[i]);
        if (b > 0.0) K *= b * b * b * table(b * q[i]);
        g.coeffs[i] += rho.coeffs[i] * K;
      }
    });
  }
  return g;
}

SpectralField fourier_gap_4d(const KnotSet4& k1, const KnotSet4& k2, const Mat3& R,
                             const UniformGrid& grid4, const MollifierParams& p) {
  if (grid4.dimension() != 4) throw UsageError("expected a 4D lattice");
  if (k1.trim_height() != k2.trim_height())
    throw UsageError("lifted gap needs equal trim heights");
  const double L = grid4.half_extent(), trim = k1.trim_height();
  const double smax = k1.max_radius() + k2.max_radius();
  if (smax >= L || smax - 2.0 * trim < -L)
    throw UsageError("doubled cones do not fit the r range of the lattice");
  const SpectralField rho1 = ndft_knots(k1, grid4);
  const KnotSet4 moved =
      transform_knots(RigidMotion{R, Vec3::Zero()}, k2).with_mirror_flag(true);
  const SpectralField rho2 = ndft_knots(moved, grid4);
  const SpectralField D = kernel_spectrum(KernelKind::Cone, trim, p, grid4);
  SpectralField g = multiply(rho1, rho2, true);
  for (std::size_t i = 0; i < g.coeffs.size(); ++i) g.coeffs[i] *= D.coeffs[i] * D.coeffs[i];
  return g;
}

TruncationPlan::TruncationPlan(const UniformGrid& grid) : grid_(grid) {
  const SpectralField probe(grid);
  const std::size_t n = grid.node_count();
  std::vector<std::array<int, 4>> s(n);
  std::vector<std::int64_t> r2(n);
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = probe.signed_indices(i);
    r2[i] = std::int64_t(s[i][0]) * s[i][0] + std::int64_t(s[i][1]) * s[i][1] +
            std::int64_t(s[i][2]) * s[i][2] + std::int64_t(s[i][3]) * s[i][3];
  }
  order_.resize(n);
  std::iota(order_.begin(), order_.end(), 0u);
  std::sort(order_.begin(), order_.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (r2[a] != r2[b]) return r2[a] < r2[b];
    return s[a] < s[b];
  });
}

ScalarField reconstruct_truncated(const SpectralField& F, std::size_t m_prime) {
  if (m_prime < 1 || m_prime > F.coeffs.size())
    throw UsageError("retained mode count must lie in [1, lattice size]");
  const TruncationPlan plan(F.grid);
  SpectralField kept(F.grid);
  for (std::size_t k = 0; k < m_prime; ++k) {
    const auto i = plan.order()[k];
    kept.coeffs[i] = F.coeffs[i];
  }
  return dft_inverse(kept);
}

PreparedSpectrum::PreparedSpectrum(SpectralField F, const TruncationPlan& plan)
    : field(std::move(F)) {
  if (!(field.grid == plan.grid())) throw UsageError("plan and spectrum lattices differ");
  const std::size_t n = plan.size();
  ordered.resize(n);
  tail.assign(n + 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) ordered[k] = field.coeffs[plan.order()[k]];
  for (std::size_t k = n; k-- > 0;) tail[k] = tail[k + 1] + std::norm(ordered[k]);
}

QueryResult single_query(const PreparedSpectrum& F1, const PreparedSpectrum& F2,
                         const TruncationPlan& plan, const Vec3& t, std::size_t m_prime) {
  if (!(F1.field.grid == F2.field.grid) || !(F1.field.grid == plan.grid()))
    throw UsageError("spectral lattices differ");
  if (F1.field.dimension() != 3) throw UsageError("single queries need 3D spectra");
  if (m_prime < 1 || m_prime > plan.size())
    throw UsageError("retained mode count must lie in [1, lattice size]");
  const auto d = plan.grid().dims();
  const double L = plan.grid().half_extent();
  // exp(+2 pi i omega t) per axis, indexed by lattice position.
  std::array<std::vector<Complex>, 3> ph;
  for (int a = 0; a < 3; ++a) {
    axis_phases(t[a], d[a], L, ph[a]);
    for (auto& c : ph[a]) c = std::conj(c);
  }
  const int nx = d[0], ny = d[1];
  double acc = 0.0;
  const auto& order = plan.order();
  for (std::size_t k = 0; k < m_prime; ++k) {
    const std::uint32_t i = order[k];
    const int ix = static_cast<int>(i % nx);
    const int iy = static_cast<int>((i / nx) % ny);
    const int iz = static_cast<int>(i / (static_cast<std::size_t>(nx) * ny));
    const Complex c = F1.ordered[k] * std::conj(F2.ordered[k]) * ph[0][ix] * ph[1][iy] * ph[2][iz];
    acc += c.real();
  }
  const double cell = F1.field.cell_measure();
  return {acc * cell, std::sqrt(F1.tail[m_prime] * F2.tail[m_prime]) * cell};
}

double single_query(const SpectralField& F1, const SpectralField& F2, const Vec3& t,
                    std::size_t m_prime) {
  const TruncationPlan plan(F1.grid);
  return single_query(PreparedSpectrum(F1, plan), PreparedSpectrum(F2, plan), plan, t, m_prime)
      .value;
}

SpectralField solid_spectrum(const KnotSet4& k, const UniformGrid& grid,
                             const MollifierParams& p, double grow) {
  if (grid.dimension() != 3) throw UsageError("expected a 3D lattice");
  std::map<double, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < k.size(); ++i) groups[k.knots()[i].radius + grow].push_back(i);
  const double smax = k.max_radius() + grow;
  if (!(k.min_radius() + grow > 0.0)) throw UsageError("growth removes a whole ball");
  SpectralField F(grid);
  if (k.empty()) return F;
  const RadialTransform table(p, max_frequency(grid) * smax * 1.01);
  const auto q = frequency_norms(F);
  for (const auto& [s, idx] : groups) {
    std::vector<Ball> balls;
    std::vector<double> w;
    for (std::size_t i : idx) {
      balls.push_back(k.knots()[i]);
      w.push_back(k.weights()[i]);
    }
    const SpectralField rho = ndft_centers(KnotSet4(balls, k.trim_height(), w), grid);
    parallel_for(q.size(), [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) F.coeffs[i] += rho.coeffs[i] * (s * s * s * table(s * q[i]));
    });
  }
  return F;
}

}  // namespace sphereconv
