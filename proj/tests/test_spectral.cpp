#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sphereconv/spectral.hpp"

#include <algorithm>
#include <numbers>
#include <random>

using namespace sphereconv;

namespace {

constexpr double kPi = std::numbers::pi;

ScalarField random_field(const UniformGrid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  ScalarField f(g);
  for (auto& v : f.values) v = u(rng);
  return f;
}

double rel_l2(const std::vector<double>& a, const std::vector<double>& b) {
  double n = 0, d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    n += (a[i] - b[i]) * (a[i] - b[i]);
    d += b[i] * b[i];
  }
  return std::sqrt(n / d);
}

Vec3 omega(const SpectralField& F, std::size_t i) {
  const auto j = F.signed_indices(i);
  return Vec3(j[0], j[1], j[2]) * F.frequency_step();
}

double hermitian_defect(const SpectralField& F) {
  double worst = 0.0, scale = 0.0;
  const int n = F.grid.per_axis();
  for (std::size_t i = 0; i < F.coeffs.size(); ++i) {
    scale = std::max(scale, std::abs(F.coeffs[i]));
    const auto j = F.signed_indices(i);
    // nyquist planes are their own mirror
    if (std::find(j.begin(), j.end(), -n / 2) != j.end()) continue;
    worst = std::max(worst, std::abs(F.coeffs[F.negated_index(i)] - std::conj(F.coeffs[i])));
  }
  return worst / scale;
}

}  // namespace

TEST_CASE("signed indices") {
  CHECK(SpectralField::signed_index(0, 8) == 0);
  CHECK(SpectralField::signed_index(3, 8) == 3);
  CHECK(SpectralField::signed_index(4, 8) == -4);
  CHECK(SpectralField::signed_index(7, 8) == -1);
  const SpectralField F(UniformGrid(0.5, 8));
  CHECK(F.frequency_step() == 1.0);
  CHECK(F.cell_measure() == 1.0);
  CHECK(F.coeffs.size() == 512);
}

TEST_CASE("fft matches the direct sum") {
  const UniformGrid g(0.7, 16);
  const ScalarField f = random_field(g, 1);
  const SpectralField A = dft_forward(f), B = dft_direct(f);
  double n = 0, d = 0;
  for (std::size_t i = 0; i < A.coeffs.size(); ++i) {
    n += std::norm(A.coeffs[i] - B.coeffs[i]);
    d += std::norm(B.coeffs[i]);
  }
  CHECK(std::sqrt(n / d) < 1e-10);
  CHECK(hermitian_defect(A) < 1e-9);

  const ScalarField back = dft_inverse(A);
  double worst = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) worst = std::max(worst, std::abs(back.values[i] - f.values[i]));
  CHECK(worst < 1e-10);
}

TEST_CASE("fft of a 4d field matches the direct sum") {
  const UniformGrid g(0.5, 6, 4);
  const ScalarField f = random_field(g, 2);
  const SpectralField A = dft_forward(f), B = dft_direct(f);
  double worst = 0.0;
  for (std::size_t i = 0; i < A.coeffs.size(); ++i) worst = std::max(worst, std::abs(A.coeffs[i] - B.coeffs[i]));
  CHECK(worst < 1e-10);
  CHECK(rel_l2(dft_inverse(A).values, f.values) < 1e-12);
}

TEST_CASE("impulse and constant") {
  const UniformGrid g(1.0, 8);
  ScalarField imp(g);
  imp.values[g.index(3, 5, 2)] = 1.0;
  const SpectralField I = dft_forward(imp);
  for (const auto& c : I.coeffs) CHECK(std::abs(c) == doctest::Approx(std::pow(g.spacing(), 3)));

  ScalarField one(g);
  for (auto& v : one.values) v = 2.0;
  const SpectralField C = dft_forward(one);
  CHECK(std::abs(C.coeffs[0]) == doctest::Approx(2.0 * 8.0));
  for (std::size_t i = 1; i < C.coeffs.size(); ++i) CHECK(std::abs(C.coeffs[i]) < 1e-12);
}

TEST_CASE("parseval") {
  const UniformGrid g(0.5, 16);
  const ScalarField a = random_field(g, 3), b = random_field(g, 4);
  const SpectralField A = dft_forward(a), B = dft_forward(b);
  Complex s = 0.0;
  for (std::size_t i = 0; i < A.coeffs.size(); ++i) s += A.coeffs[i] * std::conj(B.coeffs[i]);
  s *= A.cell_measure();
  CHECK(s.real() == doctest::Approx(inner_product(a, b)).epsilon(1e-6));
  CHECK(std::abs(s.imag()) < 1e-9);
  CHECK(A.norm() * A.norm() == doctest::Approx(inner_product(a, a)).epsilon(1e-9));
}

TEST_CASE("shift property") {
  const UniformGrid g(0.5, 16);
  const ScalarField f = random_field(g, 5);
  ScalarField s(g);
  const int n = g.per_axis();
  for (int z = 0; z < n; ++z)
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x) s.values[g.index((x + 1) % n, y, z)] = f.values[g.index(x, y, z)];
  const SpectralField F = dft_forward(f), S = dft_forward(s);
  double worst = 0.0;
  for (std::size_t i = 0; i < F.coeffs.size(); ++i) {
    const Complex ph = std::exp(Complex(0, -2 * kPi * omega(F, i).x() * g.spacing()));
    worst = std::max(worst, std::abs(S.coeffs[i] - ph * F.coeffs[i]));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("convolution theorem with padding") {
  const UniformGrid g(1.0, 32);
  const double h3 = std::pow(g.spacing(), 3);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0, 1);
  ScalarField a(g), b(g);
  std::vector<std::size_t> sa, sb;
  // supports inside the central half so the circular sum does not wrap
  for (int z = 12; z < 18; ++z)
    for (int y = 13; y < 19; ++y)
      for (int x = 11; x < 17; ++x) {
        a.values[g.index(x, y, z)] = u(rng);
        sa.push_back(g.index(x, y, z));
        b.values[g.index(x + 2, y - 1, z + 1)] = u(rng);
        sb.push_back(g.index(x + 2, y - 1, z + 1));
      }
  SpectralField P = multiply(dft_forward(a), dft_forward(b));
  const ScalarField conv = dft_inverse(P);
  ScalarField direct(g);
  for (auto i : sa)
    for (auto j : sb) {
      const Vec3 x = g.node(i) + g.node(j);
      int idx[3];
      for (int k = 0; k < 3; ++k) idx[k] = static_cast<int>(std::lround((x[k] + 1.0) / g.spacing()));
      direct.values[g.index(idx[0], idx[1], idx[2])] += h3 * a.values[i] * b.values[j];
    }
  double worst = 0.0, mx = 0.0;
  for (std::size_t i = 0; i < conv.values.size(); ++i) {
    worst = std::max(worst, std::abs(conv.values[i] - direct.values[i]));
    mx = std::max(mx, std::abs(direct.values[i]));
  }
  CHECK(mx > 0.0);
  CHECK(worst / mx < 1e-6);
}

TEST_CASE("ndft of knots") {
  const UniformGrid g(0.5, 8);
  const SpectralField one = ndft_knots(KnotSet3({Vec3::Zero()}, 0.1), g);
  for (const auto& c : one.coeffs) CHECK(std::abs(c - Complex(1.0, 0.0)) < 1e-14);

  const Vec3 x0(0.13, -0.07, 0.21), x1(-0.3, 0.2, 0.05);
  const SpectralField p = ndft_knots(KnotSet3({x0}, 0.1), g);
  const SpectralField two = ndft_knots(KnotSet3({x0, x1}, 0.1, {1.0, 0.5}), g);
  for (std::size_t i = 0; i < p.coeffs.size(); ++i) {
    const Vec3 w = omega(p, i);
    const Complex e0 = std::exp(Complex(0, -2 * kPi * w.dot(x0)));
    const Complex e1 = std::exp(Complex(0, -2 * kPi * w.dot(x1)));
    CHECK(std::abs(p.coeffs[i] - e0) < 1e-12);
    CHECK(std::abs(p.coeffs[i]) == doctest::Approx(1.0));
    CHECK(std::abs(two.coeffs[i] - (e0 + 0.5 * e1)) < 1e-12);
  }

  // 4D: apex r coordinate, negated for the mirror image
  const UniformGrid g4(0.5, 6, 4);
  const KnotSet4 k({{x0, 0.2}}, 0.4);
  const SpectralField a = ndft_knots(k, g4), m = ndft_knots(k.with_mirror_flag(true), g4);
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
    const auto j = a.signed_indices(i);
    const Vec4 w = Vec4(j[0], j[1], j[2], j[3]) * a.frequency_step();
    const Vec4 apex(x0.x(), x0.y(), x0.z(), 0.2), mir(x0.x(), x0.y(), x0.z(), -0.2);
    CHECK(std::abs(a.coeffs[i] - std::exp(Complex(0, -2 * kPi * w.dot(apex)))) < 1e-12);
    CHECK(std::abs(m.coeffs[i] - std::exp(Complex(0, -2 * kPi * w.dot(mir)))) < 1e-12);
  }
}

TEST_CASE("kernel spectra") {
  const UniformGrid g(0.5, 32);
  const double r = 0.1;
  const SpectralField K = kernel_spectrum(KernelKind::Ball, r, {}, g);
  const RadialTransform H({}, 40.0);
  CHECK(K.coeffs[0].real() > 0.0);
  CHECK(K.coeffs[0].real() == doctest::Approx(r * r * r * H(0.0)).epsilon(1e-3));
  double imag = 0.0;
  for (const auto& c : K.coeffs) imag = std::max(imag, std::abs(c.imag()));
  CHECK(imag < 1e-8 * K.coeffs[0].real());

  // radial table against direct quadrature
  for (double q : {0.0, 0.3, 1.7, 5.2, 11.0}) CHECK(std::abs(H(q) - RadialTransform::evaluate(q, {})) < 1e-6 * H(0.0));
  // the unit-radius DC term is the bump volume
  double vol = 0.0;
  const int n = 4000;
  for (int i = 0; i < n; ++i) {
    const double rho = (i + 0.5) / n;
    vol += 4 * kPi * rho * rho * mollifier(rho) / n;
  }
  CHECK(H(0.0) == doctest::Approx(vol).epsilon(1e-6));

  // dilation: K_2r(w) = 8 K_r(2w)
  const SpectralField K2 = kernel_spectrum(KernelKind::Ball, 2 * r, {}, g);
  for (int j = 0; j < 6; ++j) {
    const Complex big = K2.coeffs[j];
    const Complex small = K.coeffs[2 * j];
    CHECK(std::abs(big.real() - 8.0 * small.real()) < 1e-2 * K2.coeffs[0].real());
  }

  // rasterized and continuous transforms agree
  for (std::size_t i = 0; i < K.coeffs.size(); i += 97) {
    const double q = omega(K, i).norm();
    CHECK(std::abs(K.coeffs[i].real() - r * r * r * H(r * q)) < 2e-3 * K.coeffs[0].real());
  }

  const SpectralField C = kernel_spectrum(KernelKind::Cone, 0.4, {}, UniformGrid(0.5, 16, 16));
  CHECK(C.coeffs[0].real() > 0.0);
}

TEST_CASE("fourier gap of single knots") {
  const UniformGrid g(0.5, 32);
  const Vec3 x1(0.05, -0.1, 0.02), x2(0.1, 0.03, -0.04);
  const Mat3 R = Eigen::AngleAxisd(0.8, Vec3(1, 1, 0).normalized()).toRotationMatrix();
  const KnotSet3 a({x1}, 0.08, {2.0}), b({x2}, 0.05, {1.5});
  FourierGapOptions opt;
  opt.source = KernelSource::Radial;
  const SpectralField G = fourier_gap(a, b, R, g, {}, opt);
  const RadialTransform H({}, 100.0);
  const double s = 0.13;
  for (std::size_t i = 0; i < G.coeffs.size(); i += 13) {
    const Vec3 w = omega(G, i);
    const Complex expect = 3.0 * std::exp(Complex(0, -2 * kPi * w.dot(x1 - R * x2))) * (s * s * s * H(s * w.norm()));
    CHECK(std::abs(G.coeffs[i] - expect) < 1e-6 * 3.0 * s * s * s * H(0.0));
  }
  CHECK(hermitian_defect(G) < 1e-9);
}

TEST_CASE("fourier gap matches the spatial gap") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1), u01(0, 1);
  std::vector<Vec3> p1, p2;
  for (int i = 0; i < 8; ++i) p1.push_back(0.12 * Vec3(u(rng), u(rng), u(rng)));
  for (int i = 0; i < 6; ++i) p2.push_back(0.1 * Vec3(u(rng), u(rng), u(rng)));
  const KnotSet3 k1(p1, 0.08), k2(p2, 0.06);
  const Mat3 R = Eigen::AngleAxisd(0.7, Vec3(1, 2, 3).normalized()).toRotationMatrix();
  double prev = 1.0;
  for (int n : {32, 64}) {
    const UniformGrid g(0.5, n);
    const ScalarField sp = gap_field_spatial(k1, k2, R, g);
    const double err = rel_l2(dft_inverse(fourier_gap(k1, k2, R, g)).values, sp.values);
    CAPTURE(n);
    CHECK(err < 1e-2 * (n == 32 ? 10 : 1));
    CHECK(err < prev);
    prev = err;
  }
  // nonequiradius and convolved variants
  std::vector<Ball> b1, b2;
  for (int i = 0; i < 6; ++i) b1.push_back({0.12 * Vec3(u(rng), u(rng), u(rng)), 0.04 + 0.05 * u01(rng)});
  for (int i = 0; i < 5; ++i) b2.push_back({0.1 * Vec3(u(rng), u(rng), u(rng)), 0.04 + 0.05 * u01(rng)});
  const KnotSet4 a1(b1, 0.2), a2(b2, 0.2);
  const UniformGrid g(0.5, 64);
  CHECK(rel_l2(dft_inverse(fourier_gap(a1, a2, R, g)).values, gap_field_spatial(a1, a2, R, g).values) < 1e-2);
  FourierGapOptions grow;
  grow.offset = 0.02;
  CHECK(rel_l2(dft_inverse(fourier_gap(a1, a2, R, g, {}, grow)).values,
               gap_field_spatial(a1, a2, R, g, {}, -0.02).values) < 1e-2);
  FourierGapOptions conv;
  conv.kernel = GapKernel::Convolved;
  CHECK(rel_l2(dft_inverse(fourier_gap(a1, a2, R, g, {}, conv)).values,
               gap_field_spatial(a1, a2, R, g, {}, 0.0, GapKernel::Convolved).values) < 1e-3);
}

TEST_CASE("ndft times kernel spectrum approaches the rasterized transform") {
  const KnotSet3 k({Vec3(0.031, -0.052, 0.017), Vec3(-0.11, 0.07, 0.09)}, 0.12);
  double prev = 1e9;
  for (int n : {16, 32, 64}) {
    const UniformGrid g(0.5, n);
    const SpectralField lhs = multiply(ndft_knots(k, g), kernel_spectrum(KernelKind::Ball, 0.12, {}, g));
    const SpectralField rhs = dft_forward(rasterize_bumps3(k, g));
    double num = 0, den = 0;
    for (std::size_t i = 0; i < lhs.coeffs.size(); ++i) {
      num += std::norm(lhs.coeffs[i] - rhs.coeffs[i]);
      den += std::norm(rhs.coeffs[i]);
    }
    const double err = std::sqrt(num / den);
    MESSAGE("n=" << n << " ndft/raster error " << err);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 1e-2);
}

TEST_CASE("truncation") {
  const UniformGrid g(0.5, 16);
  const TruncationPlan plan(g);
  REQUIRE(plan.size() == g.node_count());
  CHECK(plan.order()[0] == 0);
  const SpectralField F = dft_forward(rasterize_bumps3(KnotSet3({Vec3(0.1, 0, 0), Vec3(-0.1, 0.1, 0)}, 0.15), g));
  // shells are ascending in |j|^2
  int last = -1;
  for (auto i : plan.order()) {
    const auto j = F.signed_indices(i);
    const int s = j[0] * j[0] + j[1] * j[1] + j[2] * j[2];
    CHECK(s >= last);
    last = s;
  }
  const ScalarField full = dft_inverse(F);
  CHECK(rel_l2(reconstruct_truncated(F, plan.size()).values, full.values) < 1e-10);
  const ScalarField dc = reconstruct_truncated(F, 1);
  double mean = 0.0;
  for (double v : full.values) mean += v;
  mean /= full.values.size();
  for (double v : dc.values) CHECK(v == doctest::Approx(mean));
  double prev = 1e9;
  for (std::size_t m : {1ul, 7ul, 64ul, 512ul, 4096ul}) {
    const double err = rel_l2(reconstruct_truncated(F, m).values, full.values);
    CHECK(err <= prev);
    prev = err;
  }
  CHECK_THROWS_AS(reconstruct_truncated(F, 0), UsageError);
  CHECK_THROWS_AS(reconstruct_truncated(F, plan.size() + 1), UsageError);
}

TEST_CASE("single query") {
  const UniformGrid g(0.5, 32);
  const TruncationPlan plan(g);
  const KnotSet3 k1({Vec3(0.05, 0.0, 0.0)}, 0.12), k2({Vec3(-0.1, 0.05, 0.0)}, 0.1);
  const ScalarField f1 = rasterize_bumps3(k1, g), f2 = rasterize_bumps3(k2, g);
  const SpectralField F1 = dft_forward(f1), F2 = dft_forward(f2);
  const PreparedSpectrum P1(F1, plan), P2(F2, plan);
  const QueryResult q = single_query(P1, P2, plan, Vec3::Zero(), plan.size());
  CHECK(q.value == doctest::Approx(inner_product(f1, f2)).epsilon(1e-6));
  CHECK(q.error_bound == 0.0);

  // a translation by whole cells matches the shifted spatial inner product
  const Vec3 t = g.spacing() * Vec3(3, -2, 1);
  const ScalarField f2t = rasterize_bumps3(KnotSet3({k2.points()[0] + t}, 0.1), g);
  CHECK(single_query(P1, P2, plan, t, plan.size()).value == doctest::Approx(inner_product(f1, f2t)).epsilon(1e-6));

  // auto inner product
  CHECK(single_query(F1, F1, Vec3::Zero(), plan.size()) == doctest::Approx(inner_product(f1, f1)).epsilon(1e-9));

  // far apart
  const Vec3 far = g.spacing() * Vec3(13, 0, 0);
  CHECK(std::abs(single_query(P1, P2, plan, far, plan.size()).value) < 1e-6 * F1.norm() * F2.norm());

  // truncated values stay within their bound and converge
  double prev = 1e9;
  const double full = q.value;
  for (std::size_t m : {8ul, 64ul, 512ul, 4096ul, 32768ul}) {
    const QueryResult r = single_query(P1, P2, plan, Vec3::Zero(), m);
    CHECK(std::abs(r.value - full) <= r.error_bound + 1e-12);
    CHECK(r.error_bound <= prev);
    prev = r.error_bound;
  }
  CHECK_THROWS_AS(single_query(P1, P2, plan, Vec3::Zero(), 0), UsageError);
  const TruncationPlan other(UniformGrid(0.5, 16));
  CHECK_THROWS_AS(single_query(P1, P2, other, Vec3::Zero(), 1), UsageError);
}

TEST_CASE("solid spectrum") {
  const UniformGrid g(0.5, 32);
  const KnotSet4 k({{Vec3(0.1, 0, 0), 0.1}, {Vec3(-0.05, 0.1, 0), 0.15}}, 0.3);
  const SpectralField S = solid_spectrum(k, g);
  const double e32 = rel_l2(dft_inverse(S).values, rasterize_balls(k, g).values);
  CHECK(e32 < 5e-2);
  CHECK(hermitian_defect(S) < 1e-9);
  const UniformGrid g64(0.5, 64);
  const double e64 = rel_l2(dft_inverse(solid_spectrum(k, g64)).values, rasterize_balls(k, g64).values);
  CHECK(e64 < 0.5 * e32);
}

TEST_CASE("lifted 4d gap keeps the obstacle support") {
  const double L = 0.5;
  const UniformGrid g4(L, 32, 32);
  const KnotSet4 k1({{Vec3(0.05, 0.0, 0.0), 0.08}, {Vec3(-0.06, 0.04, 0.0), 0.06}}, 0.15);
  const KnotSet4 k2({{Vec3(0.0, 0.02, 0.03), 0.07}}, 0.15);
  const Mat3 R = Eigen::AngleAxisd(0.5, Vec3::UnitZ()).toRotationMatrix();
  const SpectralField G = fourier_gap_4d(k1, k2, R, g4);
  CHECK(hermitian_defect(G) < 1e-9);
  const ScalarField f = dft_inverse(G);
  const int ir0 = 16;
  REQUIRE(g4.r_coord(ir0) == 0.0);
  const ScalarField slice = f.slice_r(ir0);
  const KnotSet4 obs = slice_at(obstacle_knots(k1, k2, R), 0.0);
  const double tol = 1e-3 * slice.max_value();
  int deep = 0, outside = 0;
  for (std::size_t i = 0; i < slice.values.size(); ++i) {
    const Vec3 t = slice.grid.node(i);
    double depth = -1e9;
    for (const Ball& b : obs.knots()) depth = std::max(depth, b.radius - (t - b.center).norm());
    if (depth > 2 * g4.spacing()) {
      CHECK(slice.values[i] > tol);
      ++deep;
    } else if (depth < -2 * g4.spacing()) {
      CHECK(std::abs(slice.values[i]) < tol);
      ++outside;
    }
  }
  CHECK(deep > 0);
  CHECK(outside > 0);
  CHECK_THROWS_AS(fourier_gap_4d(k1, KnotSet4({{Vec3::Zero(), 0.1}}, 0.2), R, g4), UsageError);
}
