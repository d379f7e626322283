// Acceptance run: one PASS/FAIL line per criterion.
#include "sphereconv/bench.hpp"
#include "sphereconv/io.hpp"
#include "sphereconv/shapes.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <random>

using namespace sphereconv;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  failures += !ok;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel_l2(const std::vector<double>& a, const std::vector<double>& b) {
  double n = 0, d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    n += (a[i] - b[i]) * (a[i] - b[i]);
    d += b[i] * b[i];
  }
  return std::sqrt(n / d);
}

bool ball_inside(const Ball& a, const Ball& b) {
  return (a.center - b.center).norm() + a.radius <= b.radius + 1e-12;
}

constexpr double kL = 0.5;

struct Decomposed {
  std::string mesh;
  std::size_t m;
  Solid solid;
  DecompositionResult d;
};

// ---------------------------------------------------------------------------

void criteria_1_2() {
  std::vector<Decomposed> runs;
  bool ok1 = true;
  std::string detail1;
  for (const std::string name : {"sphere", "cube", "lobed"}) {
    const auto t0 = Clock::now();
    const Solid s = shapes::to_solid(shapes::builtin(name), kL);
    for (const std::size_t m : {std::size_t{1} << 12, std::size_t{1} << 15}) {
      const auto g = UniformGrid::from_node_count(kL, m);
      DecompositionResult d = decompose(s, g);
      double h[3];
      int k = 0;
      for (const KnotSet4* a : {&d.a1, &d.a2, &d.a3})
        h[k++] = hausdorff_estimate(boundary_sampler(s), ball_union_sampler(*a), 10000, 1) / d.epsilon;
      ok1 &= std::max({h[0], h[1], h[2]}) <= 1.1;
      detail1 += fmt("%s@%zu A1=%.2f A2=%.2f A3=%.2f; ", name.c_str(), m, h[0], h[1], h[2]);
      runs.push_back({name, m, s, std::move(d)});
    }
    const double secs = seconds_since(t0);
    ok1 &= secs < 600.0;
    detail1 += fmt("(%s %.0f s) ", name.c_str(), secs);
  }
  report(1, ok1, "d_H(S, S(Ak))/eps <= 1.1: " + detail1);

  // containment chain
  std::size_t violations = 0, checked = 0;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-kL, kL), u01(0, 1);
  for (const auto& r : runs) {
    const auto g = UniformGrid::from_node_count(kL, r.m);
    for (const Ball& b : r.d.a1.knots()) violations += b.radius > r.solid.distance_to_boundary(b.center);
    for (auto i : interior_nodes(g, r.solid)) violations += !r.d.a2.union_contains(g.node(i));
    for (const Ball& b : r.d.a1.knots()) {
      bool engulfed = false;
      for (const Ball& c : r.d.a3.knots()) engulfed |= ball_inside(b, c);
      violations += !engulfed;
    }
    // half uniform in the box, half inside random A1 balls
    const auto& a1 = r.d.a1.knots();
    std::uniform_int_distribution<std::size_t> pick(0, a1.size() - 1);
    for (int k = 0; k < 10000; ++k) {
      Vec3 p(u(rng), u(rng), u(rng));
      if (k % 2) {
        const Ball& b = a1[pick(rng)];
        Vec3 dir(u(rng), u(rng), u(rng));
        p = b.center + dir.normalized() * b.radius * std::cbrt(u01(rng));
      }
      const bool in1 = r.d.a1.union_contains(p), in3 = r.d.a3.union_contains(p), in2 = r.d.a2.union_contains(p);
      if (in1 && !r.solid.contains(p) && r.solid.distance_to_boundary(p) > 1e-12) ++violations;
      violations += (in1 && !in3) || (in3 && !in2);
      ++checked;
    }
  }
  report(2, violations == 0,
         fmt("containment chain S(A1) in S, nodes in S(A2), S(A1) in S(A3) in S(A2): %zu violations, %zu random points",
             violations, checked));
}

void criterion_3() {
  const Solid s = shapes::to_solid(shapes::lobed_body(), kL);
  const auto g = UniformGrid::from_node_count(kL, 1 << 12);
  bool ok = true;
  std::size_t prev = std::numeric_limits<std::size_t>::max(), n3_last = 0;
  std::string detail;
  for (const double mu : {1.0, 0.5, 0.25}) {
    DecompositionParams p;
    p.mu = mu;
    const auto d = decompose(s, g, p);
    ok &= d.stats.n3 < d.stats.n12 && d.stats.n3 <= prev;
    prev = n3_last = d.stats.n3;
    detail += fmt("mu=%.2f n12=%zu n3=%zu; ", mu, d.stats.n12, d.stats.n3);
  }
  ok &= n3_last >= 15 && n3_last <= 120;
  report(3, ok, "lobed body at m=2^12, n3(0.25) in [15,120], n3 < n12, n3 non-increasing: " + detail);
}

struct BenchState {
  DecompositionResult d1, d2;
};

void criterion_4(BenchState& st) {
  const Solid s1 = shapes::to_solid(shapes::lobed_body(), kL);
  const Solid s2 = shapes::to_solid(shapes::pebble(), kL);
  BenchOptions opt;
  bool ok = true;
  double prev = 0.0, knot_ms = 0.0;
  std::string detail;
  for (const std::size_t m : {std::size_t{1} << 12, std::size_t{1} << 15, std::size_t{1} << 18}) {
    const BenchRecord r = bench_pair(s1, s2, m, opt, &st.d1, &st.d2);
    ok &= r.ratio > prev;
    prev = r.ratio;
    knot_ms = r.t_knot_minkowski_ms;
    detail += fmt("m=%zu ratio=%.1f; ", m, r.ratio);
  }
  ok &= knot_ms < 60000.0;
  report(4, ok, detail + fmt("knot Minkowski at 2^18 %.1f ms (< 60 s)", knot_ms));
}

void criterion_5() {
  std::mt19937_64 rng(5);
  const double T = 1.0;
  std::uniform_real_distribution<double> u(-1, 1), ur(0.0, 0.999 * T);
  int agree = 0, hits = 0;
  const int n = 1000;
  for (int trial = 0; trial < n; ++trial) {
    const Vec3 x1 = 0.8 * Vec3(u(rng), u(rng), u(rng)), x2 = 0.8 * Vec3(u(rng), u(rng), u(rng));
    const double a1 = ur(rng), a2 = ur(rng);
    const bool cones = trimmed_cones_intersect(Vec4(x1.x(), x1.y(), x1.z(), a1), false,
                                               Vec4(x2.x(), x2.y(), x2.z(), a2), true, T);
    const bool balls = (x1 - x2).norm() <= a1 + a2;
    agree += cones == balls;
    hits += balls;
  }
  report(5, agree == n, fmt("mirrored cone predicate vs ball intersection: %d/%d agree (%d intersecting)", agree, n, hits));
}

void criterion_6() {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1, 1);
  bool ok = true;
  std::string detail;

  double worst_fft = 0.0, worst_herm = 0.0;
  for (const int n : {8, 16, 32}) {
    const UniformGrid g(kL, n);
    ScalarField f(g);
    for (auto& v : f.values) v = u(rng);
    const SpectralField A = dft_forward(f), B = dft_direct(f);
    double num = 0, den = 0, herm = 0, scale = 0;
    for (std::size_t i = 0; i < A.coeffs.size(); ++i) {
      num += std::norm(A.coeffs[i] - B.coeffs[i]);
      den += std::norm(B.coeffs[i]);
      herm = std::max(herm, std::abs(A.coeffs[A.negated_index(i)] - std::conj(A.coeffs[i])));
      scale = std::max(scale, std::abs(A.coeffs[i]));
    }
    worst_fft = std::max(worst_fft, std::sqrt(num / den));
    worst_herm = std::max(worst_herm, herm / scale);
  }
  ok &= worst_fft < 1e-10 && worst_herm < 1e-9;
  detail += fmt("fft/direct %.2e (< 1e-10), hermitian %.2e (< 1e-9); ", worst_fft, worst_herm);

  const UniformGrid g(kL, 32);
  ScalarField a(g), b(g);
  for (auto& v : a.values) v = u(rng);
  for (auto& v : b.values) v = u(rng);
  const SpectralField A = dft_forward(a), B = dft_forward(b);
  Complex s = 0.0;
  for (std::size_t i = 0; i < A.coeffs.size(); ++i) s += A.coeffs[i] * std::conj(B.coeffs[i]);
  s *= A.cell_measure();
  const double ip = inner_product(a, b);
  const double parseval = std::abs(s.real() - ip) / std::abs(ip);
  ok &= parseval < 1e-6;
  detail += fmt("parseval %.2e (< 1e-6); ", parseval);

  // supports confined to the central half so the circular sum does not wrap
  ScalarField p(g), q(g);
  std::vector<std::size_t> sp, sq;
  for (int z = 10; z < 20; ++z)
    for (int y = 11; y < 19; ++y)
      for (int x = 9; x < 17; ++x) {
        p.values[g.index(x, y, z)] = u(rng);
        sp.push_back(g.index(x, y, z));
        q.values[g.index(x + 3, y - 2, z + 1)] = u(rng);
        sq.push_back(g.index(x + 3, y - 2, z + 1));
      }
  const ScalarField conv = dft_inverse(multiply(dft_forward(p), dft_forward(q)));
  ScalarField direct(g);
  const double h3 = std::pow(g.spacing(), 3);
  for (auto i : sp)
    for (auto j : sq) {
      const Vec3 x = g.node(i) + g.node(j);
      int idx[3];
      for (int k = 0; k < 3; ++k) idx[k] = static_cast<int>(std::lround((x[k] + kL) / g.spacing()));
      direct.values[g.index(idx[0], idx[1], idx[2])] += h3 * p.values[i] * q.values[j];
    }
  double linf = 0.0, mx = 0.0;
  for (std::size_t i = 0; i < conv.values.size(); ++i) {
    linf = std::max(linf, std::abs(conv.values[i] - direct.values[i]));
    mx = std::max(mx, std::abs(direct.values[i]));
  }
  ok &= linf / mx < 1e-6;
  detail += fmt("convolution %.2e (< 1e-6)", linf / mx);
  report(6, ok, detail);
}

void criterion_7() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1), u01(0, 1);
  std::vector<Ball> b1, b2;
  for (int i = 0; i < 8; ++i) b1.push_back({0.12 * Vec3(u(rng), u(rng), u(rng)), 0.04 + 0.05 * u01(rng)});
  for (int i = 0; i < 6; ++i) b2.push_back({0.1 * Vec3(u(rng), u(rng), u(rng)), 0.04 + 0.05 * u01(rng)});
  const KnotSet4 k1(b1, 0.2), k2(b2, 0.2);
  const Mat3 R = RigidMotion::axis_angle(Vec3(1, 2, 3), 0.7).R;
  std::map<int, double> err;
  for (const int n : {64, 128}) {
    const UniformGrid g(kL, n);
    err[n] = rel_l2(dft_inverse(fourier_gap(k1, k2, R, g)).values, gap_field_spatial(k1, k2, R, g).values);
  }
  const double ratio = err[128] / err[64];
  report(7, err[64] < 1e-2 && ratio <= 0.6,
         fmt("fourier vs spatial gap: 64^3 %.2e (< 1e-2), 128^3 %.2e, ratio %.3f (<= 0.6)", err[64], err[128], ratio));
}

void criterion_8() {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1, 1), u01(0, 1);
  const UniformGrid g(kL, 64);
  const double h = g.spacing();
  int agree = 0, total = 0, hits = 0;
  while (total < 100) {
    std::vector<Ball> b1, b2;
    for (int i = 0; i < 6; ++i) b1.push_back({0.08 * Vec3(u(rng), u(rng), u(rng)), 0.08 + 0.07 * u01(rng)});
    for (int i = 0; i < 5; ++i) b2.push_back({0.08 * Vec3(u(rng), u(rng), u(rng)), 0.08 + 0.07 * u01(rng)});
    const KnotSet4 k1(b1, 0.2), k2(b2, 0.2);
    const RigidMotion m = RigidMotion::axis_angle(Vec3(u(rng), u(rng), u(rng)), 3 * u(rng),
                                                  0.4 * Vec3(u(rng), u(rng), u(rng)));
    double pen = -1e9;
    for (const Ball& a : b1)
      for (const Ball& b : b2) pen = std::max(pen, a.radius + b.radius - (act_point(m, b.center) - a.center).norm());
    if (std::abs(pen) <= 2 * h) continue;
    const bool comb = collision_predicate(k1, k2, m).verdict == Verdict::Hit;
    const SpectralQueryContext ctx(k1, k2, m.R, g);
    const bool spec = collision_predicate(ctx, m).verdict == Verdict::Hit;
    ++total;
    agree += comb == spec;
    hits += comb;
  }

  // truncated residual over shell-ordered prefixes
  std::vector<Ball> b1, b2;
  for (int i = 0; i < 6; ++i) b1.push_back({0.08 * Vec3(u(rng), u(rng), u(rng)), 0.08 + 0.07 * u01(rng)});
  for (int i = 0; i < 5; ++i) b2.push_back({0.08 * Vec3(u(rng), u(rng), u(rng)), 0.08 + 0.07 * u01(rng)});
  const SpectralField F = fourier_gap(KnotSet4(b1, 0.2), KnotSet4(b2, 0.2), Mat3::Identity(), g);
  const auto sweep = truncation_sweep(F, powers_of_two(0, 18, g.node_count()));
  bool monotone = true;
  for (std::size_t i = 1; i < sweep.size(); ++i) monotone &= sweep[i].residual <= sweep[i - 1].residual;
  report(8, agree == total && monotone,
         fmt("full-spectrum verdict vs combinatorial: %d/%d agree (%d hits) at 64^3; truncation residual %s (%.2e -> %.2e)",
             agree, total, hits, monotone ? "non-increasing" : "INCREASES", sweep.front().residual,
             sweep.back().residual));
}

void criterion_9(const BenchState& st) {
  const UniformGrid g(2 * kL, 32);
  const TruncationPlan plan(g);
  const PreparedSpectrum P1(solid_spectrum(st.d1.a3, g), plan), P2(solid_spectrum(st.d2.a3, g), plan);
  const auto pts = query_time_sweep(P1, P2, plan, Vec3(0.1, 0.2, 0.3), powers_of_two(6, 14, plan.size()));
  std::vector<double> x, y;
  for (const auto& p : pts) {
    x.push_back(static_cast<double>(p.m_prime));
    y.push_back(p.ms);
  }
  const LinearFit f = fit_line(x, y);
  report(9, f.r2 > 0.9 && pts.size() == 9,
         fmt("single_query time vs m' over 2^6..2^14: slope %.3g ms/mode, R2 %.4f (> 0.9)", f.slope, f.r2));
}

void criterion_10() {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1), u01(0, 1);
  std::vector<Ball> b1, b2;
  for (int i = 0; i < 10; ++i) b1.push_back({0.1 * Vec3(u(rng), u(rng), u(rng)), 0.04 + 0.05 * u01(rng)});
  for (int i = 0; i < 8; ++i) b2.push_back({0.1 * Vec3(u(rng), u(rng), u(rng)), 0.04 + 0.05 * u01(rng)});
  const KnotSet4 k1(b1, 1.0), k2(b2, 1.0);
  const Mat3 R = Eigen::AngleAxisd(1.1, Vec3(0.3, -1, 0.5).normalized()).toRotationMatrix();
  const UniformGrid g(kL, 128);
  SCParams p;
  const SCFieldResult c = sc_score_field(k1, k2, R, g, p);
  const SCFieldResult s = sc_score_field_spectral(k1, k2, R, g, p);

  // relative to the largest term magnitude on the field
  double ident = 0.0;
  for (const SCFieldResult* f : {&c, &s}) {
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < g.node_count(); ++i) {
      const double want = sc_combine({f->t1.values[i], f->t2.values[i], f->t3.values[i]}, p.lambda);
      worst = std::max(worst, std::abs(f->score.values[i] - want));
      scale = std::max(scale, std::abs(p.lambda * p.lambda * f->t1.values[i]) +
                                  std::abs(2 * p.lambda * f->t2.values[i]) + std::abs(f->t3.values[i]));
    }
    ident = std::max(ident, worst / scale);
  }
  // single configurations: the score is the exact recombination
  for (int k = 0; k < 20; ++k) {
    RigidMotion m;
    m.R = R;
    m.t = g.node((k * 7919u) % g.node_count()) * 0.3;
    SCParams q = p;
    q.r0 = resolve_r0(p, g);
    const SCResult r = sc_score(k1, k2, m, q);
    const double want = q.lambda * q.lambda * r.terms.t1 - 2 * q.lambda * r.terms.t2 + r.terms.t3;
    const double scale = std::abs(q.lambda * q.lambda * r.terms.t1) + std::abs(2 * q.lambda * r.terms.t2) + std::abs(r.terms.t3);
    if (scale > 0) ident = std::max(ident, std::abs(r.score - want) / scale);
  }
  const double err = rel_l2(s.score.values, c.score.values);

  // separated beyond 2 r0 along x: every term vanishes
  const double r0 = resolve_r0(p, g);
  double reach = 0.0;
  for (const Ball& a : b1)
    for (const Ball& b : b2) reach = std::max(reach, (a.center - R * b.center).norm() + a.radius + b.radius);
  RigidMotion far;
  far.R = R;
  far.t = Vec3(reach + 2 * r0 + 1e-3, 0, 0);
  p.r0 = r0;
  const SCResult sep = sc_score(k1, k2, far, p);
  const bool zero = sep.terms.t1 == 0.0 && sep.terms.t2 == 0.0 && sep.terms.t3 == 0.0 && sep.score == 0.0;
  report(10, ident < 1e-9 && err < 1e-2 && zero,
         fmt("term recombination %.2e (< 1e-9); spectral vs cascade G at 128^3 %.2e (< 1e-2); G = 0 beyond 2r0: %s",
             ident, err, zero ? "yes" : "no"));
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  try {
    criteria_1_2();
    criterion_3();
    BenchState st;
    criterion_4(st);
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9(st);
    criterion_10();
  } catch (const std::exception& e) {
    std::printf("FAIL acceptance aborted: %s\n", e.what());
    return 1;
  }
  std::printf("acceptance finished in %.1f s, %d failing\n", seconds_since(t0), failures);
  return failures == 0 ? 0 : 1;
}
