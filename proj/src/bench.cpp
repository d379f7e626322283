#include "sphereconv/bench.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>

namespace sphereconv {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

std::optional<std::size_t> uniform_minkowski_occupancy(const UniformGrid& g, const NodeSet& X1,
                                                       const NodeSet& X2, double pair_cap) {
  if (static_cast<double>(X1.size()) * static_cast<double>(X2.size()) > pair_cap) return std::nullopt;
  const std::size_t n2 = 2 * static_cast<std::size_t>(g.per_axis());
  std::vector<char> occ(n2 * n2 * n2, 0);
  std::vector<std::array<int, 4>> c2(X2.size());
  for (std::size_t j = 0; j < X2.size(); ++j) c2[j] = g.coords(X2[j]);
  parallel_for(X1.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const auto a = g.coords(X1[i]);
      for (const auto& c : c2) {
        const std::size_t idx = (a[0] + c[0]) + n2 * ((a[1] + c[1]) + n2 * (a[2] + c[2]));
        std::atomic_ref<char>(occ[idx]).store(1, std::memory_order_relaxed);
      }
    }
  });
  std::size_t count = 0;
  for (char v : occ) count += v;
  return count;
}

BenchRecord bench_pair(const Solid& s1, const Solid& s2, std::size_t m, const BenchOptions& opt,
                       DecompositionResult* d1, DecompositionResult* d2) {
  const UniformGrid g = UniformGrid::from_node_count(opt.half_extent, static_cast<std::int64_t>(m));
  BenchRecord r;
  r.m = m;
  r.mu = opt.mu;
  DecompositionParams dp;
  dp.mu = opt.mu;
  dp.seed = opt.seed;
  auto t0 = Clock::now();
  DecompositionResult a = decompose(s1, g, dp);
  DecompositionResult b = decompose(s2, g, dp);
  r.t_decompose_ms = ms_since(t0);
  r.n12_1 = a.stats.n12;
  r.n3_1 = a.stats.n3;
  r.n12_2 = b.stats.n12;
  r.n3_2 = b.stats.n3;

  t0 = Clock::now();
  const ObstacleKnots o = obstacle_knots(a.a3, b.a3, Mat3::Identity());
  r.t_knot_minkowski_ms = ms_since(t0);
  r.knot_pairs = static_cast<double>(o.knots.size());

  const NodeSet X1 = interior_nodes(g, s1);
  const NodeSet X2 = interior_nodes(g, s2);
  r.uniform_1 = X1.size();
  r.uniform_2 = X2.size();
  r.uniform_pairs = static_cast<double>(X1.size()) * static_cast<double>(X2.size());
  r.ratio = r.knot_pairs > 0 ? r.uniform_pairs / r.knot_pairs : 0.0;
  t0 = Clock::now();
  r.uniform_occupancy = uniform_minkowski_occupancy(g, X1, X2, opt.uniform_pair_cap);
  r.t_uniform_ms = r.uniform_occupancy ? ms_since(t0) : 0.0;
  if (d1) *d1 = std::move(a);
  if (d2) *d2 = std::move(b);
  return r;
}

std::string bench_csv_header() {
  return "experiment,m,mu,n12_1,n3_1,n12_2,n3_2,uniform_1,uniform_2,uniform_pairs,knot_pairs,"
         "ratio,uniform_occupancy,t_decompose_ms,t_knot_minkowski_ms,t_uniform_ms";
}

std::string bench_csv_row(const BenchRecord& r) {
  char buf[512];
  const std::string occ = r.uniform_occupancy ? std::to_string(*r.uniform_occupancy) : "DNF";
  std::snprintf(buf, sizeof buf, "%s,%zu,%.6g,%zu,%zu,%zu,%zu,%zu,%zu,%.17g,%.17g,%.6g,%s,%.3f,%.3f,%.3f",
                r.experiment.c_str(), r.m, r.mu, r.n12_1, r.n3_1, r.n12_2, r.n3_2, r.uniform_1,
                r.uniform_2, r.uniform_pairs, r.knot_pairs, r.ratio, occ.c_str(), r.t_decompose_ms,
                r.t_knot_minkowski_ms, r.t_uniform_ms);
  return buf;
}

std::vector<TruncationPoint> truncation_sweep(const SpectralField& F,
                                              const std::vector<std::size_t>& m_primes) {
  const ScalarField full = dft_inverse(F);
  double den = 0.0;
  for (double v : full.values) den += v * v;
  std::vector<TruncationPoint> out;
  for (std::size_t mp : m_primes) {
    const ScalarField t = reconstruct_truncated(F, mp);
    double num = 0.0;
    for (std::size_t i = 0; i < t.values.size(); ++i) {
      const double d = t.values[i] - full.values[i];
      num += d * d;
    }
    out.push_back({mp, den > 0 ? std::sqrt(num / den) : 0.0});
  }
  return out;
}

std::vector<QueryTimingPoint> query_time_sweep(const PreparedSpectrum& F1,
                                               const PreparedSpectrum& F2,
                                               const TruncationPlan& plan, const Vec3& t,
                                               const std::vector<std::size_t>& m_primes,
                                               int batches, double min_batch_ms) {
  std::vector<QueryTimingPoint> out;
  volatile double sink = 0.0;
  for (std::size_t mp : m_primes) {
    // calibrate the repeat count for one batch
    int reps = 1;
    for (;;) {
      const auto t0 = Clock::now();
      for (int k = 0; k < reps; ++k) sink = sink + single_query(F1, F2, plan, t, mp).value;
      if (ms_since(t0) >= min_batch_ms || reps >= (1 << 24)) break;
      reps *= 2;
    }
    double best = std::numeric_limits<double>::infinity();
    for (int b = 0; b < batches; ++b) {
      const auto t0 = Clock::now();
      for (int k = 0; k < reps; ++k) sink = sink + single_query(F1, F2, plan, t, mp).value;
      best = std::min(best, ms_since(t0) / reps);
    }
    out.push_back({mp, best});
  }
  return out;
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw UsageError("fit needs two or more points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit f;
  f.slope = sxx > 0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  f.r2 = (sxx > 0 && syy > 0) ? (sxy * sxy) / (sxx * syy) : (syy == 0 ? 1.0 : 0.0);
  return f;
}

std::vector<std::size_t> powers_of_two(int lo, int hi, std::size_t limit) {
  std::vector<std::size_t> out;
  for (int e = lo; e <= hi; ++e) {
    const std::size_t v = std::size_t{1} << e;
    if (v > limit) break;
    out.push_back(v);
  }
  return out;
}

}  // namespace sphereconv
