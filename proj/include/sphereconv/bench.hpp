// Benchmark harness: uniform-sample Minkowski baseline vs the knot pipeline,
// truncation residual sweep and single-query timing sweep.
#pragma once

#include "sphereconv/applications.hpp"
#include "sphereconv/decomposition.hpp"

namespace sphereconv {

/// Occupied cells of {x + y : x in X1, y in X2} for interior nodes of one
/// grid. Sums of lattice nodes are nodes of the doubled lattice, so nothing
/// is snapped. nullopt (DNF) when |X1| |X2| exceeds `pair_cap`.
std::optional<std::size_t> uniform_minkowski_occupancy(const UniformGrid& g, const NodeSet& X1,
                                                       const NodeSet& X2, double pair_cap);

struct BenchRecord {
  std::string experiment;
  std::size_t m = 0;
  double mu = 0.0;
  std::size_t n12_1 = 0, n3_1 = 0, n12_2 = 0, n3_2 = 0;
  /// Interior node counts n'_1, n'_2.
  std::size_t uniform_1 = 0, uniform_2 = 0;
  double uniform_pairs = 0.0;
  double knot_pairs = 0.0;
  /// uniform_pairs / knot_pairs.
  double ratio = 0.0;
  /// Occupied output cells of the uniform baseline; empty when DNF.
  std::optional<std::size_t> uniform_occupancy;
  double t_decompose_ms = 0.0;
  double t_knot_minkowski_ms = 0.0;
  double t_uniform_ms = 0.0;
};

struct BenchOptions {
  double half_extent = 0.5;
  double mu = 0.25;
  std::uint64_t seed = 0;
  double uniform_pair_cap = 4e9;
};

BenchRecord bench_pair(const Solid& s1, const Solid& s2, std::size_t m, const BenchOptions& opt,
                       DecompositionResult* d1 = nullptr, DecompositionResult* d2 = nullptr);

std::string bench_csv_header();
std::string bench_csv_row(const BenchRecord& r);

struct TruncationPoint {
  std::size_t m_prime;
  /// |reconstruction - full| / |full| over the lattice.
  double residual;
};

std::vector<TruncationPoint> truncation_sweep(const SpectralField& F,
                                              const std::vector<std::size_t>& m_primes);

struct QueryTimingPoint {
  std::size_t m_prime;
  double ms;
};

/// Best-of-batches time per single_query call.
std::vector<QueryTimingPoint> query_time_sweep(const PreparedSpectrum& F1,
                                               const PreparedSpectrum& F2,
                                               const TruncationPlan& plan, const Vec3& t,
                                               const std::vector<std::size_t>& m_primes,
                                               int batches = 5, double min_batch_ms = 20.0);

struct LinearFit {
  double slope = 0.0, intercept = 0.0, r2 = 0.0;
};

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// 2^lo, ..., 2^hi clipped to `limit`.
std::vector<std::size_t> powers_of_two(int lo, int hi, std::size_t limit);

}  // namespace sphereconv
