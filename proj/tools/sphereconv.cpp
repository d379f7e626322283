// sphereconv command-line frontend.
//
// Exit codes: 0 ok, 1 usage, 2 I/O, 3 mesh, 4 resource, 5 other.
#include "sphereconv/bench.hpp"
#include "sphereconv/io.hpp"
#include "sphereconv/shapes.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <iostream>

using namespace sphereconv;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct Common {
  double half_extent = 0.5;
  std::uint64_t seed = 0;
};

void add_common(CLI::App* c, Common& o) {
  c->add_option("--half-extent", o.half_extent, "Half side L of the working box [-L, L)^3")
      ->check(CLI::PositiveNumber);
  c->add_option("--seed", o.seed, "Seed for every sampling step");
}

MollifierParams mollifier_from(double alpha) {
  if (!(alpha > 0.0)) throw UsageError("alpha must be positive");
  return {alpha};
}

// ---------------------------------------------------------------------------

struct DecomposeOpts {
  Common common;
  std::string mesh, out, criterion = "sdf";
  std::int64_t grid_size = 4096;
  double mu = 0.25, alpha = 2.0;
  std::optional<std::size_t> max_balls;
};

int run_decompose(const DecomposeOpts& o) {
  mollifier_from(o.alpha);
  const UniformGrid g = UniformGrid::from_node_count(o.common.half_extent, o.grid_size);
  const Solid s = shapes::load_solid(o.mesh, o.common.half_extent);
  DecompositionParams p;
  p.mu = o.mu;
  p.criterion = parse_criterion(o.criterion);
  p.max_balls = o.max_balls;
  p.seed = o.common.seed;
  DecompositionResult r;
  try {
    r = decompose(s, g, p);
  } catch (const IncompleteDecomposition& e) {
    write_knots_csv(o.out + ".partial.a1.csv", e.partial());
    throw;
  }
  write_knots_csv(o.out + ".a1.csv", r.a1);
  write_knots_csv(o.out + ".a2.csv", r.a2);
  write_knots_csv(o.out + ".a3.csv", r.a3);
  write_text(o.out + ".stats.csv", stats_csv_header() + "\n" + stats_csv_row(r.stats) + "\n");
  std::printf("m=%zu epsilon=%.6g n12=%zu n3=%zu interior=%zu\n", r.stats.m, r.stats.epsilon,
              r.stats.n12, r.stats.n3, r.stats.interior_nodes);
  return 0;
}

// ---------------------------------------------------------------------------

struct MinkowskiOpts {
  Common common;
  std::string a, b, motion = "axis 0 0 1 0 0 0 0", out;
  double offset = 0.0, alpha = 2.0;
  int gap_grid = 0;
  std::size_t pair_cap = kDefaultPairCap;
};

int run_minkowski(const MinkowskiOpts& o) {
  const double trim = 2.0 * o.common.half_extent;
  const KnotSet4 k1 = read_knots_csv(o.a, trim);
  const KnotSet4 k2 = read_knots_csv(o.b, trim);
  const RigidMotion m = parse_motion(o.motion);
  if (m.t.norm() > 0.0) warn("minkowski uses only the rotation of the motion literal");
  const auto t0 = Clock::now();
  const KnotSet4 obs = offset_obstacle(k1, k2, m.R, o.offset, o.pair_cap);
  const double t_ms = ms_since(t0);
  write_knots_csv(o.out + ".obstacle.csv", obs);
  std::printf("obstacle knots=%zu time_ms=%.3f\n", obs.size(), t_ms);
  if (o.gap_grid > 0) {
    const UniformGrid g(o.common.half_extent, o.gap_grid);
    write_scalar_field(o.out + ".gap.field",
                       gap_field_spatial(k1, k2, m.R, g, mollifier_from(o.alpha), -o.offset));
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct CollideOpts {
  Common common;
  std::string a, b, motion, mode = "combinatorial";
  std::optional<std::size_t> m_prime;
  int grid = 64;
  double alpha = 2.0;
};

int run_collide(const CollideOpts& o) {
  const double trim = 2.0 * o.common.half_extent;
  const KnotSet4 k1 = read_knots_csv(o.a, trim);
  const KnotSet4 k2 = read_knots_csv(o.b, trim);
  const RigidMotion m = parse_motion(o.motion);
  if (o.mode == "combinatorial") {
    const auto t0 = Clock::now();
    const PredicateResult r = collision_predicate(k1, k2, m);
    const double t_ms = ms_since(t0);
    std::printf("%s", verdict_name(r.verdict).c_str());
    if (r.witness) std::printf(" witness=%zu,%zu", r.witness->first, r.witness->second);
    std::printf(" query_ms=%.6f\n", t_ms);
    return 0;
  }
  if (o.mode != "spectral") throw UsageError("mode must be combinatorial or spectral");
  const UniformGrid g(o.common.half_extent, o.grid);
  const auto t0 = Clock::now();
  const SpectralQueryContext ctx(k1, k2, m.R, g, mollifier_from(o.alpha));
  const double prep_ms = ms_since(t0);
  const auto t1 = Clock::now();
  const PredicateResult r = collision_predicate(ctx, m, o.m_prime);
  const double t_ms = ms_since(t1);
  std::printf("%s g=%.9g error_bound=%.3g tau=%.3g m_prime=%zu prepare_ms=%.3f query_ms=%.6f\n",
              verdict_name(r.verdict).c_str(), *r.g, *r.error_bound, ctx.tau,
              o.m_prime.value_or(ctx.plan.size()), prep_ms, t_ms);
  return 0;
}

// ---------------------------------------------------------------------------

struct ScoreOpts {
  Common common;
  std::string a, b, out, field_out;
  std::vector<std::string> motions;
  double lambda = 2.0, r0 = 0.0, alpha = 2.0;
  int grid = 0;
  bool spectral = false;
};

int run_score(const ScoreOpts& o) {
  const double trim = 2.0 * o.common.half_extent;
  const KnotSet4 k1 = read_knots_csv(o.a, trim);
  const KnotSet4 k2 = read_knots_csv(o.b, trim);
  SCParams p;
  p.lambda = o.lambda;
  p.r0 = o.r0;
  p.mollifier = mollifier_from(o.alpha);
  p.validate();
  if (p.r0 == 0.0) {
    if (o.grid <= 0) throw UsageError("--r0 is required unless --grid sets the default skin");
    p.r0 = UniformGrid(o.common.half_extent, o.grid).epsilon();
  }
  std::string csv = score_csv_header() + "\n";
  for (const auto& lit : o.motions) {
    const RigidMotion m = parse_motion(lit);
    csv += score_csv_row(lit, m.t, sc_score(k1, k2, m, p)) + "\n";
  }
  if (o.out.empty())
    std::cout << csv;
  else
    write_text(o.out, csv);
  if (!o.field_out.empty()) {
    if (o.grid <= 0) throw UsageError("--field-out needs --grid");
    if (o.motions.size() != 1) throw UsageError("--field-out needs exactly one motion for its rotation");
    const Mat3 R = parse_motion(o.motions.front()).R;
    const UniformGrid g(o.common.half_extent, o.grid);
    const SCFieldResult f = o.spectral ? sc_score_field_spectral(k1, k2, R, g, p)
                                       : sc_score_field(k1, k2, R, g, p);
    write_scalar_field(o.field_out + ".G.field", f.score);
    write_scalar_field(o.field_out + ".T1.field", f.t1);
    write_scalar_field(o.field_out + ".T2.field", f.t2);
    write_scalar_field(o.field_out + ".T3.field", f.t3);
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct BenchOpts {
  Common common;
  std::string mesh, mesh2 = "builtin:pebble", out, grids = "2^12,2^15,2^18";
  double mu = 0.25;
  double uniform_cap = 4e9;
  int spectral_grid = 32;
};

std::vector<std::size_t> parse_grids(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  for (std::string tok; std::getline(ss, tok, ',');) {
    try {
      std::size_t used = 0;
      std::size_t v;
      if (const auto caret = tok.find('^'); caret != std::string::npos) {
        const int base = std::stoi(tok.substr(0, caret));
        const int e = std::stoi(tok.substr(caret + 1), &used);
        if (base != 2 || e < 0 || e > 40 || used != tok.size() - caret - 1) throw std::invalid_argument(tok);
        v = std::size_t{1} << e;
      } else {
        v = std::stoull(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
      }
      out.push_back(v);
    } catch (const std::exception&) {
      throw UsageError("bad grid size '" + tok + "'");
    }
  }
  if (out.empty()) throw UsageError("no grid sizes given");
  return out;
}

int run_bench(const BenchOpts& o) {
  const auto grids = parse_grids(o.grids);
  const Solid s1 = shapes::load_solid(o.mesh, o.common.half_extent);
  const Solid s2 = shapes::load_solid(o.mesh2, o.common.half_extent);
  BenchOptions bo;
  bo.half_extent = o.common.half_extent;
  bo.mu = o.mu;
  bo.seed = o.common.seed;
  bo.uniform_pair_cap = o.uniform_cap;

  std::string csv = bench_csv_header() + "\n";
  DecompositionResult d1, d2;
  for (std::size_t m : grids) {
    BenchRecord r = bench_pair(s1, s2, m, bo, &d1, &d2);
    r.experiment = "minkowski_m" + std::to_string(m);
    csv += bench_csv_row(r) + "\n";
    std::printf("%s\n", bench_csv_row(r).c_str());
    std::fflush(stdout);
  }
  std::filesystem::path base(o.out);
  write_text(base, csv);

  // sweeps on the last decomposition; the lattice spans the whole obstacle
  const UniformGrid g(2.0 * o.common.half_extent, o.spectral_grid);
  const TruncationPlan plan(g);
  FourierGapOptions fo;
  fo.source = KernelSource::Radial;
  const SpectralField F = fourier_gap(d1.a3, d2.a3, Mat3::Identity(), g, {}, fo);
  std::string tcsv = "m_prime,residual\n";
  for (const auto& p : truncation_sweep(F, powers_of_two(0, 30, plan.size())))
    tcsv += std::to_string(p.m_prime) + "," + std::to_string(p.residual) + "\n";
  const PreparedSpectrum P1(solid_spectrum(d1.a3, g), plan), P2(solid_spectrum(d2.a3, g), plan);
  const auto sweep = query_time_sweep(P1, P2, plan, Vec3(0.1, 0.2, 0.3), powers_of_two(6, 14, plan.size()));
  std::string qcsv = "m_prime,query_ms\n";
  std::vector<double> x, y;
  for (const auto& p : sweep) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%zu,%.9g\n", p.m_prime, p.ms);
    qcsv += buf;
    x.push_back(static_cast<double>(p.m_prime));
    y.push_back(p.ms);
  }
  const auto stem = base.parent_path() / base.stem();
  write_text(stem.string() + ".truncation.csv", tcsv);
  write_text(stem.string() + ".query.csv", qcsv);
  if (x.size() >= 2) {
    const LinearFit fit = fit_line(x, y);
    std::printf("query time fit: slope=%.3g ms/mode intercept=%.3g ms R2=%.4f\n", fit.slope,
                fit.intercept, fit.r2);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spherical decomposition, knot Minkowski sums and Fourier collision queries"};
  app.require_subcommand(1);

  DecomposeOpts dec;
  auto* c_dec = app.add_subcommand("decompose", "Decompose a mesh into A1/A2/A3 knot sets");
  c_dec->add_option("--mesh", dec.mesh, "OBJ/STL path or builtin:NAME")->required();
  c_dec->add_option("--grid-size", dec.grid_size, "Node count M (a perfect cube)");
  c_dec->add_option("--mu", dec.mu, "Protrusion tolerance")->check(CLI::PositiveNumber);
  c_dec->add_option("--alpha", dec.alpha, "Mollifier exponent");
  c_dec->add_option("--criterion", dec.criterion, "distance | sdf");
  c_dec->add_option("--max-balls", dec.max_balls, "Stop after this many A1 balls");
  c_dec->add_option("--out", dec.out, "Output prefix")->required();
  add_common(c_dec, dec.common);

  MinkowskiOpts mink;
  auto* c_mink = app.add_subcommand("minkowski", "Obstacle knots of two knot sets");
  c_mink->add_option("--a", mink.a, "Knot CSV of the fixed solid")->required();
  c_mink->add_option("--b", mink.b, "Knot CSV of the moving solid")->required();
  c_mink->add_option("--motion", mink.motion, "Motion literal 'axis ax ay az deg tx ty tz'");
  c_mink->add_option("--offset", mink.offset, "Radius offset added to every obstacle ball");
  c_mink->add_option("--gap-grid", mink.gap_grid, "Also write the gap field on an N^3 grid");
  c_mink->add_option("--alpha", mink.alpha, "Mollifier exponent for the gap field");
  c_mink->add_option("--pair-cap", mink.pair_cap, "Maximum obstacle knot count");
  c_mink->add_option("--out", mink.out, "Output prefix")->required();
  add_common(c_mink, mink.common);

  CollideOpts col;
  auto* c_col = app.add_subcommand("collide", "Collision verdict for one configuration");
  c_col->add_option("--a", col.a, "Knot CSV of the fixed solid")->required();
  c_col->add_option("--b", col.b, "Knot CSV of the moving solid")->required();
  c_col->add_option("--motion", col.motion, "Motion literal 'axis ax ay az deg tx ty tz'")->required();
  c_col->add_option("--mode", col.mode, "combinatorial | spectral");
  c_col->add_option("--mprime", col.m_prime, "Retained Fourier modes (spectral)");
  c_col->add_option("--grid", col.grid, "Frequency lattice per axis (spectral)");
  c_col->add_option("--alpha", col.alpha, "Mollifier exponent (spectral)");
  add_common(c_col, col.common);

  ScoreOpts sc;
  auto* c_sc = app.add_subcommand("score", "Shape-complementarity score");
  c_sc->add_option("--a", sc.a, "Knot CSV of the receptor")->required();
  c_sc->add_option("--b", sc.b, "Knot CSV of the ligand")->required();
  c_sc->add_option("--motion", sc.motions, "Motion literal; repeat for several rows")->required();
  c_sc->add_option("--lambda", sc.lambda, "Penalty factor");
  c_sc->add_option("--r0", sc.r0, "Skin offset (default: grid epsilon)");
  c_sc->add_option("--alpha", sc.alpha, "Mollifier exponent");
  c_sc->add_option("--grid", sc.grid, "Translation grid per axis");
  c_sc->add_option("--field-out", sc.field_out, "Write T1/T2/T3/G fields with this prefix");
  c_sc->add_flag("--spectral", sc.spectral, "Assemble the field in the frequency domain");
  c_sc->add_option("--out", sc.out, "CSV path (default stdout)");
  add_common(c_sc, sc.common);

  BenchOpts be;
  auto* c_be = app.add_subcommand("bench", "Uniform vs knot Minkowski and spectral sweeps");
  c_be->add_option("--mesh", be.mesh, "First mesh (path or builtin:NAME)")->required();
  c_be->add_option("--mesh2", be.mesh2, "Second mesh");
  c_be->add_option("--grids", be.grids, "Comma list of node counts, e.g. 2^12,2^15");
  c_be->add_option("--mu", be.mu, "Protrusion tolerance")->check(CLI::PositiveNumber);
  c_be->add_option("--uniform-cap", be.uniform_cap, "Pair count above which the baseline is DNF");
  c_be->add_option("--spectral-grid", be.spectral_grid, "Lattice per axis for the sweeps");
  c_be->add_option("--out", be.out, "Record CSV path")->required();
  add_common(c_be, be.common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*c_dec) return run_decompose(dec);
    if (*c_mink) return run_minkowski(mink);
    if (*c_col) return run_collide(col);
    if (*c_sc) return run_score(sc);
    if (*c_be) return run_bench(be);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 1;
  } catch (const IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 2;
  } catch (const MeshError& e) {
    std::fprintf(stderr, "mesh error: %s\n", e.what());
    return 3;
  } catch (const ResourceError& e) {
    std::fprintf(stderr, "resource error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 5;
  }
  return 0;
}
