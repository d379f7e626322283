#include "sphereconv/applications.hpp"

#include <cstdio>
#include <sstream>

namespace sphereconv {

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Hit: return "HIT";
    case Verdict::Miss: return "MISS";
    case Verdict::Indeterminate: return "INDETERMINATE";
  }
  return "?";
}

namespace {

KnotSet4 rotated(const KnotSet4& k, const Mat3& R) {
  return transform_knots(RigidMotion{R, Vec3::Zero()}, k);
}

}  // namespace

SpectralQueryContext::SpectralQueryContext(const KnotSet4& k1, const KnotSet4& k2,
                                           const Mat3& rot, const UniformGrid& grid,
                                           const MollifierParams& p)
    : plan(grid),
      f1(solid_spectrum(k1, grid, p), plan),
      f2(solid_spectrum(rotated(k2, rot), grid, p), plan),
      R(rot),
      tau(1e-6 * f1.field.norm() * f2.field.norm()) {}

PredicateResult collision_predicate(const KnotSet4& k1, const KnotSet4& k2,
                                    const RigidMotion& m) {
  const CollisionResult c = collide(k1, k2, m);
  PredicateResult r;
  r.verdict = c.hit ? Verdict::Hit : Verdict::Miss;
  r.witness = c.witness;
  return r;
}

PredicateResult collision_predicate(const SpectralQueryContext& ctx, const RigidMotion& m,
                                    std::optional<std::size_t> m_prime) {
  if ((ctx.R - m.R).norm() > 1e-9) throw UsageError("motion rotation differs from the prepared one");
  const std::size_t mp = m_prime.value_or(ctx.plan.size());
  const QueryResult q = single_query(ctx.f1, ctx.f2, ctx.plan, m.t, mp);
  PredicateResult r;
  r.g = q.value;
  r.error_bound = q.error_bound;
  if (q.value - q.error_bound > ctx.tau)
    r.verdict = Verdict::Hit;
  else if (q.value + q.error_bound <= ctx.tau)
    r.verdict = Verdict::Miss;
  else
    r.verdict = Verdict::Indeterminate;
  return r;
}

void SCParams::validate() const {
  if (!(lambda > 0.0)) throw UsageError("lambda must be positive");
  if (r0 < 0.0) throw UsageError("r0 must be positive");
}

double sc_combine(const SCTerms& t, double lambda) {
  return lambda * lambda * t.t1 - 2.0 * lambda * t.t2 + t.t3;
}

double resolve_r0(const SCParams& params, const UniformGrid& grid) {
  params.validate();
  return params.r0 > 0.0 ? params.r0 : grid.epsilon();
}

SCResult sc_score(const KnotSet4& k1, const KnotSet4& k2, const RigidMotion& m,
                  const SCParams& params) {
  params.validate();
  if (!(params.r0 > 0.0)) throw UsageError("r0 must be positive");
  const double r0 = params.r0;
  SCResult r;
  r.terms.t1 = gap_at(k1, k2, m, params.mollifier, 0.0);
  r.terms.t2 = gap_at(k1, k2, m, params.mollifier, -r0);
  r.terms.t3 = gap_at(k1, k2, m, params.mollifier, -2.0 * r0);
  r.score = sc_combine(r.terms, params.lambda);
  return r;
}

namespace {

void check_clipping(const KnotSet4& k1, const KnotSet4& k2, const Mat3& R,
                    const UniformGrid& grid, double grow) {
  const double L = grid.half_extent();
  for (const Ball& a : k1.knots())
    for (const Ball& b : k2.knots()) {
      const Vec3 c = a.center - R * b.center;
      const double s = a.radius + b.radius + grow;
      if (c.cwiseAbs().maxCoeff() + s > L) {
        std::ostringstream os;
        os << "grown obstacle ball (radius " << s << ") reaches the box boundary; "
           << "reduce r0 or enlarge the grid";
        throw ClippingError(os.str());
      }
    }
}

ScalarField combine_fields(const ScalarField& a, const ScalarField& b, const ScalarField& c,
                           double lambda) {
  ScalarField out(a.grid);
  for (std::size_t i = 0; i < out.values.size(); ++i)
    out.values[i] = sc_combine({a.values[i], b.values[i], c.values[i]}, lambda);
  return out;
}

}  // namespace

SCFieldResult sc_score_field(const KnotSet4& k1, const KnotSet4& k2, const Mat3& R,
                             const UniformGrid& grid, const SCParams& params) {
  const double r0 = resolve_r0(params, grid);
  check_clipping(k1, k2, R, grid, 2.0 * r0);
  const auto& p = params.mollifier;
  ScalarField t1 = gap_field_spatial(k1, k2, R, grid, p, 0.0);
  ScalarField t2 = gap_field_spatial(k1, k2, R, grid, p, -r0);
  ScalarField t3 = gap_field_spatial(k1, k2, R, grid, p, -2.0 * r0);
  ScalarField g = combine_fields(t1, t2, t3, params.lambda);
  return {std::move(t1), std::move(t2), std::move(t3), std::move(g)};
}

SCFieldResult sc_score_field_spectral(const KnotSet4& k1, const KnotSet4& k2, const Mat3& R,
                                      const UniformGrid& grid, const SCParams& params) {
  const double r0 = resolve_r0(params, grid);
  check_clipping(k1, k2, R, grid, 2.0 * r0);
  const auto& p = params.mollifier;
  std::array<SpectralField, 3> F{SpectralField(grid), SpectralField(grid), SpectralField(grid)};
  for (int k = 0; k < 3; ++k) {
    FourierGapOptions opt;
    opt.source = KernelSource::Radial;
    opt.offset = k * r0;
    F[k] = fourier_gap(k1, k2, R, grid, p, opt);
  }
  const double lam = params.lambda;
  SpectralField G(grid);
  for (std::size_t i = 0; i < G.coeffs.size(); ++i)
    G.coeffs[i] = lam * lam * F[0].coeffs[i] - 2.0 * lam * F[1].coeffs[i] + F[2].coeffs[i];
  return {dft_inverse(F[0]), dft_inverse(F[1]), dft_inverse(F[2]), dft_inverse(G)};
}

KnotSet4 offset_obstacle(const KnotSet4& k1, const KnotSet4& k2, const Mat3& R, double d,
                         std::size_t pair_cap) {
  return slice_at(obstacle_knots(k1, k2, R, pair_cap), -d);
}

std::string score_csv_header() { return "R_literal,tx,ty,tz,T1,T2,T3,G"; }

std::string score_csv_row(const std::string& motion_literal, const Vec3& t, const SCResult& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "\"%s\",%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g",
                motion_literal.c_str(), t.x(), t.y(), t.z(), r.terms.t1, r.terms.t2, r.terms.t3,
                r.score);
  return buf;
}

}  // namespace sphereconv
