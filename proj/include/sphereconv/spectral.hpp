// Uniform DFT (FFTW-backed), direct NDFT of knot densities, kernel spectra,
// Fourier gap assembly, truncated reconstruction and single-configuration
// queries.
//
// Convention: over [-L, L)^D with n nodes per axis, frequencies are
// omega_j = j / (2L) with signed j in [-n/2, n/2). The forward transform is the
// Riemann sum h^D sum_k f(x_k) exp(-2 pi i omega . x_k), the inverse carries
// 1 / (2L)^D, so Parseval holds exactly with frequency cell 1 / (2L)^D.
// Coefficients are stored in FFT index order (j >= 0 first, then negative),
// x fastest.
#pragma once

#include "sphereconv/correlation.hpp"

#include <complex>

namespace sphereconv {

using Complex = std::complex<double>;

struct SpectralField {
  SpectralField(UniformGrid g, std::vector<Complex> c);
  explicit SpectralField(UniformGrid g);

  /// Physical grid the lattice belongs to (same n per axis, same L).
  UniformGrid grid;
  std::vector<Complex> coeffs;

  int dimension() const { return grid.dimension(); }
  /// Signed frequency index along an axis of `count` nodes.
  static int signed_index(int k, int count) { return k < (count + 1) / 2 ? k : k - count; }
  std::array<int, 4> signed_indices(std::size_t idx) const;
  /// Index of the coefficient at -omega (index negation mod n per axis).
  std::size_t negated_index(std::size_t idx) const;
  double frequency_step() const { return 0.5 / grid.half_extent(); }
  /// Frequency cell measure 1 / (2L)^D.
  double cell_measure() const;
  double norm() const;
};

SpectralField dft_forward(const ScalarField& f);
/// Real part of the inverse transform.
ScalarField dft_inverse(const SpectralField& F);
std::vector<Complex> dft_inverse_complex(const SpectralField& F);

/// Literal O(N^2) double sum of the forward definition; the test oracle.
SpectralField dft_direct(const ScalarField& f);

/// rho^(omega) = sum_i c_i exp(-2 pi i omega . x_i) on the lattice of `grid`.
SpectralField ndft_knots(const KnotSet3& k, const UniformGrid& grid);
/// 4D lattice; apexes (x_i, r_i), or (x_i, -r_i) when the set is mirrored.
SpectralField ndft_knots(const KnotSet4& k, const UniformGrid& grid4);
/// Centers only (3D lattice), weights c_i.
SpectralField ndft_centers(const KnotSet4& k, const UniformGrid& grid);

/// Continuous transform of the unit-radius ball bump as a function of
/// q = |omega|: H(q) = 4 pi int_0^1 psi(rho) rho^2 sinc(2 pi q rho) d rho,
/// tabulated on [0, q_max]. A ball of radius s has transform s^3 H(s |omega|).
class RadialTransform {
 public:
  RadialTransform(const MollifierParams& p, double q_max, int samples = 8192);
  double operator()(double q) const;
  double q_max() const { return q_max_; }
  /// Direct quadrature, no table.
  static double evaluate(double q, const MollifierParams& p);

 private:
  double q_max_;
  std::vector<double> values_;
};

enum class KernelKind { Ball, Cone };

/// Spectrum of the primitive bump (ball of `size` radius at the origin, or
/// the downward cone of trim height `size` with apex at the origin) by
/// rasterizing at `oversample` x the resolution, transforming and keeping the
/// target lattice.
SpectralField kernel_spectrum(KernelKind kind, double size, const MollifierParams& p,
                              const UniformGrid& grid, int oversample = 2);

enum class KernelSource {
  /// Rasterized and transformed primitive bump.
  Rasterized,
  /// Continuous transform via the radial table.
  Radial,
};

struct FourierGapOptions {
  GapKernel kernel = GapKernel::Substituted;
  KernelSource source = KernelSource::Rasterized;
  /// Radius growth added to every obstacle ball (the -level of slice_at).
  double offset = 0.0;
};

/// Equiradius gap spectrum rho^_P1 conj(rho^_RP2) K^ on the lattice of `grid`.
SpectralField fourier_gap(const KnotSet3& k1, const KnotSet3& k2, const Mat3& R,
                          const UniformGrid& grid, const MollifierParams& p = {},
                          const FourierGapOptions& opt = {});

/// Nonequiradius gap spectrum assembled pair by pair from the radial table,
/// grouped by distinct obstacle radius.
SpectralField fourier_gap(const KnotSet4& k1, const KnotSet4& k2, const Mat3& R,
                          const UniformGrid& grid, const MollifierParams& p = {},
                          const FourierGapOptions& opt = {});

/// Lifted route: rho^_A1 conj(rho^_{R mirror(A2)}) f^_D0^2 on a 4D lattice.
/// The knots' trim heights must agree; apex sums and the doubled cone must fit
/// the r range of the lattice.
SpectralField fourier_gap_4d(const KnotSet4& k1, const KnotSet4& k2, const Mat3& R,
                             const UniformGrid& grid4, const MollifierParams& p = {});

/// Modes in ascending integer shells |j|^2, lexicographic in signed j within
/// a shell.
class TruncationPlan {
 public:
  explicit TruncationPlan(const UniformGrid& grid);
  const std::vector<std::uint32_t>& order() const { return order_; }
  std::size_t size() const { return order_.size(); }
  const UniformGrid& grid() const { return grid_; }

 private:
  UniformGrid grid_;
  std::vector<std::uint32_t> order_;
};

/// Inverse transform keeping only the first m' modes of the plan.
ScalarField reconstruct_truncated(const SpectralField& F, std::size_t m_prime);

/// Spectrum plus its energy left beyond each truncation point.
struct PreparedSpectrum {
  PreparedSpectrum(SpectralField F, const TruncationPlan& plan);
  SpectralField field;
  /// tail[k] = sum over plan positions >= k of |F|^2; size N + 1.
  std::vector<double> tail;
  /// Coefficients in plan order.
  std::vector<Complex> ordered;
};

struct QueryResult {
  double value = 0.0;
  /// Cauchy-Schwarz bound on the discarded modes' contribution.
  double error_bound = 0.0;
};

/// g(t) = Re sum over the first m' modes of F1 conj(exp(-2 pi i omega . t) F2)
/// times the frequency cell measure. F2 must already carry the rotation.
QueryResult single_query(const PreparedSpectrum& F1, const PreparedSpectrum& F2,
                         const TruncationPlan& plan, const Vec3& t, std::size_t m_prime);
double single_query(const SpectralField& F1, const SpectralField& F2, const Vec3& t,
                    std::size_t m_prime);

/// Spectrum of the bump field sum_i c_i psi(|x - x_i| / r_i) (radial table).
SpectralField solid_spectrum(const KnotSet4& k, const UniformGrid& grid,
                             const MollifierParams& p = {}, double grow = 0.0);

/// Pointwise product and conjugate helpers.
SpectralField multiply(const SpectralField& a, const SpectralField& b, bool conjugate_b = false);

}  // namespace sphereconv
