#ifndef OPUC_APPROXIMANT_HPP
#define OPUC_APPROXIMANT_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "opuc/arcset.hpp"
#include "opuc/diagonalize.hpp"
#include "opuc/transfer.hpp"
#include "opuc/types.hpp"
#include "opuc/verblunsky.hpp"

namespace opuc {

/// Eventually periodic approximant: coefficients agree with the base sequence
/// for blocks m < cutoff and repeat block `cutoff` afterwards, so the p-step
/// blocks are Phi_{min(cutoff, m)} of the base.
class Approximant {
 public:
  Approximant(Sequence base, std::int64_t cutoff, int p);

  cplx alpha(std::int64_t index) const;
  Coefficient at(std::int64_t index) const;

  /// The approximant as a plain sequence (for Schur/Caratheodory evaluation).
  Sequence as_sequence() const;

  TildeBlock block(std::int64_t m, double r, double theta, bool with_derivative = false) const;

  const Sequence& base() const { return base_; }
  std::int64_t cutoff() const { return cutoff_; }
  int p() const { return p_; }

 private:
  Sequence base_;
  std::int64_t cutoff_;
  int p_;
};

/// Backward-solved Weyl solution: u_n for n = 0..N seeded at n = N with the
/// contracting eigenvector (lambda_N - d_N, c_N). The backward steps use the
/// adjugate inverse (det TildeBlock = 1). On the circle the Wronskian
/// 2 Re(u_1 conj(u_2)) is constant; its relative drift and the forward
/// roundtrip residual are recorded.
struct WeylTrace {
  cplx z;
  std::vector<Vec2> u;  // u[n], n = 0..N
  Vec2 seed;
  double wronskian_drift = 0.0;   // on-circle only, else 0
  double forward_residual = 0.0;  // ||forward(u_0) - u_N|| / ||u_N||
};

WeylTrace weyl_solution(const Approximant& approx, double r, double theta,
                        const SignConstants& sc);

/// Sampled a.c. density w(theta) >= 0 on a grid inside a validated arc.
struct DensityProfile {
  Arc arc;
  std::vector<double> theta;
  std::vector<double> w;
  std::int64_t cutoff = 0;
  std::vector<std::string> notes;
};

/// Density of the approximant measure from the Weyl solution:
/// w = -i c_N Im(lambda_N) / |(u_0)_2|^2. Throws NumericError when the
/// formula returns a significantly negative or non-real value (invalid
/// region or s != t).
DensityProfile ac_density(const Approximant& approx, std::span<const double> theta_grid,
                          const SignConstants& sc);

enum class EntropyWeight { One, OneMinusCos, OneMinusCosSq };

struct EntropyResult {
  double value = 0.0;
  double clipped_fraction = 0.0;
  bool unreliable = false;  // more than 5% of grid points clipped
};

/// Trapezoidal integral of weight(theta) log w(theta) over the profile arc,
/// normalized by 2 pi. Zero densities are clipped at 1e-300 and flagged.
EntropyResult entropy_integral(const DensityProfile& profile, EntropyWeight weight);

/// Two-route factorization diagnostics of the backward solution: the plain
/// block product and the scalar-factored form
///   U_0^{-1} u_0 = prod_n (lambda_n^{-1} (1 + e_n)) (phi, nu)^T
/// with the scalar accumulated in log space. log_remainder is
/// -log |phi + nu|, the quantity whose boundedness controls log w.
struct ProductDiagnostics {
  std::vector<cplx> kappa;            // lambda_n^{-1}, n = 0..N-1
  std::vector<Mat2> w;                // W_n = U_n^{-1} U_{n+1} - I
  std::vector<double> w_norm;         // spectral norms
  std::vector<double> w_norm_sq_prefix;  // running sum of ||W||^2
  std::vector<Vec2> psi;              // normalized partial products, outermost last
  Vec2 backward;                      // U_0^{-1} u_0 via the backward solve
  Vec2 normalized;                    // (phi, nu)
  cplx log_scale;                     // sum log(lambda_n^{-1} (1 + e_n))
  double direct_residual = 0.0;       // plain product vs backward, relative
  double factored_residual = 0.0;     // exp(log_scale) (phi, nu) vs backward
  double log_remainder = 0.0;         // -log |phi + nu|
};

ProductDiagnostics product_diagnostics(const Approximant& approx, double r, double theta,
                                       const SignConstants& sc);

/// Empirical constants for the interior bounds tying log w to the product
/// remainder, collected over a family of cutoffs.
struct RemainderReport {
  std::vector<std::int64_t> cutoffs;
  std::vector<double> max_mismatch_per_cutoff;  // max over arc of |log w - 2 f|
  std::vector<double> positive_part_integral;   // int f^+ dtheta/2pi per cutoff
  double max_mismatch = 0.0;
  double max_positive_part = 0.0;
  double min_scaled_interior = 0.0;  // min of f * (1 - |z|) over the open annulus
  double max_deep_value = 0.0;       // max of f where 1 - |z| > epsilon/2
};

RemainderReport remainder_report(const Sequence& base, int p,
                                 std::span<const std::int64_t> cutoffs, const SignConstants& sc,
                                 int theta_samples, int radial_samples);

/// Smallest coefficient offset k (a multiple of p) whose stripped sequence
/// has tail sum of ||W_n||^2 below delta, estimated over `budget` blocks at a
/// handful of arc angles. Throws NumericError when the budget is exhausted.
struct StrippingResult {
  std::int64_t k = 0;
  double tail_sum = 0.0;
};

StrippingResult choose_stripping_offset(const Sequence& seq, int p, double delta,
                                        const SignConstants& sc, std::int64_t budget = 2048);

}  // namespace opuc

#endif  // OPUC_APPROXIMANT_HPP
