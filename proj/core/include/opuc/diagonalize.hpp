#ifndef OPUC_DIAGONALIZE_HPP
#define OPUC_DIAGONALIZE_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "opuc/arcset.hpp"
#include "opuc/transfer.hpp"
#include "opuc/types.hpp"
#include "opuc/verblunsky.hpp"

namespace opuc {

/// Roots of lambda^2 - Delta lambda + 1 = 0 for |Delta| < 2:
/// lambda_pm = (Delta +- i sqrt(4 - Delta^2)) / 2 with the principal branch
/// of sqrt on C minus the negative real axis. Throws DomainError (out of
/// band) for |Delta| >= 2; the cut of the square root is only reached there.
struct EigenvaluePair {
  cplx plus, minus;
};
EigenvaluePair lambda_pair(cplx delta);

/// Validated sign data for an arc: a block index m0, signs s and t, an
/// annulus depth epsilon and a margin c such that for all scanned m >= m0
/// and z in the annulus over the arc,
///   |Delta_m| <= 2 - c,  s Im(z Delta'_m) >= c,  c <= t Im(c_m), |c_m| <= 1/c.
/// Construction scans forward until the signs hold over a confirmation
/// window and fails loudly when they do not; s != t is a hard failure.
struct SignConstants {
  int s = +1;
  int t = +1;
  std::int64_t m0 = 0;
  double margin = 0.0;
  double epsilon = 0.05;
  Arc arc;
  std::int64_t window_hi = 0;  // blocks validated: [m0, window_hi)
};

SignConstants detect_sign_constants(const Sequence& seq, int p, Arc arc, int theta_samples,
                                    std::int64_t window_lo, std::int64_t window_hi,
                                    double epsilon = 0.05, std::int64_t confirm = 200);

/// Eigen-decomposition of one conjugated block: TildeBlock = U diag(lambda,
/// 1/lambda) U^{-1} with U = [[lambda - d, 1/lambda - d], [c, c]] and
/// det U = (lambda - 1/lambda) c. The eigenvalue is chosen by the sign s so
/// that it is the contracting branch inside the disk.
struct EigenFrame {
  cplx lambda, lambda_inv;
  Mat2 u, u_inv;
  cplx det_u;
};

EigenFrame eigen_frame(const TildeBlock& tilde, const SignConstants& sc);

/// W = U_m^{-1} U_{m+1} - I for consecutive frames at the same z, with its
/// spectral norm.
struct Perturbation {
  Mat2 w;
  double norm;
};
Perturbation perturbation_matrix(const EigenFrame& frame_m, const EigenFrame& frame_m1);

/// Partial sums S(k, l) = sum_{n=k}^{l} (eps_{n+1} - eps_n) / eps_n over all
/// subranges of the input window, for sequences with Im eps_n > 0 throughout.
/// Validates the positivity bound (naming the first bad index) and reports
/// the largest partial-sum modulus together with the empirical constants of
/// the input data.
struct IncrementRatioScan {
  double max_abs = 0.0;
  std::int64_t argmax_lo = 0, argmax_hi = 0;
  cplx total;
  double data_bound = 0.0;       // max(max |eps|, 1 / min Im eps)
  double squared_variation = 0.0;  // sum |eps_{n+1} - eps_n|^2
};
IncrementRatioScan scan_increment_ratios(std::span<const cplx> eps);

}  // namespace opuc

#endif  // OPUC_DIAGONALIZE_HPP
