#ifndef OPUC_TRANSFER_HPP
#define OPUC_TRANSFER_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "opuc/types.hpp"
#include "opuc/verblunsky.hpp"

namespace opuc {

/// Continuity tracker for the half-integer power z^{p/2}. For even p the
/// power is single valued and tracking is a no-op in effect; for odd p the
/// value depends on the unwound argument, which is continued along the
/// sampled path. Consecutive samples must keep the argument jump below pi.
class BranchTracker {
 public:
  explicit BranchTracker(int p, double anchor_theta = 0.0);

  /// z^{p/2} continued along the path of calls. Throws PathError when the
  /// argument jump between consecutive samples reaches pi.
  cplx half_power(cplx z);

  /// Resets the path, keeping p; the next sample's argument is taken in
  /// (anchor - pi, anchor + pi].
  void reset(double anchor_theta);

  int p() const { return p_; }
  double unwound_angle() const;

 private:
  int p_;
  double anchor_;
  std::optional<double> last_theta_;
};

/// Half power r^{p/2} e^{i p theta / 2} for an explicitly unwound angle.
/// This is the branch convention used throughout the angle-parameterized API:
/// the caller's continuous theta is the branch coordinate.
cplx half_power_at(int p, double r, double theta);

/// p-step transfer block Phi_m(z) = A(alpha_{(m+1)p-1}, z) ... A(alpha_{mp}, z).
struct TransferBlock {
  std::int64_t m;
  int p;
  cplx z;
  Mat2 phi;
};

TransferBlock transfer_block(const Sequence& seq, std::int64_t m, int p, cplx z);

/// dPhi_m/dz accumulated by the product rule over the p factors.
Mat2 transfer_block_dz(const Sequence& seq, std::int64_t m, int p, cplx z);

/// Delta_m(z) = z^{-p/2} tr Phi_m(z) with the tracked branch.
cplx discriminant(const TransferBlock& block, BranchTracker& branch);

/// M-conjugated block z^{-p/2} M Phi M with M = (1/sqrt2)(1,1;1,-1):
/// det = 1, trace = Delta, and on |z| = 1 the entries satisfy
/// a, ib, ic, d real.
struct TildeBlock {
  cplx a, b, c, d;
  cplx delta;
  std::optional<cplx> delta_prime;
};

TildeBlock tilde_block(const TransferBlock& block, BranchTracker& branch);

// Angle-parameterized evaluation at z = r e^{i theta}; theta is the branch
// coordinate (callers supply it continuously along their own paths).
cplx discriminant_at(const Sequence& seq, std::int64_t m, int p, double r, double theta);
cplx discriminant_derivative_at(const Sequence& seq, std::int64_t m, int p, double r,
                                double theta);
TildeBlock tilde_block_at(const Sequence& seq, std::int64_t m, int p, double r, double theta,
                          bool with_derivative = false);

/// Residuals of the structural identities over a set of samples. Reality
/// residuals are only meaningful on |z| = 1 and are reported separately.
struct StructureSampleReport {
  std::int64_t m;
  cplx z;
  bool on_circle;
  double det_residual;         // |det Phi - z^p| / |z^p|
  double symplectic_residual;  // ||Phi* J Phi - J|| on the circle, else 0
  double tilde_det_residual;   // |det TildeBlock - 1|
  double trace_residual;       // |a + d - Delta|
  double reality_residual;     // max deviation of (a, ib, ic, d) from real, scaled
};

struct StructureReport {
  std::vector<StructureSampleReport> samples;
  double max_det_residual = 0.0;
  double max_symplectic_residual = 0.0;
  double max_tilde_det_residual = 0.0;
  double max_trace_residual = 0.0;
  double max_reality_residual = 0.0;  // over on-circle samples only
};

StructureReport structure_report(const Sequence& seq, int p, std::int64_t m_count,
                                 const std::vector<cplx>& z_samples);

}  // namespace opuc

#endif  // OPUC_TRANSFER_HPP
