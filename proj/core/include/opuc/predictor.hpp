#ifndef OPUC_PREDICTOR_HPP
#define OPUC_PREDICTOR_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "opuc/arcset.hpp"
#include "opuc/types.hpp"
#include "opuc/verblunsky.hpp"

namespace opuc {

/// Sampled profile of L(e^{i theta}) = max over a tail window of blocks of
/// |Delta_m|, the finite-window surrogate for the limsup. The drift field
/// compares the half window against the full window; a drift above tolerance
/// means the window is too small for this family and is flagged, not hidden.
struct LProfile {
  std::vector<double> theta;
  std::vector<double> value;
  std::int64_t window_lo = 0, window_hi = 0;
  double max_drift = 0.0;
  bool window_warning = false;
};

LProfile compute_l(const Sequence& seq, int p, std::span<const double> theta_grid,
                   std::int64_t window_lo, std::int64_t window_hi, double drift_tol = 1e-6);

/// L at a single angle (same window surrogate); used for endpoint bisection.
double l_at(const Sequence& seq, int p, double theta, std::int64_t window_lo,
            std::int64_t window_hi);

/// Lower/upper predicted supports from an L profile: lower is the closure of
/// {L < 2 - tol_band}, upper is {L <= 2 + tol_band}. Endpoints are refined by
/// bisection on L - 2 between bracketing grid points when an evaluator is
/// supplied; otherwise they stay at grid resolution and a warning is added.
struct BandPrediction {
  ArcSet lower, upper;
  std::vector<std::string> warnings;
};

BandPrediction predict_from_l(const LProfile& profile, double tol_band,
                              const std::function<double(double)>& l_eval = nullptr);

/// Step-1 closed form: the arc [2 asin A, 2pi - 2 asin A]. Empty for A >= 1.
ArcSet predict_period1(double amplitude);

/// Step-2 closed form: closure of {theta : -a_plus < cos theta < a_minus};
/// empty when -a_plus >= a_minus. Values outside [-1, 1] are clipped.
ArcSet predict_period2(double a_plus, double a_minus);

/// Finite-window surrogates for the limit constants of the step-1/step-2
/// predictions: A = max |alpha_n| (limsup surrogate) and
/// a_pm = min (rho_{2m} rho_{2m+1} +- Re(alpha_{2m} conj(alpha_{2m+1})))
/// (liminf surrogates), with a half-window drift estimate.
struct LimitConstants {
  int p = 1;
  double amplitude = 0.0;        // p = 1
  double a_plus = 0.0, a_minus = 0.0;  // p = 2
  double drift = 0.0;
  bool unstable = false;
};

LimitConstants estimate_limit_constants(const Sequence& seq, int p, std::int64_t window_lo,
                                        std::int64_t window_hi, double drift_tol = 1e-3);

struct BandEdge {
  double theta;
  bool degenerate;  // |Delta| - 2 touches zero without a sign change
};

/// Discriminant model of one period gamma: band set {|Delta_e| <= 2} with
/// bisected edges and tangency flags.
class PeriodicModel {
 public:
  PeriodicModel(std::vector<cplx> gamma, ArcSet bands, std::vector<BandEdge> edges);

  int p() const { return static_cast<int>(gamma_.size()); }
  const std::vector<cplx>& gamma() const { return gamma_; }
  const ArcSet& bands() const { return bands_; }
  const std::vector<BandEdge>& edges() const { return edges_; }

  /// Delta_e(e^{i theta}) with theta as the branch coordinate.
  cplx discriminant(double theta) const;
  /// tr Phi_e(z); branch-free ingredient for discriminant gaps.
  cplx block_trace(cplx z) const;

 private:
  std::vector<cplx> gamma_;
  Sequence period_seq_;
  ArcSet bands_;
  std::vector<BandEdge> edges_;
};

PeriodicModel periodic_bands(const std::vector<cplx>& gamma, int theta_samples = 8192);

/// Convergence-to-torus diagnostic: per window, the sup over the angle grid
/// and blocks in the window of |Delta_m - Delta_e|. Converges when the gaps
/// decrease across the schedule and the last one is below tol. On the unit
/// circle the branch prefactor is common to both discriminants, so the gap is
/// branch independent.
struct TorusConvergence {
  std::vector<std::pair<std::int64_t, std::int64_t>> windows;
  std::vector<double> sup_gap;
  bool converges = false;
};

TorusConvergence torus_convergence_check(
    const Sequence& seq, const PeriodicModel& model, int p,
    std::span<const std::pair<std::int64_t, std::int64_t>> windows, int theta_samples = 512,
    double tol = 1e-2);

}  // namespace opuc

#endif  // OPUC_PREDICTOR_HPP
