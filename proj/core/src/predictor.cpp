#include "opuc/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "opuc/errors.hpp"
#include "opuc/transfer.hpp"

namespace opuc {

namespace {

// max |tr Phi_m(e^{i theta})| over m in [lo, hi); on the circle this equals
// max |Delta_m| for any branch choice.
double window_max_trace(const Sequence& seq, int p, double theta, std::int64_t lo,
                        std::int64_t hi) {
  const cplx z = std::polar(1.0, theta);
  double best = 0.0;
  for (std::int64_t m = lo; m < hi; ++m) {
    best = std::max(best, std::abs(transfer_block(seq, m, p, z).phi.trace()));
  }
  return best;
}

}  // namespace

LProfile compute_l(const Sequence& seq, int p, std::span<const double> theta_grid,
                   std::int64_t window_lo, std::int64_t window_hi, double drift_tol) {
  if (window_hi <= window_lo) throw ConfigError("L window must be nonempty");
  LProfile profile;
  profile.theta.assign(theta_grid.begin(), theta_grid.end());
  profile.value.resize(theta_grid.size());
  profile.window_lo = window_lo;
  profile.window_hi = window_hi;
  const std::int64_t mid = window_lo + (window_hi - window_lo) / 2;
  double max_drift = 0.0;
  for (std::size_t i = 0; i < theta_grid.size(); ++i) {
    const double full = window_max_trace(seq, p, theta_grid[i], window_lo, window_hi);
    const double tail_half = window_max_trace(seq, p, theta_grid[i], mid, window_hi);
    profile.value[i] = full;
    max_drift = std::max(max_drift, full - tail_half);
  }
  profile.max_drift = max_drift;
  profile.window_warning = max_drift > drift_tol;
  return profile;
}

double l_at(const Sequence& seq, int p, double theta, std::int64_t window_lo,
            std::int64_t window_hi) {
  return window_max_trace(seq, p, theta, window_lo, window_hi);
}

namespace {

double bisect_level(const std::function<double(double)>& f, double level, double at_out,
                    double at_in) {
  // f(at_out) > level >= f(at_in); 60 halvings pin the angle to ~1e-18 rad.
  double out = at_out, in = at_in;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (out + in);
    if (f(mid) > level) {
      out = mid;
    } else {
      in = mid;
    }
  }
  return 0.5 * (out + in);
}

struct GridRun {
  std::size_t first, last;  // inclusive indices into the grid, cyclic
};

// Maximal cyclic runs of `true` in mask.
std::vector<GridRun> cyclic_runs(const std::vector<bool>& mask) {
  const std::size_t n = mask.size();
  std::vector<GridRun> runs;
  std::size_t start = 0;
  bool all = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (!mask[i]) {
      all = false;
      start = i;
      break;
    }
  }
  if (all) return {};  // caller handles the full-circle case separately
  std::size_t i = start;
  do {
    const std::size_t next = (i + 1) % n;
    if (!mask[i] && mask[next]) {
      GridRun run;
      run.first = next;
      std::size_t j = next;
      while (mask[(j + 1) % n]) j = (j + 1) % n;
      run.last = j;
      runs.push_back(run);
    }
    i = (i + 1) % n;
  } while (i != start);
  return runs;
}

}  // namespace

BandPrediction predict_from_l(const LProfile& profile, double tol_band,
                              const std::function<double(double)>& l_eval) {
  const std::size_t n = profile.theta.size();
  if (n < 4) throw ConfigError("prediction needs at least 4 grid points");
  BandPrediction out;
  if (profile.window_warning) {
    out.warnings.push_back("L window drift " + std::to_string(profile.max_drift) +
                           " above tolerance; enlarge the block window");
  }

  auto build = [&](bool lower) -> ArcSet {
    std::vector<bool> mask(n);
    bool any = false, all = true;
    for (std::size_t i = 0; i < n; ++i) {
      mask[i] = lower ? profile.value[i] < 2.0 - tol_band : profile.value[i] <= 2.0 + tol_band;
      any = any || mask[i];
      all = all && mask[i];
    }
    if (!any) return ArcSet{};
    if (all) return ArcSet::full_circle();

    std::vector<Arc> arcs;
    for (const GridRun& run : cyclic_runs(mask)) {
      const std::size_t before = (run.first + n - 1) % n;
      const std::size_t after = (run.last + 1) % n;
      double lo = profile.theta[run.first];
      double hi = profile.theta[run.last];
      if (hi < lo) hi += kTwoPi;  // run wraps through zero

      if (l_eval) {
        // Refine on L - 2 when the outside point brackets the band edge.
        auto refine = [&](std::size_t inside, std::size_t outside, double fallback) -> double {
          double t_in = profile.theta[inside];
          double t_out = profile.theta[outside];
          // Order the bracket locally around the edge (grid is cyclic).
          if (std::abs(t_out - t_in) > kPi) t_out += t_out < t_in ? kTwoPi : -kTwoPi;
          if (l_eval(t_out) > 2.0 && l_eval(t_in) <= 2.0) {
            return bisect_level(l_eval, 2.0, t_out, t_in);
          }
          out.warnings.push_back("band edge near theta = " + std::to_string(fallback) +
                                 " left at grid resolution (no sign change of L - 2)");
          return fallback;
        };
        const double refined_lo = refine(run.first, before, lo);
        double refined_hi = refine(run.last, after, hi);
        lo = refined_lo;
        hi = refined_hi;
        if (hi < lo) hi += kTwoPi;
      }
      arcs.push_back({lo, hi});
    }
    return ArcSet::from_arcs(std::move(arcs));
  };

  out.lower = build(true);
  out.upper = build(false);
  return out;
}

ArcSet predict_period1(double amplitude) {
  if (amplitude >= 1.0) return ArcSet{};  // no absolutely continuous part survives
  if (amplitude < 0.0) throw ConfigError("amplitude must be >= 0");
  const double edge = 2.0 * std::asin(amplitude);
  return ArcSet::single(edge, kTwoPi - edge);
}

ArcSet predict_period2(double a_plus, double a_minus) {
  const double ap = std::clamp(a_plus, -1.0, 1.0);
  const double am = std::clamp(a_minus, -1.0, 1.0);
  if (-ap >= am) return ArcSet{};
  const double theta1 = std::acos(am);        // inner edge, cos theta = a_minus
  const double theta2 = std::acos(-ap);       // outer edge, cos theta = -a_plus
  return ArcSet::from_arcs({{theta1, theta2}, {kTwoPi - theta2, kTwoPi - theta1}});
}

LimitConstants estimate_limit_constants(const Sequence& seq, int p, std::int64_t window_lo,
                                        std::int64_t window_hi, double drift_tol) {
  if (window_hi <= window_lo) throw ConfigError("constant estimation window must be nonempty");
  LimitConstants result;
  result.p = p;
  const std::int64_t mid = window_lo + (window_hi - window_lo) / 2;
  if (p == 1) {
    double full = 0.0, half = 0.0;
    for (std::int64_t n = window_lo; n < window_hi; ++n) {
      const double mod = std::abs(seq.alpha(n));
      full = std::max(full, mod);
      if (n >= mid) half = std::max(half, mod);
    }
    result.amplitude = full;
    result.drift = std::abs(full - half);
  } else if (p == 2) {
    double full_p = 1e300, full_m = 1e300, half_p = 1e300, half_m = 1e300;
    for (std::int64_t m = window_lo; m < window_hi; ++m) {
      const Coefficient even = seq.at(2 * m);
      const Coefficient odd = seq.at(2 * m + 1);
      const double prod = even.rho * odd.rho;
      const double cross = std::real(even.alpha * std::conj(odd.alpha));
      full_p = std::min(full_p, prod + cross);
      full_m = std::min(full_m, prod - cross);
      if (m >= mid) {
        half_p = std::min(half_p, prod + cross);
        half_m = std::min(half_m, prod - cross);
      }
    }
    result.a_plus = full_p;
    result.a_minus = full_m;
    result.drift = std::max(std::abs(full_p - half_p), std::abs(full_m - half_m));
  } else {
    throw ConfigError("limit constants are defined for p = 1 and p = 2 only");
  }
  result.unstable = result.drift > drift_tol;
  return result;
}

PeriodicModel::PeriodicModel(std::vector<cplx> gamma, ArcSet bands, std::vector<BandEdge> edges)
    : gamma_(std::move(gamma)),
      period_seq_(Sequence::periodic(gamma_)),
      bands_(std::move(bands)),
      edges_(std::move(edges)) {}

cplx PeriodicModel::discriminant(double theta) const {
  return discriminant_at(period_seq_, 0, p(), 1.0, theta);
}

cplx PeriodicModel::block_trace(cplx z) const {
  return transfer_block(period_seq_, 0, p(), z).phi.trace();
}

PeriodicModel periodic_bands(const std::vector<cplx>& gamma, int theta_samples) {
  if (gamma.empty()) throw ConfigError("periodic model needs a nonempty period");
  if (theta_samples < 16) throw ConfigError("periodic bands need at least 16 samples");
  const int p = static_cast<int>(gamma.size());
  const Sequence seq = Sequence::periodic(gamma);

  // g = |Delta_e| - 2 on the circle; bands are {g <= 0}.
  auto g = [&](double theta) {
    return std::abs(transfer_block(seq, 0, p, std::polar(1.0, theta)).phi.trace()) - 2.0;
  };
  const std::size_t n = static_cast<std::size_t>(theta_samples);
  std::vector<double> theta(n), val(n);
  for (std::size_t i = 0; i < n; ++i) {
    theta[i] = kTwoPi * static_cast<double>(i) / static_cast<double>(n);
    val[i] = g(theta[i]);
  }

  std::vector<bool> in_band(n);
  bool any = false, all = true;
  for (std::size_t i = 0; i < n; ++i) {
    in_band[i] = val[i] <= 0.0;
    any = any || in_band[i];
    all = all && in_band[i];
  }

  std::vector<BandEdge> edges;
  constexpr double kTangency = 1e-8;

  // Tangential closed gaps: local extrema of g approaching zero without a
  // sign change, from either side.
  for (std::size_t i = 0; i < n; ++i) {
    const double prev = val[(i + n - 1) % n], here = val[i], next = val[(i + 1) % n];
    const bool local_min = here < prev && here <= next;
    const bool local_max = here > prev && here >= next;
    if (local_min && here > 0.0 && here < kTangency) {
      edges.push_back({theta[i], true});
    } else if (local_max && here <= 0.0 && here > -kTangency) {
      edges.push_back({theta[i], true});
    }
  }

  if (!any) return PeriodicModel(gamma, ArcSet{}, std::move(edges));
  if (all) return PeriodicModel(gamma, ArcSet::full_circle(), std::move(edges));

  std::vector<Arc> arcs;
  std::size_t start = 0;
  while (in_band[start]) ++start;  // begin outside a band; `all` handled above
  std::size_t i = start;
  do {
    const std::size_t next = (i + 1) % n;
    if (!in_band[i] && in_band[next]) {
      // Rising edge: bisect from outside theta[i] to inside theta[next].
      double t_out = theta[i];
      double t_in = theta[next];
      if (t_in < t_out) t_in += kTwoPi;
      const double lo = bisect_level([&](double t) { return g(t); }, 0.0, t_out, t_in);
      // Walk to the end of this band.
      std::size_t j = next;
      while (in_band[(j + 1) % n]) j = (j + 1) % n;
      double t_in2 = theta[j];
      double t_out2 = theta[(j + 1) % n];
      if (t_out2 < t_in2) t_out2 += kTwoPi;
      const double hi = bisect_level([&](double t) { return g(t); }, 0.0, t_out2, t_in2);
      edges.push_back({wrap_angle(lo), false});
      edges.push_back({wrap_angle(hi), false});
      double arc_hi = hi;
      if (arc_hi < lo) arc_hi += kTwoPi;
      arcs.push_back({lo, arc_hi});
    }
    i = (i + 1) % n;
  } while (i != start);

  ArcSet bands = ArcSet::from_arcs(std::move(arcs));
  if (static_cast<int>(bands.arcs().size()) > p) {
    throw NumericError("band set has more than p components; refine theta_samples");
  }
  return PeriodicModel(gamma, std::move(bands), std::move(edges));
}

TorusConvergence torus_convergence_check(
    const Sequence& seq, const PeriodicModel& model, int p,
    std::span<const std::pair<std::int64_t, std::int64_t>> windows, int theta_samples,
    double tol) {
  if (model.p() != p) throw ConfigError("model period disagrees with p");
  TorusConvergence result;
  std::vector<double> theta(static_cast<std::size_t>(theta_samples));
  std::vector<cplx> model_trace(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    theta[i] = kTwoPi * static_cast<double>(i) / static_cast<double>(theta_samples);
    model_trace[i] = model.block_trace(std::polar(1.0, theta[i]));
  }
  for (const auto& [lo, hi] : windows) {
    double gap = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
      const cplx z = std::polar(1.0, theta[i]);
      for (std::int64_t m = lo; m < hi; ++m) {
        gap = std::max(gap,
                       std::abs(transfer_block(seq, m, p, z).phi.trace() - model_trace[i]));
      }
    }
    result.windows.emplace_back(lo, hi);
    result.sup_gap.push_back(gap);
  }
  bool monotone = true;
  for (std::size_t k = 1; k < result.sup_gap.size(); ++k) {
    monotone = monotone && result.sup_gap[k] <= result.sup_gap[k - 1] + 1e-12;
  }
  result.converges = monotone && !result.sup_gap.empty() && result.sup_gap.back() < tol;
  return result;
}

}  // namespace opuc
