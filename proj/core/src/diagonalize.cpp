#include "opuc/diagonalize.hpp"

#include <algorithm>
#include <cmath>

#include "opuc/errors.hpp"

namespace opuc {

EigenvaluePair lambda_pair(cplx delta) {
  if (!(std::abs(delta) < 2.0)) {
    throw DomainError("eigenvalue split needs |Delta| < 2, got |Delta| = " +
                      std::to_string(std::abs(delta)));
  }
  const cplx root = std::sqrt(cplx{4.0} - delta * delta);
  return {0.5 * (delta + cplx{0.0, 1.0} * root), 0.5 * (delta - cplx{0.0, 1.0} * root)};
}

namespace {

struct BlockScan {
  int sign_s = 0, sign_t = 0;   // 0 = inconsistent across the grid
  double band_margin = 0.0;     // min (2 - |Delta|)
  double s_margin = 0.0;        // min |Im(z Delta')|
  double t_margin = 0.0;        // min |Im c|
  double max_c = 0.0;
  bool circle_consistent = false;  // signs consistent on the r = 1 ring alone
};

int sign_of(double v) { return v > 0.0 ? +1 : (v < 0.0 ? -1 : 0); }

BlockScan scan_block(const Sequence& seq, int p, std::int64_t m, const std::vector<double>& thetas,
                     const std::vector<double>& radii) {
  BlockScan scan;
  scan.band_margin = 1e300;
  scan.s_margin = 1e300;
  scan.t_margin = 1e300;
  bool first = true;
  bool circle_first = true;
  int circle_sign_s = 0, circle_sign_t = 0;
  bool circle_ok = true;
  for (double r : radii) {
    const bool on_circle = r == 1.0;
    for (double theta : thetas) {
      const TildeBlock t = tilde_block_at(seq, m, p, r, theta, true);
      const cplx z = std::polar(r, theta);
      const double im_zdp = std::imag(z * *t.delta_prime);
      const double im_c = std::imag(t.c);
      const int ss = sign_of(im_zdp);
      const int st = sign_of(im_c);
      scan.band_margin = std::min(scan.band_margin, 2.0 - std::abs(t.delta));
      scan.s_margin = std::min(scan.s_margin, std::abs(im_zdp));
      scan.t_margin = std::min(scan.t_margin, std::abs(im_c));
      scan.max_c = std::max(scan.max_c, std::abs(t.c));
      if (first) {
        scan.sign_s = ss;
        scan.sign_t = st;
        first = false;
      } else {
        if (ss != scan.sign_s) scan.sign_s = 0;
        if (st != scan.sign_t) scan.sign_t = 0;
      }
      if (on_circle) {
        if (circle_first) {
          circle_sign_s = ss;
          circle_sign_t = st;
          circle_first = false;
        } else if (ss != circle_sign_s || st != circle_sign_t) {
          circle_ok = false;
        }
      }
    }
  }
  scan.circle_consistent = circle_ok && circle_sign_s != 0 && circle_sign_t != 0;
  return scan;
}

}  // namespace

SignConstants detect_sign_constants(const Sequence& seq, int p, Arc arc, int theta_samples,
                                    std::int64_t window_lo, std::int64_t window_hi,
                                    double epsilon, std::int64_t confirm) {
  if (theta_samples < 2) throw ConfigError("sign detection needs at least 2 angle samples");
  if (window_hi <= window_lo) throw ConfigError("sign detection window must be nonempty");
  if (!(epsilon > 0.0) || epsilon >= 1.0) throw ConfigError("epsilon must lie in (0, 1)");
  const std::int64_t confirm_eff = std::min(confirm, window_hi - window_lo);

  std::vector<double> thetas(static_cast<std::size_t>(theta_samples));
  const double span = arc.hi - arc.lo;
  for (int i = 0; i < theta_samples; ++i) {
    thetas[static_cast<std::size_t>(i)] =
        arc.lo + span * static_cast<double>(i) / static_cast<double>(theta_samples - 1);
  }

  std::string last_reason = "no block window scanned";
  for (int halving = 0; halving < 7; ++halving) {
    const double eps = epsilon / static_cast<double>(1 << halving);
    const std::vector<double> radii{1.0, 1.0 - 0.5 * eps, 1.0 - eps};

    std::vector<BlockScan> scans;
    scans.reserve(static_cast<std::size_t>(window_hi - window_lo));
    for (std::int64_t m = window_lo; m < window_hi; ++m) {
      scans.push_back(scan_block(seq, p, m, thetas, radii));
    }

    auto block_ok = [&](const BlockScan& s) {
      return s.sign_s != 0 && s.sign_t != 0 && s.band_margin > 0.0 && s.s_margin > 0.0 &&
             s.t_margin > 0.0;
    };

    // Earliest m0 whose confirmation window has constant signs and margins.
    bool circle_only_failure = false;
    for (std::int64_t m0 = window_lo; m0 + confirm_eff <= window_hi; ++m0) {
      const auto& head = scans[static_cast<std::size_t>(m0 - window_lo)];
      if (!block_ok(head)) {
        if (head.circle_consistent) circle_only_failure = true;
        continue;
      }
      bool confirmed = true;
      for (std::int64_t m = m0; m < window_hi; ++m) {
        const auto& s = scans[static_cast<std::size_t>(m - window_lo)];
        if (!block_ok(s) || s.sign_s != head.sign_s || s.sign_t != head.sign_t) {
          if (s.circle_consistent) circle_only_failure = true;
          confirmed = false;
          break;
        }
      }
      if (!confirmed) continue;

      double margin = 1e300;
      double max_c = 0.0;
      for (std::int64_t m = m0; m < window_hi; ++m) {
        const auto& s = scans[static_cast<std::size_t>(m - window_lo)];
        margin = std::min({margin, s.band_margin, s.s_margin, s.t_margin});
        max_c = std::max(max_c, s.max_c);
      }
      margin = std::min(margin, 1.0 / max_c);
      if (!(margin > 0.0)) {
        last_reason = "margins collapsed to zero";
        continue;
      }
      if (head.sign_s != head.sign_t) {
        throw RegionError(
            "detected s != t on the arc; this contradicts density positivity and "
            "indicates an invalid arc or a bug (s = " + std::to_string(head.sign_s) +
            ", t = " + std::to_string(head.sign_t) + ")");
      }
      SignConstants sc;
      sc.s = head.sign_s;
      sc.t = head.sign_t;
      sc.m0 = m0;
      sc.margin = margin;
      sc.epsilon = eps;
      sc.arc = arc;
      sc.window_hi = window_hi;
      return sc;
    }

    if (!circle_only_failure) {
      throw RegionError(
          "sign constants not constant over the window on the circle itself; the arc may "
          "reach a band edge (max L too close to 2) or the window starts too early");
    }
    last_reason = "signs constant on the circle but not at depth epsilon = " +
                  std::to_string(eps);
  }
  throw RegionError("annulus depth exhausted: " + last_reason);
}

EigenFrame eigen_frame(const TildeBlock& tilde, const SignConstants& sc) {
  // Preconditions validated against half the detected margin; the margin is a
  // minimum over scanned samples and intermediate z may dip slightly below it.
  const double guard = 0.5 * sc.margin;
  if (!(std::abs(tilde.delta) <= 2.0 - guard)) {
    throw RegionError("block out of validated band: |Delta| = " +
                      std::to_string(std::abs(tilde.delta)));
  }
  if (!(std::abs(tilde.c) >= guard)) {
    throw RegionError("corner entry too small for a stable frame: |c| = " +
                      std::to_string(std::abs(tilde.c)));
  }
  const EigenvaluePair pair = lambda_pair(tilde.delta);
  EigenFrame f;
  f.lambda = sc.s == +1 ? pair.plus : pair.minus;
  f.lambda_inv = 1.0 / f.lambda;
  f.u = Mat2{f.lambda - tilde.d, f.lambda_inv - tilde.d, tilde.c, tilde.c};
  f.det_u = (f.lambda - f.lambda_inv) * tilde.c;
  const cplx inv_det = 1.0 / f.det_u;
  f.u_inv = Mat2{tilde.c * inv_det, (tilde.d - f.lambda_inv) * inv_det,
                 -tilde.c * inv_det, (f.lambda - tilde.d) * inv_det};
  return f;
}

Perturbation perturbation_matrix(const EigenFrame& frame_m, const EigenFrame& frame_m1) {
  const Mat2 w = frame_m.u_inv * frame_m1.u - Mat2::identity();
  return {w, w.spectral_norm()};
}

IncrementRatioScan scan_increment_ratios(std::span<const cplx> eps) {
  if (eps.size() < 2) throw ConfigError("increment scan needs at least 2 values");
  const std::size_t terms = eps.size() - 1;
  double max_mod = 0.0, min_im = 1e300;
  for (std::size_t n = 0; n < eps.size(); ++n) {
    if (!(std::imag(eps[n]) > 0.0)) {
      throw ConfigError("increment scan requires Im eps > 0; violated at index " +
                        std::to_string(n));
    }
    max_mod = std::max(max_mod, std::abs(eps[n]));
    min_im = std::min(min_im, std::imag(eps[n]));
  }

  std::vector<cplx> prefix(terms + 1, cplx{0.0});
  double sq_var = 0.0;
  for (std::size_t n = 0; n < terms; ++n) {
    const cplx diff = eps[n + 1] - eps[n];
    prefix[n + 1] = prefix[n] + diff / eps[n];
    sq_var += std::norm(diff);
  }

  IncrementRatioScan scan;
  scan.total = prefix[terms];
  scan.data_bound = std::max(max_mod, 1.0 / min_im);
  scan.squared_variation = sq_var;
  for (std::size_t k = 0; k < terms; ++k) {
    for (std::size_t l = k; l < terms; ++l) {
      const double mod = std::abs(prefix[l + 1] - prefix[k]);
      if (mod > scan.max_abs) {
        scan.max_abs = mod;
        scan.argmax_lo = static_cast<std::int64_t>(k);
        scan.argmax_hi = static_cast<std::int64_t>(l);
      }
    }
  }
  return scan;
}

}  // namespace opuc
