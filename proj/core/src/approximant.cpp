#include "opuc/approximant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "opuc/errors.hpp"

namespace opuc {

Approximant::Approximant(Sequence base, std::int64_t cutoff, int p)
    : base_(std::move(base)), cutoff_(cutoff), p_(p) {
  if (cutoff < 0) throw ConfigError("approximant cutoff must be >= 0");
  if (p < 1) throw ConfigError("approximant needs p >= 1");
}

cplx Approximant::alpha(std::int64_t index) const { return at(index).alpha; }

Coefficient Approximant::at(std::int64_t index) const {
  if (index < 0) throw ConfigError("sequence index must be >= 0");
  const std::int64_t m = index / p_;
  const std::int64_t r = index % p_;
  return m < cutoff_ ? base_.at(index) : base_.at(cutoff_ * p_ + r);
}

Sequence Approximant::as_sequence() const {
  // Copy the pieces; the generator must stay valid past this object.
  const Sequence base = base_;
  const std::int64_t cutoff = cutoff_;
  const int p = p_;
  return Sequence::custom(
      [base, cutoff, p](std::int64_t index) {
        const std::int64_t m = index / p;
        const std::int64_t r = index % p;
        return m < cutoff ? base.alpha(index) : base.alpha(cutoff * p + r);
      },
      base_.cap_bound());
}

TildeBlock Approximant::block(std::int64_t m, double r, double theta,
                              bool with_derivative) const {
  return tilde_block_at(base_, std::min(m, cutoff_), p_, r, theta, with_derivative);
}

namespace {

Mat2 tilde_matrix(const TildeBlock& t) { return Mat2{t.a, t.b, t.c, t.d}; }

void require_stripped(const SignConstants& sc) {
  if (sc.m0 != 0) {
    throw RegionError("backward solve needs sign constants valid from block 0; strip " +
                      std::to_string(sc.m0) + " blocks first");
  }
}

}  // namespace

WeylTrace weyl_solution(const Approximant& approx, double r, double theta,
                        const SignConstants& sc) {
  require_stripped(sc);
  const std::int64_t n_cut = approx.cutoff();
  const bool on_circle = r == 1.0;

  std::vector<Mat2> blocks(static_cast<std::size_t>(n_cut));
  for (std::int64_t m = 0; m < n_cut; ++m) {
    blocks[static_cast<std::size_t>(m)] = tilde_matrix(approx.block(m, r, theta));
  }
  const TildeBlock last = approx.block(n_cut, r, theta);
  const EigenFrame frame = eigen_frame(last, sc);

  WeylTrace trace;
  trace.z = std::polar(r, theta);
  trace.seed = Vec2{frame.lambda - last.d, last.c};
  trace.u.assign(static_cast<std::size_t>(n_cut) + 1, Vec2{});
  trace.u[static_cast<std::size_t>(n_cut)] = trace.seed;
  for (std::int64_t n = n_cut - 1; n >= 0; --n) {
    trace.u[static_cast<std::size_t>(n)] =
        blocks[static_cast<std::size_t>(n)].adjugate() * trace.u[static_cast<std::size_t>(n + 1)];
  }

  if (std::abs(trace.u[0].y) < 1e-300) {
    throw NumericError("(u_0)_2 vanished; z is outside the validated region");
  }

  if (on_circle) {
    auto wronskian = [](const Vec2& v) { return 2.0 * std::real(v.x * std::conj(v.y)); };
    const double ref = wronskian(trace.u[static_cast<std::size_t>(n_cut)]);
    const double scale = std::max(std::abs(ref), 1e-300);
    for (const Vec2& v : trace.u) {
      trace.wronskian_drift = std::max(trace.wronskian_drift, std::abs(wronskian(v) - ref) / scale);
    }
  }

  Vec2 forward = trace.u[0];
  for (std::int64_t n = 0; n < n_cut; ++n) {
    forward = blocks[static_cast<std::size_t>(n)] * forward;
  }
  const double seed_norm = std::max(trace.seed.norm(), 1e-300);
  trace.forward_residual = (forward - trace.seed).norm() / seed_norm;
  return trace;
}

DensityProfile ac_density(const Approximant& approx, std::span<const double> theta_grid,
                          const SignConstants& sc) {
  DensityProfile profile;
  profile.arc = sc.arc;
  profile.cutoff = approx.cutoff();
  profile.theta.assign(theta_grid.begin(), theta_grid.end());
  profile.w.resize(theta_grid.size());

  for (std::size_t i = 0; i < theta_grid.size(); ++i) {
    const double theta = theta_grid[i];
    const WeylTrace trace = weyl_solution(approx, 1.0, theta, sc);
    const TildeBlock last = approx.block(approx.cutoff(), 1.0, theta);
    const EigenFrame frame = eigen_frame(last, sc);
    const cplx value = -cplx{0.0, 1.0} * last.c * std::imag(frame.lambda) /
                       std::norm(trace.u[0].y);
    const double w = std::real(value);
    if (std::abs(std::imag(value)) > 1e-9 * std::max(1.0, std::abs(w))) {
      throw NumericError("density formula returned a non-real value at theta = " +
                         std::to_string(theta));
    }
    if (w < -1e-9) {
      throw NumericError("negative density " + std::to_string(w) + " at theta = " +
                         std::to_string(theta) + "; invalid region or s != t");
    }
    profile.w[i] = std::max(w, 0.0);
  }
  return profile;
}

EntropyResult entropy_integral(const DensityProfile& profile, EntropyWeight weight) {
  const std::size_t n = profile.theta.size();
  if (n < 2) throw ConfigError("entropy integral needs at least 2 grid points");
  constexpr double kFloor = 1e-300;

  auto wfun = [&](double theta) {
    switch (weight) {
      case EntropyWeight::One: return 1.0;
      case EntropyWeight::OneMinusCos: return 1.0 - std::cos(theta);
      case EntropyWeight::OneMinusCosSq: {
        const double c = std::cos(theta);
        return 1.0 - c * c;
      }
    }
    return 1.0;
  };

  std::size_t clipped = 0;
  std::vector<double> integrand(n);
  for (std::size_t i = 0; i < n; ++i) {
    double w = profile.w[i];
    if (w < kFloor) {
      w = kFloor;
      ++clipped;
    }
    integrand[i] = wfun(profile.theta[i]) * std::log(w);
  }

  KahanSum sum;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double dt = profile.theta[i + 1] - profile.theta[i];
    sum.add(0.5 * dt * (integrand[i] + integrand[i + 1]));
  }

  EntropyResult result;
  result.value = sum.value() / kTwoPi;
  result.clipped_fraction = static_cast<double>(clipped) / static_cast<double>(n);
  result.unreliable = result.clipped_fraction > 0.05;
  return result;
}

ProductDiagnostics product_diagnostics(const Approximant& approx, double r, double theta,
                                       const SignConstants& sc) {
  require_stripped(sc);
  const std::int64_t n_cut = approx.cutoff();
  ProductDiagnostics diag;

  std::vector<EigenFrame> frames(static_cast<std::size_t>(n_cut) + 1);
  for (std::int64_t m = 0; m <= n_cut; ++m) {
    frames[static_cast<std::size_t>(m)] = eigen_frame(approx.block(m, r, theta), sc);
  }

  diag.kappa.reserve(static_cast<std::size_t>(n_cut));
  diag.w.reserve(static_cast<std::size_t>(n_cut));
  diag.w_norm.reserve(static_cast<std::size_t>(n_cut));
  diag.w_norm_sq_prefix.reserve(static_cast<std::size_t>(n_cut));
  KahanSum norm_sq;
  for (std::int64_t m = 0; m < n_cut; ++m) {
    const Perturbation pert = perturbation_matrix(frames[static_cast<std::size_t>(m)],
                                                  frames[static_cast<std::size_t>(m + 1)]);
    diag.kappa.push_back(frames[static_cast<std::size_t>(m)].lambda_inv);
    diag.w.push_back(pert.w);
    diag.w_norm.push_back(pert.norm);
    norm_sq.add(pert.norm * pert.norm);
    diag.w_norm_sq_prefix.push_back(norm_sq.value());
  }

  const WeylTrace trace = weyl_solution(approx, r, theta, sc);
  diag.backward = frames[0].u_inv * trace.u[0];

  // Normalized product: apply Lambda_j^{-1}(I + W_j) innermost (j = N-1)
  // first, dividing each step by lambda_j^{-1}(1 + e_j); the scalar is
  // accumulated as a compensated sum of logs.
  Vec2 vec{1.0, 0.0};
  KahanSum log_mod, log_arg;
  bool direct_safe = true;
  Vec2 direct{1.0, 0.0};
  diag.psi.reserve(static_cast<std::size_t>(n_cut));
  for (std::int64_t j = n_cut - 1; j >= 0; --j) {
    const Mat2& w = diag.w[static_cast<std::size_t>(j)];
    const cplx lambda_inv = diag.kappa[static_cast<std::size_t>(j)];
    const cplx lambda = frames[static_cast<std::size_t>(j)].lambda;
    const cplx scalar = lambda_inv * (1.0 + w.a);
    if (scalar == cplx{0.0}) throw NumericError("vanishing diagonal factor in the product");

    Vec2 step = (Mat2::identity() + w) * vec;
    step = Vec2{lambda_inv * step.x, lambda * step.y};
    const cplx inv_scalar = 1.0 / scalar;
    vec = Vec2{step.x * inv_scalar, step.y * inv_scalar};
    diag.psi.push_back(vec);
    log_mod.add(std::log(std::abs(scalar)));
    log_arg.add(std::arg(scalar));

    if (direct_safe) {
      Vec2 d = (Mat2::identity() + w) * direct;
      direct = Vec2{lambda_inv * d.x, lambda * d.y};
      if (!(direct.norm() < 1e250) || direct.norm() < 1e-250) direct_safe = false;
    }
  }
  diag.normalized = vec;
  diag.log_scale = cplx{log_mod.value(), log_arg.value()};

  const double backward_norm = std::max(diag.backward.norm(), 1e-300);
  if (direct_safe) {
    diag.direct_residual = (direct - diag.backward).norm() / backward_norm;
  } else {
    diag.direct_residual = std::numeric_limits<double>::quiet_NaN();
  }
  if (std::abs(diag.log_scale.real()) > 700.0) {
    throw NumericError("product scale exp(" + std::to_string(diag.log_scale.real()) +
                       ") out of double range; cutoff too large for this z");
  }
  const cplx scale = std::exp(diag.log_scale);
  diag.factored_residual = (diag.normalized * scale - diag.backward).norm() / backward_norm;
  diag.log_remainder = -std::log(std::abs(diag.normalized.x + diag.normalized.y));
  return diag;
}

RemainderReport remainder_report(const Sequence& base, int p,
                                 std::span<const std::int64_t> cutoffs, const SignConstants& sc,
                                 int theta_samples, int radial_samples) {
  if (theta_samples < 2 || radial_samples < 2) {
    throw ConfigError("remainder report needs at least 2 samples per direction");
  }
  RemainderReport report;
  report.min_scaled_interior = 1e300;
  report.max_deep_value = -1e300;

  std::vector<double> thetas(static_cast<std::size_t>(theta_samples));
  const double span = sc.arc.hi - sc.arc.lo;
  for (int i = 0; i < theta_samples; ++i) {
    thetas[static_cast<std::size_t>(i)] =
        sc.arc.lo + span * static_cast<double>(i) / static_cast<double>(theta_samples - 1);
  }

  for (const std::int64_t n_cut : cutoffs) {
    const Approximant approx(base, n_cut, p);
    const DensityProfile density = ac_density(approx, thetas, sc);

    double mismatch = 0.0;
    std::vector<double> f_plus(thetas.size());
    for (std::size_t i = 0; i < thetas.size(); ++i) {
      const ProductDiagnostics diag = product_diagnostics(approx, 1.0, thetas[i], sc);
      const double f = diag.log_remainder;
      f_plus[i] = std::max(f, 0.0);
      const double log_w = std::log(std::max(density.w[i], 1e-300));
      mismatch = std::max(mismatch, std::abs(log_w - 2.0 * f));
    }
    KahanSum plus_int;
    for (std::size_t i = 0; i + 1 < thetas.size(); ++i) {
      plus_int.add(0.5 * (thetas[i + 1] - thetas[i]) * (f_plus[i] + f_plus[i + 1]));
    }
    report.cutoffs.push_back(n_cut);
    report.max_mismatch_per_cutoff.push_back(mismatch);
    report.positive_part_integral.push_back(plus_int.value() / kTwoPi);
    report.max_mismatch = std::max(report.max_mismatch, mismatch);
    report.max_positive_part = std::max(report.max_positive_part, plus_int.value() / kTwoPi);

    for (int k = 1; k <= radial_samples; ++k) {
      const double depth = sc.epsilon * static_cast<double>(k) / static_cast<double>(radial_samples);
      const double r = 1.0 - depth;
      for (std::size_t i = 0; i < thetas.size(); ++i) {
        const ProductDiagnostics diag = product_diagnostics(approx, r, thetas[i], sc);
        const double f = diag.log_remainder;
        report.min_scaled_interior = std::min(report.min_scaled_interior, f * depth);
        if (depth > 0.5 * sc.epsilon) {
          report.max_deep_value = std::max(report.max_deep_value, f);
        }
      }
    }
  }
  return report;
}

StrippingResult choose_stripping_offset(const Sequence& seq, int p, double delta,
                                        const SignConstants& sc, std::int64_t budget) {
  if (!(delta > 0.0)) throw ConfigError("stripping tolerance must be positive");
  constexpr int kAngleSamples = 5;
  std::vector<double> thetas(kAngleSamples);
  const double span = sc.arc.hi - sc.arc.lo;
  for (int i = 0; i < kAngleSamples; ++i) {
    thetas[static_cast<std::size_t>(i)] =
        sc.arc.lo + span * (static_cast<double>(i) + 0.5) / static_cast<double>(kAngleSamples);
  }

  const std::int64_t lo = sc.m0;
  const std::int64_t hi = lo + budget;
  std::vector<double> norm_sq(static_cast<std::size_t>(budget), 0.0);
  for (double theta : thetas) {
    EigenFrame prev = eigen_frame(tilde_block_at(seq, lo, p, 1.0, theta), sc);
    for (std::int64_t m = lo; m < hi; ++m) {
      const EigenFrame next = eigen_frame(tilde_block_at(seq, m + 1, p, 1.0, theta), sc);
      const Perturbation pert = perturbation_matrix(prev, next);
      auto& slot = norm_sq[static_cast<std::size_t>(m - lo)];
      slot = std::max(slot, pert.norm * pert.norm);
      prev = next;
    }
  }

  // Suffix sums; the smallest block offset whose tail dips below delta wins.
  std::vector<double> suffix(norm_sq.size() + 1, 0.0);
  for (std::size_t i = norm_sq.size(); i-- > 0;) {
    suffix[i] = suffix[i + 1] + norm_sq[i];
  }
  for (std::size_t i = 0; i < suffix.size(); ++i) {
    if (suffix[i] < delta) {
      // Only offsets within the budget are trustworthy estimates.
      if (i == norm_sq.size()) break;
      return {(lo + static_cast<std::int64_t>(i)) * p, suffix[i]};
    }
  }
  throw NumericError("tail sum did not drop below delta within the exploration budget of " +
                     std::to_string(budget) + " blocks");
}

}  // namespace opuc
