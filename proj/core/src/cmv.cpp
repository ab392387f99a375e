#include "opuc/cmv.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "opuc/errors.hpp"

namespace opuc {

double FiniteCMV::unitarity_residual() const {
  return (matrix.adjoint() * matrix - Eigen::MatrixXcd::Identity(n, n)).norm();
}

FiniteCMV build_cmv(const Sequence& seq, int n, cplx beta) {
  if (n < 2) throw ConfigError("CMV truncation needs n >= 2");
  if (std::abs(std::abs(beta) - 1.0) > 1e-12) {
    throw ConfigError("boundary coefficient must be unimodular");
  }
  beta /= std::abs(beta);

  // alpha_j for j < n-1 from the sequence, alpha_{n-1} = beta (rho = 0), so
  // the final 2x2 rotation degenerates to the 1x1 entry conj(beta) and the
  // matrix decouples exactly at size n.
  auto place = [&](Eigen::MatrixXcd& target, int j) {
    if (j == n - 1) {
      target(j, j) = std::conj(beta);
      return;
    }
    const Coefficient c = seq.at(j);
    target(j, j) = std::conj(c.alpha);
    target(j, j + 1) = c.rho;
    target(j + 1, j) = c.rho;
    target(j + 1, j + 1) = -c.alpha;
  };

  Eigen::MatrixXcd l_factor = Eigen::MatrixXcd::Zero(n, n);
  Eigen::MatrixXcd m_factor = Eigen::MatrixXcd::Zero(n, n);
  for (int j = 0; j < n; j += 2) place(l_factor, j);
  m_factor(0, 0) = 1.0;
  for (int j = 1; j < n; j += 2) place(m_factor, j);

  FiniteCMV cmv;
  cmv.n = n;
  cmv.beta = beta;
  cmv.matrix = l_factor * m_factor;
  return cmv;
}

SpectralSample spectral_measure(const FiniteCMV& cmv) {
  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(cmv.matrix, true);
  if (schur.info() != Eigen::Success) throw NumericError("Schur decomposition did not converge");
  const auto& t = schur.matrixT();
  const auto& q = schur.matrixU();
  const int n = cmv.n;

  SpectralSample sample;
  sample.theta.resize(n);
  sample.weight.resize(n);
  double unimod = 0.0;
  for (int j = 0; j < n; ++j) {
    unimod = std::max(unimod, std::abs(std::abs(t(j, j)) - 1.0));
  }
  // For a unitary matrix the Schur form is diagonal; the strictly upper part
  // is pure rounding and its size is part of the solve residual.
  double off = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) off = std::max(off, std::abs(t(i, j)));
  }
  sample.residual = std::max(unimod, off);

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> angles(n);
  for (int j = 0; j < n; ++j) angles[j] = wrap_angle(std::arg(t(j, j)));
  std::sort(order.begin(), order.end(), [&](int x, int y) { return angles[x] < angles[y]; });

  double total = 0.0;
  for (int j = 0; j < n; ++j) {
    sample.theta[j] = angles[order[j]];
    sample.weight[j] = std::norm(q(0, order[j]));
    total += sample.weight[j];
  }
  sample.weight_sum = total;
  return sample;
}

namespace {

std::vector<Coefficient> cache_coefficients(const Sequence& seq, int count) {
  std::vector<Coefficient> coeffs;
  coeffs.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) coeffs.push_back(seq.at(k));
  return coeffs;
}

// (phi_{n-1}, phi*_{n-1}) at z from cached coefficients.
Vec2 last_polynomials(const std::vector<Coefficient>& coeffs, cplx z) {
  Vec2 v{1.0, 1.0};
  for (const Coefficient& c : coeffs) {
    const double inv_rho = 1.0 / c.rho;
    const cplx zphi = z * v.x;
    v = Vec2{(zphi - std::conj(c.alpha) * v.y) * inv_rho,
             (-c.alpha * zphi + v.y) * inv_rho};
  }
  return v;
}

// The boundary polynomial z phi_{n-1}(z) - conj(beta) phi*_{n-1}(z) has all
// n zeros on the unit circle, so after removing the central phase e^{i n
// theta / 2} it is real up to one global constant phase. Roots are then
// simple sign changes of a real function; no phase winding is tracked.
cplx boundary_raw(const std::vector<Coefficient>& coeffs, int n, cplx target, double theta) {
  const cplx z = std::polar(1.0, theta);
  const Vec2 v = last_polynomials(coeffs, z);
  return std::polar(1.0, -0.5 * n * theta) * (z * v.x - target * v.y);
}

// Christoffel sum sum_{k<n} |phi_k(z)|^2 at an eigenvalue angle. The plain
// forward recursion is hyperbolically unstable at gap eigenvalues (the true
// eigen-solution decays, rounding injects the growing mode), so the
// trajectory is assembled from a forward sweep and a backward sweep seeded
// with the boundary relation (phi, phi*) ~ (conj(beta), z), spliced where the
// product of their norms is smallest. Norms are carried in log form.
double christoffel_sum(const std::vector<Coefficient>& coeffs, cplx z, cplx beta) {
  const int n = static_cast<int>(coeffs.size()) + 1;
  std::vector<Vec2> f_unit(static_cast<std::size_t>(n)), b_unit(static_cast<std::size_t>(n));
  std::vector<double> f_log(static_cast<std::size_t>(n)), b_log(static_cast<std::size_t>(n));

  Vec2 f{1.0, 1.0};
  double fl = std::log(f.norm());
  f_unit[0] = f * (1.0 / f.norm());
  f_log[0] = fl;
  for (int k = 0; k + 1 < n; ++k) {
    const Coefficient& c = coeffs[static_cast<std::size_t>(k)];
    const double inv_rho = 1.0 / c.rho;
    const Vec2& u = f_unit[static_cast<std::size_t>(k)];
    const cplx zphi = z * u.x;
    Vec2 next{(zphi - std::conj(c.alpha) * u.y) * inv_rho,
              (-c.alpha * zphi + u.y) * inv_rho};
    const double norm = next.norm();
    f_unit[static_cast<std::size_t>(k + 1)] = next * (1.0 / norm);
    f_log[static_cast<std::size_t>(k + 1)] = f_log[static_cast<std::size_t>(k)] + std::log(norm);
  }

  Vec2 b{std::conj(beta), z};
  b_unit[static_cast<std::size_t>(n - 1)] = b * (1.0 / b.norm());
  b_log[static_cast<std::size_t>(n - 1)] = std::log(b.norm());
  for (int k = n - 2; k >= 0; --k) {
    const Coefficient& c = coeffs[static_cast<std::size_t>(k)];
    // A(alpha, z)^{-1} = (1 / (z rho)) [[1, conj(alpha)], [alpha z, z]]
    const Vec2& u = b_unit[static_cast<std::size_t>(k + 1)];
    const cplx scale = 1.0 / (z * c.rho);
    Vec2 prev{(u.x + std::conj(c.alpha) * u.y) * scale, (c.alpha * z * u.x + z * u.y) * scale};
    const double norm = prev.norm();
    b_unit[static_cast<std::size_t>(k)] = prev * (1.0 / norm);
    b_log[static_cast<std::size_t>(k)] = b_log[static_cast<std::size_t>(k + 1)] + std::log(norm);
  }

  // Splice at the bottom of the forward envelope: below it the forward sweep
  // still follows the decaying true solution, above it the injected growing
  // mode dominates and the backward sweep takes over.
  int split = 0;
  double best = f_log[0];
  for (int k = 1; k < n; ++k) {
    if (f_log[static_cast<std::size_t>(k)] < best) {
      best = f_log[static_cast<std::size_t>(k)];
      split = k;
    }
  }

  // Scalar c with c * B_split = F_split, via the dominant component.
  const Vec2& fu = f_unit[static_cast<std::size_t>(split)];
  const Vec2& bu = b_unit[static_cast<std::size_t>(split)];
  const cplx ratio = std::abs(bu.x) >= std::abs(bu.y) ? fu.x / bu.x : fu.y / bu.y;
  const double match_log = f_log[static_cast<std::size_t>(split)] -
                           b_log[static_cast<std::size_t>(split)] + std::log(std::abs(ratio));

  // The forward seed has phi-component exactly 1, so the merged trajectory is
  // already normalized to phi_0 = 1.
  double sum = 0.0;
  for (int k = 0; k <= split; ++k) {
    const double lg = f_log[static_cast<std::size_t>(k)];
    if (2.0 * lg > 700.0) return std::numeric_limits<double>::infinity();
    const double mag = std::exp(lg) * std::abs(f_unit[static_cast<std::size_t>(k)].x);
    sum += mag * mag;
  }
  for (int k = split + 1; k < n; ++k) {
    const double lg = b_log[static_cast<std::size_t>(k)] + match_log;
    if (2.0 * lg > 700.0) return std::numeric_limits<double>::infinity();
    const double mag = std::exp(lg) * std::abs(b_unit[static_cast<std::size_t>(k)].x);
    sum += mag * mag;
  }
  return sum;
}

double circular_gap(double a, double b) {
  const double d = std::abs(wrap_angle(a) - wrap_angle(b));
  return std::min(d, kTwoPi - d);
}

}  // namespace

SpectralSample spectral_measure_quadrature(const Sequence& seq, int n, cplx beta) {
  if (n < 2) throw ConfigError("CMV truncation needs n >= 2");
  if (std::abs(std::abs(beta) - 1.0) > 1e-12) {
    throw ConfigError("boundary coefficient must be unimodular");
  }
  beta /= std::abs(beta);
  const cplx target = std::conj(beta);
  const std::vector<Coefficient> coeffs = cache_coefficients(seq, n - 1);

  std::vector<double> theta, raw_real;
  double phase_residual = 0.0;
  int grid = 8 * n;
  constexpr int kMaxGrid = 1 << 17;
  cplx align{1.0};
  while (true) {
    theta.resize(static_cast<std::size_t>(grid) + 1);
    std::vector<cplx> raw(theta.size());
    double best = 0.0;
    std::size_t best_at = 0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
      theta[i] = kTwoPi * static_cast<double>(i) / static_cast<double>(grid);
      raw[i] = boundary_raw(coeffs, n, target, theta[i]);
      if (std::abs(raw[i]) > best) {
        best = std::abs(raw[i]);
        best_at = i;
      }
    }
    if (!(best > 0.0)) throw NumericError("boundary polynomial vanished identically");
    align = std::polar(1.0, -std::arg(raw[best_at]));
    raw_real.resize(raw.size());
    double worst_imag = 0.0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      const cplx v = align * raw[i];
      raw_real[i] = v.real();
      worst_imag = std::max(worst_imag, std::abs(v.imag()));
    }
    phase_residual = worst_imag / best;

    int crossings = 0;
    for (std::size_t i = 0; i + 1 < raw_real.size(); ++i) {
      if (raw_real[i] == 0.0 || raw_real[i] * raw_real[i + 1] < 0.0) ++crossings;
    }
    if (crossings >= n || grid >= kMaxGrid) {
      if (crossings < n) {
        throw NumericError("found " + std::to_string(crossings) + " of " + std::to_string(n) +
                           " eigenvalue brackets; eigenvalues too clustered for the "
                           "quadrature route, use the dense route");
      }
      break;
    }
    grid *= 2;  // clustered roots: refine the scan
  }

  auto real_value = [&](double t) { return (align * boundary_raw(coeffs, n, target, t)).real(); };

  SpectralSample sample;
  sample.theta.reserve(static_cast<std::size_t>(n));
  sample.weight.reserve(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i + 1 < raw_real.size(); ++i) {
    double root;
    if (raw_real[i] == 0.0) {
      root = theta[i];
    } else if (raw_real[i] * raw_real[i + 1] < 0.0) {
      double lo = theta[i], hi = theta[i + 1];
      const bool lo_positive = raw_real[i] > 0.0;
      for (int it = 0; it < 47; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((real_value(mid) > 0.0) == lo_positive) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      root = 0.5 * (lo + hi);
    } else {
      continue;
    }
    sample.theta.push_back(wrap_angle(root));
    const double k_sum = christoffel_sum(coeffs, std::polar(1.0, root), beta);
    sample.weight.push_back(std::isfinite(k_sum) ? 1.0 / k_sum : 0.0);
  }
  // An eigenvalue at theta = 0 is seen at both ends of the closed scan.
  if (static_cast<int>(sample.theta.size()) == n + 1 &&
      circular_gap(sample.theta.front(), sample.theta.back()) < 1e-9) {
    sample.theta.pop_back();
    sample.weight.pop_back();
  }
  if (static_cast<int>(sample.theta.size()) != n) {
    throw NumericError("located " + std::to_string(sample.theta.size()) + " of " +
                       std::to_string(n) + " eigenvalues");
  }

  std::vector<std::size_t> order(sample.theta.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return sample.theta[a] < sample.theta[b]; });
  SpectralSample sorted;
  sorted.residual = phase_residual;
  for (std::size_t j : order) {
    sorted.theta.push_back(sample.theta[j]);
    sorted.weight.push_back(sample.weight[j]);
  }
  sorted.weight_sum = std::accumulate(sorted.weight.begin(), sorted.weight.end(), 0.0);
  return sorted;
}

namespace {

double fejer_kernel(double x, int order) {
  // (1/(M+1)) (sin((M+1)x/2) / sin(x/2))^2, normalized to mean 1 on the circle.
  const double m1 = static_cast<double>(order + 1);
  const double half = 0.5 * wrap_angle(x);
  const double s = std::sin(half);
  if (std::abs(s) < 1e-9) {
    const double t = half;  // series fallback near the peak
    const double u = m1 * t;
    const double num = std::abs(u) < 1e-9 ? m1 : std::sin(u) / (t == 0.0 ? 1.0 : t);
    return std::abs(u) < 1e-9 ? m1 : num * num / m1;
  }
  const double ratio = std::sin(m1 * half) / s;
  return ratio * ratio / m1;
}

}  // namespace

DensityProfile density_phase_average(const Sequence& seq, std::span<const double> theta_grid,
                                     const PhaseAverageOptions& options) {
  if (options.n < 2 || options.phases < 1) throw ConfigError("invalid phase-average options");
  const int order = options.kernel_order > 0 ? options.kernel_order : 4 * options.n;

  std::vector<double> atom_theta;
  std::vector<double> atom_weight;
  atom_theta.reserve(static_cast<std::size_t>(options.n) * options.phases);
  atom_weight.reserve(atom_theta.capacity());
  for (int k = 0; k < options.phases; ++k) {
    const cplx beta =
        std::polar(1.0, kTwoPi * (static_cast<double>(k) + 0.5) / options.phases);
    SpectralSample sample;
    if (options.use_dense) {
      sample = spectral_measure(build_cmv(seq, options.n, beta));
    } else {
      sample = spectral_measure_quadrature(seq, options.n, beta);
    }
    for (std::size_t j = 0; j < sample.theta.size(); ++j) {
      atom_theta.push_back(sample.theta[j]);
      atom_weight.push_back(sample.weight[j] / options.phases);
    }
  }

  DensityProfile profile;
  profile.cutoff = options.n;
  profile.theta.assign(theta_grid.begin(), theta_grid.end());
  profile.w.resize(theta_grid.size());
  for (std::size_t i = 0; i < theta_grid.size(); ++i) {
    KahanSum acc;
    for (std::size_t j = 0; j < atom_theta.size(); ++j) {
      acc.add(atom_weight[j] * fejer_kernel(theta_grid[i] - atom_theta[j], order));
    }
    profile.w[i] = acc.value();
  }

  const double per_lobe = 2.0 * static_cast<double>(options.n) * options.phases /
                          static_cast<double>(order + 1);
  if (per_lobe < 10.0) {
    profile.notes.push_back("under-resolved: ~" + std::to_string(per_lobe) +
                            " atoms per kernel lobe (< 10); lower the kernel order or raise n*K");
  }
  return profile;
}

DensityProfile density_caratheodory_radial(const Sequence& seq,
                                           std::span<const double> theta_grid,
                                           const RadialOptions& options) {
  if (!(options.r > 0.0) || options.r >= 1.0) throw ConfigError("radial radius must lie in (0, 1)");
  DensityProfile profile;
  profile.theta.assign(theta_grid.begin(), theta_grid.end());
  profile.w.resize(theta_grid.size());
  const double r1 = options.r;
  const double r2 = 1.0 - 2.0 * (1.0 - options.r);
  for (std::size_t i = 0; i < theta_grid.size(); ++i) {
    const double w1 =
        std::real(caratheodory_function(seq, std::polar(r1, theta_grid[i]), options.tail));
    if (options.richardson) {
      const double w2 =
          std::real(caratheodory_function(seq, std::polar(r2, theta_grid[i]), options.tail));
      profile.w[i] = 2.0 * w1 - w2;  // cancels the O(1-r) term
    } else {
      profile.w[i] = w1;
    }
  }
  return profile;
}

DensityComparison compare_densities(const DensityProfile& a, const DensityProfile& b, Arc arc) {
  if (b.theta.size() < 2) throw ConfigError("profile too small to resample");
  auto interp = [&](double theta) -> double {
    const auto& xs = b.theta;
    auto it = std::lower_bound(xs.begin(), xs.end(), theta);
    if (it == xs.begin() || it == xs.end()) {
      throw DomainError("profiles do not overlap on the requested arc");
    }
    const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
    const std::size_t lo = hi - 1;
    const double t = (theta - xs[lo]) / (xs[hi] - xs[lo]);
    return (1.0 - t) * b.w[lo] + t * b.w[hi];
  };

  DensityComparison cmp;
  KahanSum l1;
  double prev_theta = 0.0, prev_diff = 0.0;
  bool have_prev = false;
  for (std::size_t i = 0; i < a.theta.size(); ++i) {
    const double theta = a.theta[i];
    if (theta < arc.lo || theta > arc.hi) continue;
    const double diff = std::abs(a.w[i] - interp(theta));
    cmp.sup_error = std::max(cmp.sup_error, diff);
    if (have_prev) l1.add(0.5 * (theta - prev_theta) * (diff + prev_diff));
    prev_theta = theta;
    prev_diff = diff;
    have_prev = true;
  }
  if (!have_prev) throw DomainError("no grid points of the first profile lie on the arc");
  cmp.l1_error = l1.value() / kTwoPi;
  return cmp;
}

}  // namespace opuc
