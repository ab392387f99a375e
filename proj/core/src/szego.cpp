#include "opuc/szego.hpp"

#include <algorithm>
#include <cmath>

#include "opuc/errors.hpp"

namespace opuc {

Mat2 one_step_matrix(const Coefficient& coeff, cplx z) {
  if (z == cplx{0.0}) throw DomainError("one-step matrix requires z != 0");
  const double inv_rho = 1.0 / coeff.rho;
  return Mat2{z * inv_rho, -std::conj(coeff.alpha) * inv_rho,
              -coeff.alpha * z * inv_rho, inv_rho};
}

Mat2 one_step_matrix_dz(const Coefficient& coeff) {
  const double inv_rho = 1.0 / coeff.rho;
  return Mat2{inv_rho, 0.0, -coeff.alpha * inv_rho, 0.0};
}

PolynomialValues szego_polynomials(const Sequence& seq, cplx z, std::int64_t n) {
  if (n < 0) throw DomainError("polynomial degree must be >= 0");
  if (z == cplx{0.0}) throw DomainError("polynomial recursion requires z != 0");
  Vec2 first{1.0, 1.0};   // (phi, phi*)
  Vec2 second{1.0, 1.0};  // (psi, psi*)
  for (std::int64_t k = 0; k < n; ++k) {
    const Coefficient c = seq.at(k);
    const Coefficient flipped{-c.alpha, c.rho};
    first = one_step_matrix(c, z) * first;
    second = one_step_matrix(flipped, z) * second;
  }
  return PolynomialValues{first.x, first.y, second.x, second.y};
}

namespace {

// One backward Schur step: f_n from f_{n+1}.
inline cplx schur_step(cplx alpha, cplx z, cplx f_next) {
  return (alpha + z * f_next) / (1.0 + std::conj(alpha) * z * f_next);
}

// Depth for truncated evaluation so that the contraction error
// |z|^M * 2/(1-|z|) stays below tol.
std::int64_t adaptive_depth(double mod_z, double tol) {
  if (mod_z == 0.0) return 1;
  const double target = std::log(tol * (1.0 - mod_z) / 2.0);
  const double steps = target / std::log(mod_z);
  const std::int64_t depth = static_cast<std::int64_t>(std::ceil(steps));
  constexpr std::int64_t kMaxDepth = 2'000'000;
  if (depth > kMaxDepth) {
    throw DomainError(
        "truncated Schur evaluation would need depth " + std::to_string(depth) +
        "; use a periodic tail or a smaller |z|");
  }
  return std::max<std::int64_t>(depth, 1);
}

}  // namespace

MobiusFixedPoint schur_periodic_fixed_point(const Sequence& seq, cplx z, std::int64_t start,
                                            int period) {
  if (period < 1) throw DomainError("periodic tail needs period >= 1");
  // One backward step f_n = (alpha + z f)/(1 + conj(alpha) z f) is the Moebius
  // map with matrix [[z, alpha], [conj(alpha) z, 1]]; one period composes them
  // outermost-first.
  Mat2 map = Mat2::identity();
  for (int k = 0; k < period; ++k) {
    const cplx a = seq.alpha(start + k);
    map = map * Mat2{z, a, std::conj(a) * z, 1.0};
  }
  // Fixed points of (map.a f + map.b)/(map.c f + map.d).
  const cplx qa = map.c, qb = map.d - map.a, qc = -map.b;
  if (std::abs(qa) < 1e-300) {
    if (std::abs(qb) < 1e-300) throw NumericError("degenerate periodic-tail Moebius map");
    const cplx root = -qc / qb;
    return {std::abs(root) < 1.0 ? MobiusFixedPoint::Kind::Attracting
                                 : MobiusFixedPoint::Kind::ClosedGap,
            root};
  }
  const cplx disc = std::sqrt(qb * qb - 4.0 * qa * qc);
  const cplx r1 = (-qb + disc) / (2.0 * qa);
  const cplx r2 = (-qb - disc) / (2.0 * qa);
  const double m1 = std::abs(r1), m2 = std::abs(r2);
  const cplx inner = m1 <= m2 ? r1 : r2;
  const double inner_mod = std::min(m1, m2);
  // Both roots (numerically) on the unit circle: closed-gap degeneracy.
  if (inner_mod > 1.0 - 1e-9) {
    return {MobiusFixedPoint::Kind::ClosedGap, inner};
  }
  return {MobiusFixedPoint::Kind::Attracting, inner};
}

cplx schur_function(const Sequence& seq, cplx z, const SchurTail& tail) {
  const double mod_z = std::abs(z);
  if (mod_z >= 1.0) throw DomainError("Schur function is evaluated for |z| < 1");

  std::int64_t depth = 0;
  cplx f{0.0};
  if (tail.kind == SchurTail::Kind::TruncateAtDepth) {
    depth = tail.depth > 0 ? tail.depth : adaptive_depth(mod_z, tail.tol);
  } else {
    depth = tail.start;
    const MobiusFixedPoint fp = schur_periodic_fixed_point(seq, z, tail.start, tail.period);
    if (fp.kind == MobiusFixedPoint::Kind::ClosedGap) {
      throw ClosedGapError("periodic tail fixed point is degenerate (closed gap)");
    }
    f = fp.value;
  }
  for (std::int64_t n = depth - 1; n >= 0; --n) {
    f = schur_step(seq.alpha(n), z, f);
  }
  if (!(std::abs(f) < 1.0 + 1e-12)) {
    throw NumericError("Schur evaluation left the unit disk: |f| = " + std::to_string(std::abs(f)));
  }
  return f;
}

cplx caratheodory_function(const Sequence& seq, cplx z, const SchurTail& tail) {
  if (z == cplx{0.0}) return cplx{1.0};
  const cplx zf = z * schur_function(seq, z, tail);
  return (1.0 + zf) / (1.0 - zf);
}

}  // namespace opuc
