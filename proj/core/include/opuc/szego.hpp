#ifndef OPUC_SZEGO_HPP
#define OPUC_SZEGO_HPP

#include <cstdint>

#include "opuc/types.hpp"
#include "opuc/verblunsky.hpp"

namespace opuc {

/// One-step recursion matrix A(alpha, z) = (1/rho) [[z, -conj(alpha)], [-alpha z, 1]].
/// det A = z exactly (up to rounding). Requires z != 0.
Mat2 one_step_matrix(const Coefficient& coeff, cplx z);

/// d/dz A(alpha, z) = (1/rho) [[1, 0], [-alpha, 0]].
Mat2 one_step_matrix_dz(const Coefficient& coeff);

/// Orthonormal polynomial phi_n, its reversed partner phi*_n, and the
/// second-kind pair psi_n, psi*_n (same recursion with alpha -> -alpha),
/// all evaluated at z by iterating the recursion from (1, 1).
struct PolynomialValues {
  cplx phi, phi_star, psi, psi_star;
};
PolynomialValues szego_polynomials(const Sequence& seq, cplx z, std::int64_t n);

/// Tail closure for evaluating Schur functions by the backward recursion
/// f_n = (alpha_n + z f_{n+1}) / (1 + conj(alpha_n) z f_{n+1}).
struct SchurTail {
  enum class Kind { TruncateAtDepth, PeriodicFixedPoint };
  Kind kind = Kind::TruncateAtDepth;
  std::int64_t depth = 0;   // 0 => depth chosen adaptively from tol
  double tol = 1e-12;
  std::int64_t start = 0;   // first index of the periodic tail
  int period = 1;

  static SchurTail truncate(std::int64_t depth = 0, double tol = 1e-12) {
    SchurTail t;
    t.kind = Kind::TruncateAtDepth;
    t.depth = depth;
    t.tol = tol;
    return t;
  }
  static SchurTail periodic(std::int64_t start, int period) {
    SchurTail t;
    t.kind = Kind::PeriodicFixedPoint;
    t.start = start;
    t.period = period;
    return t;
  }
};

/// Fixed point of the Moebius map induced by one period of the backward Schur
/// recursion. Attracting means the |f| < 1 root; ClosedGap flags the
/// degenerate case with both roots on the unit circle.
struct MobiusFixedPoint {
  enum class Kind { Attracting, ClosedGap };
  Kind kind;
  cplx value;
};
MobiusFixedPoint schur_periodic_fixed_point(const Sequence& seq, cplx z, std::int64_t start,
                                            int period);

/// Schur function f(z) for |z| < 1. Throws DomainError for |z| >= 1 and
/// ClosedGapError if a periodic tail is degenerate.
cplx schur_function(const Sequence& seq, cplx z, const SchurTail& tail);

/// Caratheodory function F(z) = (1 + z f(z)) / (1 - z f(z)); Re F > 0, F(0) = 1.
cplx caratheodory_function(const Sequence& seq, cplx z, const SchurTail& tail);

}  // namespace opuc

#endif  // OPUC_SZEGO_HPP
