#ifndef OPUC_CMV_HPP
#define OPUC_CMV_HPP

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <vector>

#include "opuc/approximant.hpp"
#include "opuc/szego.hpp"
#include "opuc/types.hpp"
#include "opuc/verblunsky.hpp"

namespace opuc {

/// Finite unitary five-diagonal truncation: coefficients alpha_0..alpha_{n-2}
/// from the sequence plus a unimodular boundary coefficient beta, assembled
/// from the even/odd factorization into 2x2 rotation blocks.
struct FiniteCMV {
  int n = 0;
  cplx beta{1.0};
  Eigen::MatrixXcd matrix;

  double unitarity_residual() const;  // ||C* C - I||_F
};

FiniteCMV build_cmv(const Sequence& seq, int n, cplx beta);

/// Eigenvalue angles (sorted into [0, 2pi)) and weights |<delta_0, v_j>|^2 of
/// a finite truncation; the canonical spectral measure of the matrix.
struct SpectralSample {
  std::vector<double> theta;
  std::vector<double> weight;
  double residual = 0.0;    // route-specific solve residual
  double weight_sum = 0.0;
};

/// Dense route: complex Schur decomposition of the full matrix. The
/// brute-force reference; O(n^3).
SpectralSample spectral_measure(const FiniteCMV& cmv);

/// Fast route: the boundary polynomial z phi_{n-1} - conj(beta) phi*_{n-1}
/// has all n zeros on the circle, so e^{-i n theta/2} times it is real up to
/// one global phase; its sign changes bracket the eigenvalues, which are then
/// bisected, with Christoffel weights 1 / sum_{k<n} |phi_k|^2. Mathematically
/// the same measure as the dense route; O(n^2). The two are cross-checked in
/// the test suite.
SpectralSample spectral_measure_quadrature(const Sequence& seq, int n, cplx beta);

/// Density estimate by averaging truncation measures over equispaced boundary
/// phases and smoothing with a Fejer kernel (positive, order ~ 4n when 0).
struct PhaseAverageOptions {
  int n = 256;
  int phases = 32;
  int kernel_order = 0;   // 0 => 4 * n
  bool use_dense = false; // switch to the O(n^3) eigensolver route
};
DensityProfile density_phase_average(const Sequence& seq, std::span<const double> theta_grid,
                                     const PhaseAverageOptions& options);

/// Density estimate from the Caratheodory transform: w ~ Re F(r e^{i theta}),
/// optionally Richardson-extrapolated in (1 - r) from two radii.
struct RadialOptions {
  double r = 1.0 - 1e-6;
  bool richardson = true;
  SchurTail tail = SchurTail::truncate();
};
DensityProfile density_caratheodory_radial(const Sequence& seq,
                                           std::span<const double> theta_grid,
                                           const RadialOptions& options);

/// Sup and L1 distance between two profiles on an arc; the second profile is
/// resampled onto the first grid by linear interpolation.
struct DensityComparison {
  double sup_error = 0.0;
  double l1_error = 0.0;
};
DensityComparison compare_densities(const DensityProfile& a, const DensityProfile& b, Arc arc);

}  // namespace opuc

#endif  // OPUC_CMV_HPP
