#include "opuc/transfer.hpp"

#include <cmath>

#include "opuc/errors.hpp"
#include "opuc/szego.hpp"

namespace opuc {

BranchTracker::BranchTracker(int p, double anchor_theta) : p_(p), anchor_(anchor_theta) {
  if (p < 1) throw ConfigError("branch tracker needs p >= 1");
}

void BranchTracker::reset(double anchor_theta) {
  anchor_ = anchor_theta;
  last_theta_.reset();
}

double BranchTracker::unwound_angle() const {
  return last_theta_ ? *last_theta_ : anchor_;
}

cplx BranchTracker::half_power(cplx z) {
  if (z == cplx{0.0}) throw DomainError("half power requires z != 0");
  const double raw = std::arg(z);
  double theta;
  if (!last_theta_) {
    // First sample: representative of raw within (anchor - pi, anchor + pi].
    double t = raw;
    while (t <= anchor_ - kPi) t += kTwoPi;
    while (t > anchor_ + kPi) t -= kTwoPi;
    theta = t;
  } else {
    double jump = raw - std::fmod(*last_theta_, kTwoPi);
    while (jump <= -kPi) jump += kTwoPi;
    while (jump > kPi) jump -= kTwoPi;
    if (std::abs(jump) >= kPi - 1e-12) {
      throw PathError("branch path jump of " + std::to_string(std::abs(jump)) +
                      " rad reaches pi; supply a finer path");
    }
    theta = *last_theta_ + jump;
  }
  last_theta_ = theta;
  return half_power_at(p_, std::abs(z), theta);
}

cplx half_power_at(int p, double r, double theta) {
  return std::pow(r, 0.5 * p) * std::polar(1.0, 0.5 * p * theta);
}

TransferBlock transfer_block(const Sequence& seq, std::int64_t m, int p, cplx z) {
  if (p < 1) throw ConfigError("transfer block needs p >= 1");
  if (m < 0) throw ConfigError("transfer block needs m >= 0");
  Mat2 phi = Mat2::identity();
  for (int k = 0; k < p; ++k) {
    phi = one_step_matrix(seq.at(m * p + k), z) * phi;
  }
  return TransferBlock{m, p, z, phi};
}

Mat2 transfer_block_dz(const Sequence& seq, std::int64_t m, int p, cplx z) {
  if (p < 1) throw ConfigError("transfer block needs p >= 1");
  Mat2 prod = Mat2::identity();
  Mat2 deriv{};  // zero
  for (int k = 0; k < p; ++k) {
    const Coefficient c = seq.at(m * p + k);
    const Mat2 a = one_step_matrix(c, z);
    deriv = a * deriv + one_step_matrix_dz(c) * prod;
    prod = a * prod;
  }
  return deriv;
}

cplx discriminant(const TransferBlock& block, BranchTracker& branch) {
  if (branch.p() != block.p) throw ConfigError("branch tracker and block disagree on p");
  return block.phi.trace() / branch.half_power(block.z);
}

cplx discriminant_at(const Sequence& seq, std::int64_t m, int p, double r, double theta) {
  const cplx z = std::polar(r, theta);
  return transfer_block(seq, m, p, z).phi.trace() / half_power_at(p, r, theta);
}

cplx discriminant_derivative_at(const Sequence& seq, std::int64_t m, int p, double r,
                                double theta) {
  const cplx z = std::polar(r, theta);
  const cplx tr = transfer_block(seq, m, p, z).phi.trace();
  const cplx tr_dz = transfer_block_dz(seq, m, p, z).trace();
  // d/dz [z^{-p/2} tr Phi] = z^{-p/2} (tr Phi' - (p / 2z) tr Phi)
  return (tr_dz - 0.5 * static_cast<double>(p) / z * tr) / half_power_at(p, r, theta);
}

namespace {

TildeBlock conjugate_block(const Mat2& phi, cplx half_pow) {
  // (1/2) (1,1;1,-1) Phi (1,1;1,-1), scaled by z^{-p/2}.
  const cplx s = 0.5 / half_pow;
  TildeBlock t;
  t.a = s * (phi.a + phi.b + phi.c + phi.d);
  t.b = s * (phi.a - phi.b + phi.c - phi.d);
  t.c = s * (phi.a + phi.b - phi.c - phi.d);
  t.d = s * (phi.a - phi.b - phi.c + phi.d);
  t.delta = t.a + t.d;
  return t;
}

}  // namespace

TildeBlock tilde_block(const TransferBlock& block, BranchTracker& branch) {
  if (branch.p() != block.p) throw ConfigError("branch tracker and block disagree on p");
  return conjugate_block(block.phi, branch.half_power(block.z));
}

TildeBlock tilde_block_at(const Sequence& seq, std::int64_t m, int p, double r, double theta,
                          bool with_derivative) {
  const cplx z = std::polar(r, theta);
  TildeBlock t = conjugate_block(transfer_block(seq, m, p, z).phi, half_power_at(p, r, theta));
  if (with_derivative) t.delta_prime = discriminant_derivative_at(seq, m, p, r, theta);
  return t;
}

StructureReport structure_report(const Sequence& seq, int p, std::int64_t m_count,
                                 const std::vector<cplx>& z_samples) {
  StructureReport report;
  const Mat2 j{1.0, 0.0, 0.0, -1.0};
  for (std::int64_t m = 0; m < m_count; ++m) {
    for (const cplx& z : z_samples) {
      const TransferBlock block = transfer_block(seq, m, p, z);
      StructureSampleReport row;
      row.m = m;
      row.z = z;
      row.on_circle = std::abs(std::abs(z) - 1.0) < 1e-12;

      const cplx zp = std::pow(z, p);
      row.det_residual = std::abs(block.phi.det() - zp) / std::abs(zp);

      row.symplectic_residual = 0.0;
      if (row.on_circle) {
        row.symplectic_residual = (block.phi.adjoint() * j * block.phi - j).frobenius_norm();
      }

      const TildeBlock t = conjugate_block(block.phi, half_power_at(p, std::abs(z), std::arg(z)));
      const Mat2 tm{t.a, t.b, t.c, t.d};
      row.tilde_det_residual = std::abs(tm.det() - 1.0);
      row.trace_residual = std::abs(tm.trace() - t.delta);
      row.reality_residual = 0.0;
      if (row.on_circle) {
        const double scale = 1.0 + tm.frobenius_norm();
        const double worst = std::max({std::abs(std::imag(t.a)), std::abs(std::real(t.b)),
                                       std::abs(std::real(t.c)), std::abs(std::imag(t.d))});
        row.reality_residual = worst / scale;
        report.max_reality_residual = std::max(report.max_reality_residual, row.reality_residual);
        report.max_symplectic_residual =
            std::max(report.max_symplectic_residual, row.symplectic_residual);
      }
      report.max_det_residual = std::max(report.max_det_residual, row.det_residual);
      report.max_tilde_det_residual =
          std::max(report.max_tilde_det_residual, row.tilde_det_residual);
      report.max_trace_residual = std::max(report.max_trace_residual, row.trace_residual);
      report.samples.push_back(row);
    }
  }
  return report;
}

}  // namespace opuc
