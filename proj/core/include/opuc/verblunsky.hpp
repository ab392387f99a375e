#ifndef OPUC_VERBLUNSKY_HPP
#define OPUC_VERBLUNSKY_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "opuc/types.hpp"

namespace opuc {

/// One Verblunsky coefficient alpha in the open unit disk together with its
/// complementary radius rho = sqrt(1 - |alpha|^2) in (0, 1].
struct Coefficient {
  cplx alpha;
  double rho;
};

/// Validates |alpha| < 1 and computes rho. Throws ConfigError otherwise;
/// `where` names the offending index in the message when >= 0.
Coefficient make_coefficient(cplx alpha, std::int64_t where = -1);

enum class SequenceKind {
  ExplicitList,     // finitely many coefficients, zero afterwards
  Constant,
  Periodic,         // gamma_0..gamma_{p-1} repeated
  PeriodicDecay,    // gamma_{n mod p} * (1 - decay/(n+2))
  RotatingPhase,    // A * exp(2*pi*i * scale * n^q)
  CustomGenerator,  // arbitrary callable, not serializable
};

const char* sequence_kind_name(SequenceKind kind);

inline constexpr double kDefaultCapBound = 1e-3;

/// A lazily evaluated coefficient sequence. Evaluation is a pure function of
/// (spec, index); stripping accumulates an offset instead of copying data.
/// Every evaluated coefficient is checked against the cap |alpha_n| <= 1 - eta
/// (eta = cap_bound), which is a standing hypothesis of all predictions.
class Sequence {
 public:
  static Sequence explicit_list(std::vector<cplx> alphas, double cap_bound = kDefaultCapBound);
  static Sequence constant(cplx alpha, double cap_bound = kDefaultCapBound);
  static Sequence periodic(std::vector<cplx> period, double cap_bound = kDefaultCapBound);
  static Sequence periodic_decay(std::vector<cplx> period, double decay_coeff = 1.0,
                                 double cap_bound = kDefaultCapBound);
  static Sequence rotating_phase(double amplitude, double exponent, double phase_scale = 1.0,
                                 double cap_bound = kDefaultCapBound);
  static Sequence custom(std::function<cplx(std::int64_t)> generator,
                         double cap_bound = kDefaultCapBound);

  /// alpha_{n + offset} of the underlying sequence, cap-validated.
  Coefficient at(std::int64_t n) const;
  cplx alpha(std::int64_t n) const { return at(n).alpha; }
  double rho(std::int64_t n) const { return at(n).rho; }

  /// Remove k leading coefficients; offsets accumulate.
  Sequence strip(std::int64_t k) const;

  SequenceKind kind() const { return kind_; }
  std::int64_t offset() const { return offset_; }
  double cap_bound() const { return cap_bound_; }

  // Parameter accessors used by serialization and by specialized evaluators.
  const std::vector<cplx>& list_data() const { return data_; }
  double amplitude() const { return amplitude_; }
  double exponent() const { return exponent_; }
  double phase_scale() const { return phase_scale_; }
  double decay_coeff() const { return decay_coeff_; }

 private:
  Sequence() = default;

  SequenceKind kind_ = SequenceKind::Constant;
  std::vector<cplx> data_;                        // list / period entries
  double amplitude_ = 0.0, exponent_ = 0.0, phase_scale_ = 1.0;
  double decay_coeff_ = 1.0;
  std::function<cplx(std::int64_t)> generator_;
  std::int64_t offset_ = 0;
  double cap_bound_ = kDefaultCapBound;

  cplx raw(std::int64_t index) const;  // underlying value before cap checks
};

/// Partial variation sums and modulus statistics over indices [0, n_limit).
struct SequenceDiagnostics {
  int p = 1;
  double partial_l2_variation = 0.0;  // sum |alpha_{n+p} - alpha_n|^2, n < n_limit
  double partial_l1_variation = 0.0;
  double sup_modulus = 0.0;
  double max_recent_step_gap = 0.0;   // max |alpha_{n+p} - alpha_n| over the trailing window
};

SequenceDiagnostics sequence_diagnostics(const Sequence& seq, int p, std::int64_t n_limit,
                                         std::int64_t window);

}  // namespace opuc

#endif  // OPUC_VERBLUNSKY_HPP
