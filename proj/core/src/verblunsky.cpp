#include "opuc/verblunsky.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "opuc/errors.hpp"

namespace opuc {

Coefficient make_coefficient(cplx alpha, std::int64_t where) {
  const double mod2 = std::norm(alpha);
  if (!(mod2 < 1.0) || !std::isfinite(mod2)) {
    std::string msg = "Verblunsky coefficient |alpha| >= 1 (|alpha| = " +
                      std::to_string(std::sqrt(mod2)) + ")";
    if (where >= 0) msg += " at index " + std::to_string(where);
    throw ConfigError(msg);
  }
  return Coefficient{alpha, std::sqrt(1.0 - mod2)};
}

const char* sequence_kind_name(SequenceKind kind) {
  switch (kind) {
    case SequenceKind::ExplicitList: return "explicit-list";
    case SequenceKind::Constant: return "constant";
    case SequenceKind::Periodic: return "p-periodic";
    case SequenceKind::PeriodicDecay: return "periodic-plus-decaying";
    case SequenceKind::RotatingPhase: return "rotating-phase";
    case SequenceKind::CustomGenerator: return "custom-generator";
  }
  return "unknown";
}

namespace {

void require_cap(double cap_bound) {
  if (!(cap_bound > 0.0) || cap_bound >= 1.0) {
    throw ConfigError("capBound must lie in (0, 1), got " + std::to_string(cap_bound));
  }
}

}  // namespace

Sequence Sequence::explicit_list(std::vector<cplx> alphas, double cap_bound) {
  require_cap(cap_bound);
  Sequence s;
  s.kind_ = SequenceKind::ExplicitList;
  s.data_ = std::move(alphas);
  s.cap_bound_ = cap_bound;
  return s;
}

Sequence Sequence::constant(cplx alpha, double cap_bound) {
  require_cap(cap_bound);
  Sequence s;
  s.kind_ = SequenceKind::Constant;
  s.data_ = {alpha};
  s.cap_bound_ = cap_bound;
  return s;
}

Sequence Sequence::periodic(std::vector<cplx> period, double cap_bound) {
  require_cap(cap_bound);
  if (period.empty()) throw ConfigError("p-periodic sequence needs a nonempty period");
  Sequence s;
  s.kind_ = SequenceKind::Periodic;
  s.data_ = std::move(period);
  s.cap_bound_ = cap_bound;
  return s;
}

Sequence Sequence::periodic_decay(std::vector<cplx> period, double decay_coeff, double cap_bound) {
  require_cap(cap_bound);
  if (period.empty()) throw ConfigError("periodic-plus-decaying sequence needs a nonempty period");
  Sequence s;
  s.kind_ = SequenceKind::PeriodicDecay;
  s.data_ = std::move(period);
  s.decay_coeff_ = decay_coeff;
  s.cap_bound_ = cap_bound;
  return s;
}

Sequence Sequence::rotating_phase(double amplitude, double exponent, double phase_scale,
                                  double cap_bound) {
  require_cap(cap_bound);
  if (amplitude < 0.0 || amplitude >= 1.0) {
    throw ConfigError("rotating-phase amplitude must lie in [0, 1)");
  }
  if (exponent <= 0.0 || exponent >= 1.0) {
    throw ConfigError("rotating-phase exponent must lie in (0, 1)");
  }
  Sequence s;
  s.kind_ = SequenceKind::RotatingPhase;
  s.amplitude_ = amplitude;
  s.exponent_ = exponent;
  s.phase_scale_ = phase_scale;
  s.cap_bound_ = cap_bound;
  return s;
}

Sequence Sequence::custom(std::function<cplx(std::int64_t)> generator, double cap_bound) {
  require_cap(cap_bound);
  if (!generator) throw ConfigError("custom-generator sequence needs a callable");
  Sequence s;
  s.kind_ = SequenceKind::CustomGenerator;
  s.generator_ = std::move(generator);
  s.cap_bound_ = cap_bound;
  return s;
}

cplx Sequence::raw(std::int64_t index) const {
  switch (kind_) {
    case SequenceKind::ExplicitList:
      return index < static_cast<std::int64_t>(data_.size()) ? data_[index] : cplx{0.0};
    case SequenceKind::Constant:
      return data_[0];
    case SequenceKind::Periodic:
      return data_[index % static_cast<std::int64_t>(data_.size())];
    case SequenceKind::PeriodicDecay: {
      const cplx base = data_[index % static_cast<std::int64_t>(data_.size())];
      return base * (1.0 - decay_coeff_ / static_cast<double>(index + 2));
    }
    case SequenceKind::RotatingPhase: {
      const double phase =
          kTwoPi * phase_scale_ * std::pow(static_cast<double>(index), exponent_);
      return amplitude_ * std::polar(1.0, phase);
    }
    case SequenceKind::CustomGenerator:
      return generator_(index);
  }
  throw ConfigError("unreachable sequence kind");
}

Coefficient Sequence::at(std::int64_t n) const {
  if (n < 0) throw ConfigError("sequence index must be >= 0, got " + std::to_string(n));
  const std::int64_t index = n + offset_;
  const cplx a = raw(index);
  Coefficient coeff = make_coefficient(a, index);
  if (std::abs(a) > 1.0 - cap_bound_) {
    throw ConfigError("coefficient modulus " + std::to_string(std::abs(a)) +
                      " exceeds cap 1 - eta = " + std::to_string(1.0 - cap_bound_) +
                      " at index " + std::to_string(index));
  }
  return coeff;
}

Sequence Sequence::strip(std::int64_t k) const {
  if (k < 0) throw ConfigError("strip count must be >= 0");
  Sequence s = *this;
  s.offset_ += k;
  return s;
}

SequenceDiagnostics sequence_diagnostics(const Sequence& seq, int p, std::int64_t n_limit,
                                         std::int64_t window) {
  if (p < 1) throw ConfigError("diagnostics step p must be >= 1");
  if (n_limit < p) throw ConfigError("diagnostics need n_limit >= p");
  SequenceDiagnostics d;
  d.p = p;
  const std::int64_t window_start = std::max<std::int64_t>(0, n_limit - window);
  for (std::int64_t n = 0; n < n_limit; ++n) {
    const cplx here = seq.alpha(n);
    const double gap = std::abs(seq.alpha(n + p) - here);
    d.partial_l2_variation += gap * gap;
    d.partial_l1_variation += gap;
    d.sup_modulus = std::max(d.sup_modulus, std::abs(here));
    if (n >= window_start) d.max_recent_step_gap = std::max(d.max_recent_step_gap, gap);
  }
  return d;
}

}  // namespace opuc
