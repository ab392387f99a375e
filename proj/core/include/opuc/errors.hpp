#ifndef OPUC_ERRORS_HPP
#define OPUC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace opuc {

/// Invalid sequence/experiment configuration (bad coefficient, bad JSON, ...).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Argument outside the mathematical domain of an operation (|z| >= 1 for a
/// Schur function, |Delta| >= 2 for an eigenvalue split, ...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// A sampled path handed to a branch tracker jumped by >= pi between
/// consecutive samples, so the branch cannot be continued.
class PathError : public std::runtime_error {
 public:
  explicit PathError(const std::string& what) : std::runtime_error(what) {}
};

/// Closed-gap degeneracy: a periodic-tail fixed point has both Moebius roots
/// on the unit circle and no attracting choice exists.
class ClosedGapError : public std::runtime_error {
 public:
  explicit ClosedGapError(const std::string& what) : std::runtime_error(what) {}
};

/// An arc/window combination failed validation (sign constants not constant,
/// band condition violated, ...). Carries the rejection reason.
class RegionError : public std::runtime_error {
 public:
  explicit RegionError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure (eigensolver non-convergence, overflow in a product,
/// identity residual above tolerance).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace opuc

#endif  // OPUC_ERRORS_HPP
