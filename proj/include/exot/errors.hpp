#pragma once

#include <stdexcept>
#include <string>

namespace exot {

/// Invalid input or parameters: mass mismatch, non-atomic input handed to a
/// solver, out-of-range quantile, malformed files. CLI exit code 2.
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// A violated internal invariant (e.g. crossing parity). Signals a bug, not
/// bad input. CLI exit code 3.
class InternalInvariantError : public std::logic_error {
 public:
  explicit InternalInvariantError(const std::string& what) : std::logic_error(what) {}
};

/// The brute-force oracle found two distinct plans within its tie tolerance
/// and refuses to pick one; flags the instance for manual review.
class OracleAmbiguityError : public std::runtime_error {
 public:
  explicit OracleAmbiguityError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace exot
