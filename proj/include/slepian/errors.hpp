#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace slepian {

/// Iterative routine did not converge, or a self-check on a computed result failed.
class NumericalFailure : public std::runtime_error {
 public:
  explicit NumericalFailure(const std::string& what, std::ptrdiff_t index = -1)
      : std::runtime_error(what), index_(index) {}

  /// Offending index (eigenvalue, mode, grid level), or -1 when not applicable.
  std::ptrdiff_t index() const noexcept { return index_; }

 private:
  std::ptrdiff_t index_;
};

/// Arguments outside the domain where a formula or operation is defined.
class RangeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Operation would divide by an eigenvalue below the trusted floor.
class IllConditioned : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace slepian
