#pragma once

#include <stdexcept>
#include <string>

namespace feqo {

// Input outside the domain of a physical formula (beta >= 1, negative volume, m = 0 harmonic, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A Fock truncation drops more probability than the caller allowed.
class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, int required_cutoff)
      : std::runtime_error(what), required_cutoff_(required_cutoff) {}

  int required_cutoff() const noexcept { return required_cutoff_; }

 private:
  int required_cutoff_;
};

// Malformed or schema-violating scenario configuration. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numerical invariant (norm conservation, PSD-ness) was violated beyond tolerance.
// The CLI maps this to exit code 3.
class ToleranceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace feqo
