#pragma once

#include <stdexcept>
#include <string>

namespace carat {

// Bad user input: malformed files, dimension mismatches, out-of-range points.
class InputError : public std::runtime_error {
public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Numeric failure: conditioning blow-ups, exhausted searches, violated certificates.
class NumericError : public std::runtime_error {
public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

class ConditioningError : public NumericError {
public:
  explicit ConditioningError(const std::string& what) : NumericError(what) {}
};

class CertificateViolation : public NumericError {
public:
  explicit CertificateViolation(const std::string& what) : NumericError(what) {}
};

class EmptyDomainError : public InputError {
public:
  explicit EmptyDomainError(const std::string& what) : InputError(what) {}
};

}  // namespace carat
