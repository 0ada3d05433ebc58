#pragma once

#include <stdexcept>
#include <string>

namespace nocontact {

// Input outside the mathematical domain of an operation (zero vector for a
// frame, non-positive radius sum, ...). Derives from std::domain_error so
// callers can catch either.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class DegenerateParameters : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateCenters : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TrainingDiverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InsufficientData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoPathFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nocontact
