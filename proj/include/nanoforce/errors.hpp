#pragma once

#include <stdexcept>
#include <string>

namespace nanoforce {

//! Argument outside an operation's domain (e.g. a non-positive frequency
//! where the imaginary axis is required).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

//! Evaluation requested exactly at a pole of a response or distribution.
class PoleError : public DomainError {
public:
  using DomainError::DomainError;
};

//! Four contour components that do not satisfy g11 + g22 = g12 + g21.
class InconsistentComponents : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace nanoforce
