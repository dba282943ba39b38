#pragma once

#include <stdexcept>
#include <string>

namespace splinets {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shapes of supports and derivative blocks do not agree with the family.
class StructureError : public Error {
 public:
  using Error::Error;
};

class SingularError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace splinets
