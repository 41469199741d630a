#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "enforcekit/dsl.hpp"

namespace enforcekit {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class DuplicateName : public Error {
 public:
  using Error::Error;
};

class UnknownModule : public Error {
 public:
  using Error::Error;
};

class InvalidModel : public Error {
 public:
  InvalidModel(const std::string& what, std::vector<dsl::Diagnostic> diagnostics)
      : Error(what), diagnostics_(std::move(diagnostics)) {}

  const std::vector<dsl::Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<dsl::Diagnostic> diagnostics_;
};

// An insertion cascade nested deeper than the session allows; usually two
// modules inserting calls that trigger each other.
class DepthExceeded : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class IllegalLifecycle : public Error {
 public:
  using Error::Error;
};

class VersionMismatch : public Error {
 public:
  using Error::Error;
};

class CorruptTable : public Error {
 public:
  using Error::Error;
};

}  // namespace enforcekit
