// Exception hierarchy shared by all varembed modules.
#pragma once

#include <stdexcept>
#include <string>

namespace varembed {

class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Construction-time parameter validation failed (bad family parameters,
// non-monotone prefixes, convergent weight sequences, ...).
class InvalidParams : public Error {
public:
  using Error::Error;
};

// No upper bracket found while growing the bisection interval.
class BracketFailure : public Error {
public:
  using Error::Error;
};

// An exact computation was requested outside its declared affordable regime.
class BudgetExceeded : public Error {
public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
public:
  using Error::Error;
};

class LengthMismatch : public Error {
public:
  using Error::Error;
};

// A check was invoked on inputs that do not satisfy its stated hypothesis.
class HypothesisViolated : public Error {
public:
  using Error::Error;
};

// No condition evaluator covers the requested (source, target) pair.
class NotApplicable : public Error {
public:
  using Error::Error;
};

// Report generation received records of incompatible kinds.
class MixedSchemas : public Error {
public:
  using Error::Error;
};

// JSON job validation failure; carries the schema path of the offending field.
class SchemaError : public Error {
public:
  SchemaError(const std::string& path, const std::string& message)
      : Error(path + ": " + message), path_(path) {}
  const std::string& path() const { return path_; }

private:
  std::string path_;
};

}  // namespace varembed
