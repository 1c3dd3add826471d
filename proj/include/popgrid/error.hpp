#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace popgrid {

/// Base of every error raised by the library. Callers that only need to know
/// "input rejected" catch this; the subclasses carry the failure category.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Syntactically malformed input (JSON, CSV). Carries a 1-based position.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, std::size_t column,
             const std::string& what);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Well-formed input missing a required member or using a wrong geometry type.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// A value violates a domain constraint (negative population, bad coordinate).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Admin features that are not all at the expected hierarchy level.
class LevelMismatchError : public Error {
 public:
  using Error::Error;
};

/// ESRI ASCII grid header problems.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// ESRI ASCII grid body holds a different number of values than the header states.
class TruncationError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Inputs are individually valid but cannot be combined (disjoint extents, etc).
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// Two rasters compared cell-by-cell do not share a geometry.
class AlignmentError : public Error {
 public:
  using Error::Error;
};

class GenerationError : public Error {
 public:
  using Error::Error;
};

}  // namespace popgrid
