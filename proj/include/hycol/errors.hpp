#ifndef HYCOL_ERRORS_HPP
#define HYCOL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hycol {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed scenario document.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Well-formed document that does not match the scenario schema. The message
/// starts with the offending field path.
class SchemaError : public Error {
 public:
  SchemaError(std::string path, const std::string& what)
      : Error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// No controller region matched the terms (contract violation).
class NoRegionError : public Error {
 public:
  using Error::Error;
};

class CoincidentCentersError : public Error {
 public:
  using Error::Error;
};

/// Bodies interpenetrate beyond the contact tolerance.
class OverlapError : public Error {
 public:
  using Error::Error;
};

class GeometryError : public Error {
 public:
  using Error::Error;
};

/// The local phase could not separate the robot from every body.
class NonSeparableError : public Error {
 public:
  using Error::Error;
};

}  // namespace hycol

#endif  // HYCOL_ERRORS_HPP
