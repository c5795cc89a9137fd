// Error types thrown across the library. Every failure carries a formatted
// message with enough context (path, line, byte offset, key name) to act on.
#pragma once

#include <stdexcept>
#include <string>

namespace chatmood {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input that could not be parsed at all.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Input parsed but does not match the expected schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Persisted artifact with an unsupported format_version.
class VersionError : public Error {
 public:
  using Error::Error;
};

/// Two resource entries that must be disjoint overlap.
class ConflictError : public Error {
 public:
  using Error::Error;
};

/// Duplicate identifier where uniqueness is required.
class DuplicateIdError : public Error {
 public:
  using Error::Error;
};

/// File could not be opened, read, or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Invalid run configuration or missing prerequisite artifact.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Argument violates an operation precondition.
class ValueError : public Error {
 public:
  using Error::Error;
};

/// Model training could not proceed on the given data.
class TrainingError : public Error {
 public:
  using Error::Error;
};

}  // namespace chatmood
