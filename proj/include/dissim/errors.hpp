#pragma once

#include <stdexcept>
#include <string>

namespace dissim {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad option values, impossible split counts, malformed config JSON.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// API misuse (empty score list, bad subcommand arguments).
class UsageError : public Error {
 public:
  using Error::Error;
};

// Malformed file content; message carries the offending line number.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Structurally valid file that does not match the declared schema (e.g. a
// dimension mismatch against expected_dim).
class SchemaError : public Error {
 public:
  using Error::Error;
};

// Dataset cannot supply what the protocol asks for (missing writers, too few
// samples of a label, single-class inputs).
class DataError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// Metric preconditions violated (one-class input, non-finite score).
class MetricError : public Error {
 public:
  using Error::Error;
};

// Training requested with an all-zero feature mask.
class DegenerateMaskError : public Error {
 public:
  using Error::Error;
};

}  // namespace dissim
