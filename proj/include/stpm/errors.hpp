// Exception taxonomy shared by the library and the CLI.
#pragma once

#include <stdexcept>
#include <string>

namespace stpm {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input text (CSV/JSON); message carries file and line where known.
struct ParseError : Error {
  using Error::Error;
};

// Structurally inconsistent inputs (row counts, sensor counts).
struct DimensionError : Error {
  using Error::Error;
};

// Values outside what the data model allows (non-finite activity, bad ids).
struct DataError : Error {
  using Error::Error;
};

// Argument outside an operation's domain (e.g. non-positive radius).
struct DomainError : Error {
  using Error::Error;
};

// Invalid run parameters.
struct ConfigError : Error {
  using Error::Error;
};

// Invalid synthetic-data spec (overlapping planted patterns, bad intervals).
struct SpecError : Error {
  using Error::Error;
};

// A guard on problem size was exceeded.
struct SizeError : Error {
  using Error::Error;
};

}  // namespace stpm
