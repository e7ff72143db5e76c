#pragma once

#include <stdexcept>
#include <string>

namespace fairvec {

// Base for every error raised by the library. `DataError` subclasses map to
// exit code 3 in the command-line tool; `UsageError` maps to 2.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class UsageError : public Error {
public:
  using Error::Error;
};

class DataError : public Error {
public:
  using Error::Error;
};

class FormatError : public DataError {
public:
  using DataError::DataError;
};

class IoError : public DataError {
public:
  using DataError::DataError;
};

class OovError : public DataError {
public:
  explicit OovError(std::string word)
      : DataError("word not in vocabulary: '" + word + "'"), word_(std::move(word)) {}

  const std::string &word() const noexcept { return word_; }

private:
  std::string word_;
};

// Input violates a documented precondition (e.g. unnormalized embedding).
class PreconditionError : public DataError {
public:
  using DataError::DataError;
};

// A quantity is mathematically undefined for the given input (zero vector,
// zero variance, singular system, ...).
class DegenerateError : public DataError {
public:
  using DataError::DataError;
};

class NumericalError : public DataError {
public:
  using DataError::DataError;
};

class ChecksumError : public DataError {
public:
  using DataError::DataError;
};

} // namespace fairvec
