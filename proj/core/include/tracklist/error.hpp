#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tracklist {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on an argument was violated (empty phrase, dim mismatch, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Corpus ingestion failed: duplicate doc_id, unreadable record.
class BuildError : public Error {
 public:
  using Error::Error;
};

// A file did not match its expected format. `line` is 1-based, 0 when unknown.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A statistic was requested on input that does not define it (constant series).
class DegenerateInputError : public Error {
 public:
  DegenerateInputError(const std::string& what, std::string series)
      : Error(what), series_(std::move(series)) {}
  const std::string& series() const noexcept { return series_; }

 private:
  std::string series_;
};

// Co-occurrence probability asked for a term with doc_freq 0.
class ZeroDenominatorError : public Error {
 public:
  using Error::Error;
};

// A remote backend could not be reached or answered with garbage.
class TransportError : public Error {
 public:
  TransportError(const std::string& what, std::string endpoint, int attempts, bool retryable)
      : Error(what), endpoint_(std::move(endpoint)), attempts_(attempts), retryable_(retryable) {}
  const std::string& endpoint() const noexcept { return endpoint_; }
  int attempts() const noexcept { return attempts_; }
  bool retryable() const noexcept { return retryable_; }

 private:
  std::string endpoint_;
  int attempts_;
  bool retryable_;
};

class TimeoutError : public TransportError {
 public:
  using TransportError::TransportError;
};

// A pipeline step failed; partial artifacts are left in place.
class PipelineError : public Error {
 public:
  PipelineError(std::string step, const std::string& what)
      : Error("step '" + step + "' failed: " + what), step_(std::move(step)) {}
  const std::string& step() const noexcept { return step_; }

 private:
  std::string step_;
};

}  // namespace tracklist
