#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace harpioneer {

/// Base of every error raised by the library. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration: unknown ids, bad parameters, missing credentials.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what);

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class DatasetError : public Error {
 public:
  using Error::Error;
};

class SegmentationError : public Error {
 public:
  using Error::Error;
};

class WindowTooShortError : public Error {
 public:
  using Error::Error;
};

class TrainingError : public Error {
 public:
  using Error::Error;
};

/// Feature schema of a prediction request does not match the trained model.
class SchemaMismatchError : public Error {
 public:
  SchemaMismatchError(std::vector<std::string> missing, std::vector<std::string> extra);

  const std::vector<std::string>& missing() const noexcept { return missing_; }
  const std::vector<std::string>& extra() const noexcept { return extra_; }

 private:
  std::vector<std::string> missing_;
  std::vector<std::string> extra_;
};

class UnresolvedNameError : public Error {
 public:
  explicit UnresolvedNameError(std::string name);

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class AmbiguousNameError : public Error {
 public:
  AmbiguousNameError(std::string name, std::vector<std::string> candidates);

  const std::string& name() const noexcept { return name_; }
  const std::vector<std::string>& candidates() const noexcept { return candidates_; }

 private:
  std::string name_;
  std::vector<std::string> candidates_;
};

class PromptError : public Error {
 public:
  using Error::Error;
};

class CassetteMissError : public Error {
 public:
  explicit CassetteMissError(std::string fingerprint);

  const std::string& fingerprint() const noexcept { return fingerprint_; }

 private:
  std::string fingerprint_;
};

class TransportError : public Error {
 public:
  TransportError(int status, const std::string& body_excerpt);

  int status() const noexcept { return status_; }

 private:
  int status_;
};

class TimeoutError : public Error {
 public:
  using Error::Error;
};

/// Wraps an error raised inside one pipeline stage ("ingest", "featurize", ...).
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what);

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace harpioneer
