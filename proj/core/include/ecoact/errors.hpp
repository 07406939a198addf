// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <stdexcept>
#include <string>

namespace ecoact {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Corpus and configuration ingestion.
class ParseError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  ValidationError(std::string subject, const std::string& what)
      : Error(what), subject_(std::move(subject)) {}
  /// The offending tool name (or other identifier).
  const std::string& subject() const noexcept { return subject_; }

 private:
  std::string subject_;
};

class UnknownTool : public Error {
 public:
  explicit UnknownTool(std::string name)
      : Error("unknown tool: " + name), name_(std::move(name)) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class CorpusNotFound : public ConfigError {
 public:
  explicit CorpusNotFound(const std::string& path) : ConfigError("corpus not found: " + path) {}
};

// Cost accounting.
class GapError : public Error {
 public:
  using Error::Error;
};

// Backends.
class BackendError : public Error {
 public:
  using Error::Error;
};

class AuthError : public BackendError {
 public:
  using BackendError::BackendError;
};

class RateLimited : public BackendError {
 public:
  RateLimited(const std::string& what, std::chrono::milliseconds retry_after)
      : BackendError(what), retry_after_(retry_after) {}
  std::chrono::milliseconds retry_after() const noexcept { return retry_after_; }

 private:
  std::chrono::milliseconds retry_after_;
};

class TransportError : public BackendError {
 public:
  using BackendError::BackendError;
};

class SchemaError : public BackendError {
 public:
  using BackendError::BackendError;
};

class ScriptExhausted : public BackendError {
 public:
  using BackendError::BackendError;
};

// Evaluation.
class EmptyDenominator : public Error {
 public:
  using Error::Error;
};

class JudgeSchemaError : public Error {
 public:
  using Error::Error;
};

class ZeroRoster : public Error {
 public:
  using Error::Error;
};

}  // namespace ecoact
