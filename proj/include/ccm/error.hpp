#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ccm {

enum class ErrorKind {
  Dimension,
  Config,
  Plan,
  Pattern,
  Singular,
  Underdetermined,
  NotDecodable,
  EnumerationTooLarge,
  Domain,
  OverheadExceeded,
  Io,
};

std::string_view to_string(ErrorKind kind);

/// Base of every error raised by the library. The kind is stable and is what
/// the CLI reports in its machine-readable error stream.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return to_string(kind_); }

 private:
  ErrorKind kind_;
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& message)
      : Error(ErrorKind::Dimension, message) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message)
      : Error(ErrorKind::Config, message) {}
};

class PlanError : public Error {
 public:
  explicit PlanError(const std::string& message)
      : Error(ErrorKind::Plan, message) {}
};

class PatternError : public Error {
 public:
  explicit PatternError(const std::string& message)
      : Error(ErrorKind::Pattern, message) {}
};

class SingularError : public Error {
 public:
  SingularError(const std::string& message, std::size_t rank)
      : Error(ErrorKind::Singular, message), rank_(rank) {}
  std::size_t rank() const noexcept { return rank_; }

 private:
  std::size_t rank_;
};

class UnderdeterminedError : public Error {
 public:
  explicit UnderdeterminedError(const std::string& message)
      : Error(ErrorKind::Underdetermined, message) {}
};

class NotDecodable : public Error {
 public:
  NotDecodable(const std::string& message, std::size_t rank,
               std::size_t unknowns)
      : Error(ErrorKind::NotDecodable, message),
        rank_(rank),
        unknowns_(unknowns) {}
  std::size_t rank() const noexcept { return rank_; }
  std::size_t unknowns() const noexcept { return unknowns_; }
  std::size_t deficit() const noexcept { return unknowns_ - rank_; }

 private:
  std::size_t rank_;
  std::size_t unknowns_;
};

class EnumerationTooLarge : public Error {
 public:
  EnumerationTooLarge(const std::string& message, double patterns)
      : Error(ErrorKind::EnumerationTooLarge, message), patterns_(patterns) {}
  double patterns() const noexcept { return patterns_; }

 private:
  double patterns_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& message)
      : Error(ErrorKind::Domain, message) {}
};

class OverheadExceeded : public Error {
 public:
  OverheadExceeded(const std::string& message, std::size_t received)
      : Error(ErrorKind::OverheadExceeded, message), received_(received) {}
  std::size_t received() const noexcept { return received_; }

 private:
  std::size_t received_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message)
      : Error(ErrorKind::Io, message) {}
};

}  // namespace ccm
