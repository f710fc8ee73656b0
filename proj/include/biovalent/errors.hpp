#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace biovalent {

/// Root of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dimension or index mismatch between tables.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A (region, sector) with zero output that still carries flows or stressors.
class DegenerateSectorError : public Error {
 public:
  DegenerateSectorError(std::size_t position, const std::string& what)
      : Error(what), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// The Leontief system has no non-negative solution (spectral radius >= 1 or singular).
class ProductivityError : public Error {
 public:
  using Error::Error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

class UnitError : public Error {
 public:
  using Error::Error;
};

class ConcordanceError : public Error {
 public:
  using Error::Error;
};

class ConfigurationError : public Error {
 public:
  using Error::Error;
};

class CoverageError : public Error {
 public:
  using Error::Error;
};

class ScenarioError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class SelectionError : public Error {
 public:
  using Error::Error;
};

class CategorizationError : public Error {
 public:
  using Error::Error;
};

/// Ledger accounts without a mapping; carries every offending id.
class MappingError : public Error {
 public:
  explicit MappingError(std::vector<std::string> account_ids);
  const std::vector<std::string>& account_ids() const noexcept { return account_ids_; }

 private:
  std::vector<std::string> account_ids_;
};

/// Tabular input that violates its schema. `row` is the 1-based data row
/// (0 for header-level problems); `column` is the column name when known.
class ParseError : public Error {
 public:
  ParseError(std::string source, std::size_t row, std::string column, const std::string& message);
  const std::string& source() const noexcept { return source_; }
  std::size_t row() const noexcept { return row_; }
  const std::string& column() const noexcept { return column_; }

 private:
  std::string source_;
  std::size_t row_;
  std::string column_;
};

/// Wraps a failure with the pipeline stage it occurred in.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& message)
      : Error(stage + ": " + message), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

/// Collected non-fatal messages.
struct Diagnostics {
  std::vector<std::string> warnings;
  void warn(std::string message) { warnings.push_back(std::move(message)); }
};

}  // namespace biovalent
