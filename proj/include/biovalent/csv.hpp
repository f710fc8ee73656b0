#pragma once

#include "biovalent/errors.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace biovalent {

/// A header-row CSV file held in memory. UTF-8, comma separated, RFC 4180
/// quoting. Lines starting with '#' before the header are kept as comments;
/// blank lines are skipped. Every data row must have as many fields as the header.
class CsvTable {
 public:
  static CsvTable parse(std::istream& in, std::string source);
  static CsvTable parse(std::string_view text, std::string source);
  static CsvTable read_file(const std::filesystem::path& path);

  const std::string& source() const noexcept { return source_; }
  const std::vector<std::string>& header() const noexcept { return header_; }
  const std::vector<std::string>& comments() const noexcept { return comments_; }
  std::size_t row_count() const noexcept { return rows_.size(); }

  std::optional<std::size_t> find_column(std::string_view name) const;
  /// Throws ParseError when the column is absent.
  std::size_t column(std::string_view name) const;

  /// Every `required` column must be present; any column outside
  /// `required` and `optional` is rejected.
  void require_schema(std::span<const std::string_view> required,
                      std::span<const std::string_view> optional = {}) const;

  /// `row` is 0-based here; errors report it 1-based.
  const std::string& cell(std::size_t row, std::size_t col) const;
  double number(std::size_t row, std::size_t col) const;
  long integer(std::size_t row, std::size_t col) const;
  /// Non-empty cell or ParseError.
  const std::string& text(std::size_t row, std::size_t col) const;

  [[nodiscard]] ParseError error(std::size_t row, std::size_t col, const std::string& message) const;

 private:
  std::string source_;
  std::vector<std::string> comments_;
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Joins fields into one CSV record, quoting where needed. No trailing newline.
std::string csv_record(std::span<const std::string> fields);

}  // namespace biovalent
