#include "biovalent/errors.hpp"

namespace biovalent {

namespace {

std::string mapping_message(const std::vector<std::string>& ids) {
  std::string msg = "unmapped ledger account(s):";
  for (const auto& id : ids) msg += " \"" + id + "\"";
  return msg;
}

std::string parse_message(const std::string& source, std::size_t row, const std::string& column,
                          const std::string& message) {
  std::string where = source;
  if (row > 0) where += ": row " + std::to_string(row);
  if (!column.empty()) where += (row > 0 ? ", column '" : ": column '") + column + "'";
  return where + ": " + message;
}

}  // namespace

MappingError::MappingError(std::vector<std::string> account_ids)
    : Error(mapping_message(account_ids)), account_ids_(std::move(account_ids)) {}

ParseError::ParseError(std::string source, std::size_t row, std::string column, const std::string& message)
    : Error(parse_message(source, row, column, message)),
      source_(std::move(source)),
      row_(row),
      column_(std::move(column)) {}

}  // namespace biovalent
