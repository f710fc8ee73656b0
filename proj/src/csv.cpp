#include "biovalent/csv.hpp"

#include "biovalent/numfmt.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <sstream>

namespace biovalent {

namespace {

struct RawRecord {
  std::vector<std::string> fields;
  bool blank = true;
};

// Splits the whole document into records. Quoted fields may span lines.
std::vector<RawRecord> split_records(std::string_view text, const std::string& source,
                                     std::vector<std::string>& comments) {
  std::vector<RawRecord> records;
  RawRecord current;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;
  bool at_record_start = true;
  std::size_t line = 1;

  auto end_field = [&] {
    if (!field.empty() || field_was_quoted) current.blank = false;
    current.fields.push_back(std::move(field));
    field.clear();
    field_was_quoted = false;
  };
  auto end_record = [&] {
    end_field();
    if (!current.blank) records.push_back(std::move(current));
    current = RawRecord{};
    at_record_start = true;
  };

  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (at_record_start && !in_quotes && c == '#' && records.empty()) {
      const auto eol = text.find('\n', i);
      std::string_view comment = text.substr(i + 1, eol == std::string_view::npos ? eol : eol - i - 1);
      comments.emplace_back(trim(comment));
      if (eol == std::string_view::npos) return records;
      i = eol;
      ++line;
      continue;
    }
    at_record_start = false;
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty())
          throw ParseError(source, 0, "", "line " + std::to_string(line) + ": stray quote inside field");
        in_quotes = true;
        field_was_quoted = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        break;
      case '\n':
        end_record();
        ++line;
        break;
      default:
        field.push_back(c);
    }
  }
  if (in_quotes) throw ParseError(source, 0, "", "unterminated quoted field");
  end_record();
  return records;
}

}  // namespace

CsvTable CsvTable::parse(std::string_view text, std::string source) {
  CsvTable table;
  table.source_ = std::move(source);
  auto records = split_records(text, table.source_, table.comments_);
  if (records.empty()) throw ParseError(table.source_, 0, "", "missing header row");

  table.header_ = std::move(records.front().fields);
  for (auto& h : table.header_) h = std::string(trim(h));
  for (std::size_t i = 0; i < table.header_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j)
      if (!table.header_[i].empty() && table.header_[i] == table.header_[j])
        throw ParseError(table.source_, 0, table.header_[i], "duplicate column");
  }

  table.rows_.reserve(records.size() - 1);
  for (std::size_t r = 1; r < records.size(); ++r) {
    auto& fields = records[r].fields;
    if (fields.size() != table.header_.size())
      throw ParseError(table.source_, r, "",
                       "expected " + std::to_string(table.header_.size()) + " fields, found " +
                           std::to_string(fields.size()));
    table.rows_.push_back(std::move(fields));
  }
  return table;
}

CsvTable CsvTable::parse(std::istream& in, std::string source) {
  std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse(std::string_view(text), std::move(source));
}

CsvTable CsvTable::read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  return parse(in, path.string());
}

std::optional<std::size_t> CsvTable::find_column(std::string_view name) const {
  auto it = std::find(header_.begin(), header_.end(), name);
  if (it == header_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - header_.begin());
}

std::size_t CsvTable::column(std::string_view name) const {
  if (auto c = find_column(name)) return *c;
  throw ParseError(source_, 0, std::string(name), "missing column");
}

void CsvTable::require_schema(std::span<const std::string_view> required,
                              std::span<const std::string_view> optional) const {
  for (auto name : required) column(name);
  for (const auto& h : header_) {
    const bool known = std::find(required.begin(), required.end(), h) != required.end() ||
                       std::find(optional.begin(), optional.end(), h) != optional.end();
    if (!known) throw ParseError(source_, 0, h, "unknown column");
  }
}

const std::string& CsvTable::cell(std::size_t row, std::size_t col) const { return rows_.at(row).at(col); }

double CsvTable::number(std::size_t row, std::size_t col) const {
  const auto& s = cell(row, col);
  if (auto v = parse_double(s)) return *v;
  throw error(row, col, "not a number: \"" + s + "\"");
}

long CsvTable::integer(std::size_t row, std::size_t col) const {
  const auto& s = cell(row, col);
  if (auto v = parse_long(s)) return *v;
  throw error(row, col, "not an integer: \"" + s + "\"");
}

const std::string& CsvTable::text(std::size_t row, std::size_t col) const {
  const auto& s = cell(row, col);
  if (trim(s).empty()) throw error(row, col, "empty value");
  return s;
}

ParseError CsvTable::error(std::size_t row, std::size_t col, const std::string& message) const {
  return ParseError(source_, row + 1, col < header_.size() ? header_[col] : std::string{}, message);
}

std::string csv_record(std::span<const std::string> fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back(',');
    const auto& f = fields[i];
    if (f.find_first_of(",\"\n\r") == std::string::npos) {
      out += f;
      continue;
    }
    out.push_back('"');
    for (char c : f) {
      if (c == '"') out.push_back('"');
      out.push_back(c);
    }
    out.push_back('"');
  }
  return out;
}

}  // namespace biovalent
