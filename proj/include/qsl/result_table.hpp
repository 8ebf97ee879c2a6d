#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace qsl {

enum class ColumnType { Real, Integer, Text, Boolean };

using Cell = std::variant<double, std::int64_t, std::string, bool>;

struct Column {
  std::string name;
  ColumnType type = ColumnType::Real;

  bool operator==(const Column&) const = default;
};

/// Typed rows with fixed column order. Metadata keys are emitted sorted.
class ResultTable {
 public:
  ResultTable() = default;
  explicit ResultTable(std::vector<Column> columns) : columns_(std::move(columns)) {}

  const std::vector<Column>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }
  std::map<std::string, std::string>& metadata() { return metadata_; }
  const std::map<std::string, std::string>& metadata() const { return metadata_; }

  /// Throws Internal if the row length or any cell type disagrees with the schema.
  void add_row(std::vector<Cell> row);
  /// Appends a text column holding `value` on every existing row.
  void add_constant_column(const std::string& name, const std::string& value);

  int column_index(const std::string& name) const;
  const Cell& at(std::size_t row, const std::string& column) const;
  double real(std::size_t row, const std::string& column) const;
  bool boolean(std::size_t row, const std::string& column) const;

  bool operator==(const ResultTable&) const;

 private:
  std::vector<Column> columns_;
  std::vector<std::vector<Cell>> rows_;
  std::map<std::string, std::string> metadata_;
};

enum class OutputFormat { Csv, Json };

OutputFormat parse_format(const std::string& name);

/// Shortest decimal that reads back to the same double.
std::string format_real(double x);

void emit(const ResultTable& table, OutputFormat format, std::ostream& out);
/// Writes to `path`; throws IoError when the file cannot be written.
void emit(const ResultTable& table, OutputFormat format, const std::string& path);

std::string to_csv(const ResultTable& table);
std::string to_json(const ResultTable& table);
/// Inverse of to_json.
ResultTable table_from_json(const std::string& text);

}  // namespace qsl
