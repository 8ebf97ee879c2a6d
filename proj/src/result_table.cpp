#include "qsl/result_table.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "qsl/errors.hpp"

namespace qsl {

namespace {

bool matches(const Cell& cell, ColumnType type) {
  switch (type) {
    case ColumnType::Real: return std::holds_alternative<double>(cell);
    case ColumnType::Integer: return std::holds_alternative<std::int64_t>(cell);
    case ColumnType::Text: return std::holds_alternative<std::string>(cell);
    case ColumnType::Boolean: return std::holds_alternative<bool>(cell);
  }
  return false;
}

const char* type_name(ColumnType type) {
  switch (type) {
    case ColumnType::Real: return "real";
    case ColumnType::Integer: return "integer";
    case ColumnType::Text: return "text";
    case ColumnType::Boolean: return "boolean";
  }
  return "?";
}

ColumnType type_from_name(const std::string& name) {
  if (name == "real") return ColumnType::Real;
  if (name == "integer") return ColumnType::Integer;
  if (name == "text") return ColumnType::Text;
  if (name == "boolean") return ColumnType::Boolean;
  fail(ErrorKind::ParseError, "unknown column type '" + name + "'");
}

bool same_cell(const Cell& a, const Cell& b) {
  if (a.index() != b.index()) return false;
  if (const double* x = std::get_if<double>(&a)) {
    const double y = std::get<double>(b);
    return (std::isnan(*x) && std::isnan(y)) || *x == y;
  }
  return a == b;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string render(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) return format_real(v);
        else if constexpr (std::is_same_v<T, std::int64_t>) return std::to_string(v);
        else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        else return csv_field(v);
      },
      cell);
}

}  // namespace

void ResultTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size())
    fail(ErrorKind::Internal, "row has " + std::to_string(row.size()) + " cells, schema has " +
                                  std::to_string(columns_.size()));
  for (std::size_t k = 0; k < row.size(); ++k)
    if (!matches(row[k], columns_[k].type))
      fail(ErrorKind::Internal, "cell type mismatch in column '" + columns_[k].name + "'");
  rows_.push_back(std::move(row));
}

void ResultTable::add_constant_column(const std::string& name, const std::string& value) {
  columns_.push_back({name, ColumnType::Text});
  for (auto& row : rows_) row.emplace_back(value);
}

int ResultTable::column_index(const std::string& name) const {
  for (std::size_t k = 0; k < columns_.size(); ++k)
    if (columns_[k].name == name) return static_cast<int>(k);
  fail(ErrorKind::Internal, "no column named '" + name + "'");
}

const Cell& ResultTable::at(std::size_t row, const std::string& column) const {
  return rows_.at(row).at(column_index(column));
}

double ResultTable::real(std::size_t row, const std::string& column) const { return std::get<double>(at(row, column)); }

bool ResultTable::boolean(std::size_t row, const std::string& column) const { return std::get<bool>(at(row, column)); }

bool ResultTable::operator==(const ResultTable& other) const {
  if (columns_ != other.columns_ || metadata_ != other.metadata_ || rows_.size() != other.rows_.size()) return false;
  for (std::size_t r = 0; r < rows_.size(); ++r)
    for (std::size_t c = 0; c < columns_.size(); ++c)
      if (!same_cell(rows_[r][c], other.rows_[r][c])) return false;
  return true;
}

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  fail(ErrorKind::ValidationError, "format must be csv or json, got '" + name + "'");
}

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string to_csv(const ResultTable& table) {
  std::string out;
  const auto& cols = table.columns();
  for (std::size_t k = 0; k < cols.size(); ++k) out += (k ? "," : "") + csv_field(cols[k].name);
  out += '\n';
  for (const auto& row : table.rows()) {
    for (std::size_t k = 0; k < row.size(); ++k) out += (k ? "," : "") + render(row[k]);
    out += '\n';
  }
  return out;
}

std::string to_json(const ResultTable& table) {
  using nlohmann::json;
  json doc;
  doc["metadata"] = json::object();
  for (const auto& [k, v] : table.metadata()) doc["metadata"][k] = v;
  doc["columns"] = json::array();
  for (const auto& c : table.columns()) doc["columns"].push_back({{"name", c.name}, {"type", type_name(c.type)}});
  doc["rows"] = json::array();
  for (const auto& row : table.rows()) {
    json r = json::array();
    for (const auto& cell : row) {
      std::visit(
          [&r](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            // Non-finite reals have no JSON literal; they travel as strings.
            if constexpr (std::is_same_v<T, double>) {
              if (std::isfinite(v)) r.push_back(v);
              else r.push_back(format_real(v));
            } else {
              r.push_back(v);
            }
          },
          cell);
    }
    doc["rows"].push_back(std::move(r));
  }
  return doc.dump() + "\n";
}

ResultTable table_from_json(const std::string& text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorKind::ParseError, e.what());
  }
  try {
    std::vector<Column> cols;
    for (const auto& c : doc.at("columns")) cols.push_back({c.at("name").get<std::string>(), type_from_name(c.at("type"))});
    ResultTable table(cols);
    for (const auto& [k, v] : doc.at("metadata").items()) table.metadata()[k] = v.get<std::string>();
    for (const auto& r : doc.at("rows")) {
      std::vector<Cell> row;
      for (std::size_t k = 0; k < cols.size(); ++k) {
        const json& v = r.at(k);
        switch (cols[k].type) {
          case ColumnType::Real:
            if (v.is_string()) row.emplace_back(std::stod(v.get<std::string>()));
            else row.emplace_back(v.get<double>());
            break;
          case ColumnType::Integer: row.emplace_back(v.get<std::int64_t>()); break;
          case ColumnType::Text: row.emplace_back(v.get<std::string>()); break;
          case ColumnType::Boolean: row.emplace_back(v.get<bool>()); break;
        }
      }
      table.add_row(std::move(row));
    }
    return table;
  } catch (const json::exception& e) {
    fail(ErrorKind::ParseError, e.what());
  }
}

void emit(const ResultTable& table, OutputFormat format, std::ostream& out) {
  out << (format == OutputFormat::Csv ? to_csv(table) : to_json(table));
}

void emit(const ResultTable& table, OutputFormat format, const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) fail(ErrorKind::IoError, "cannot open '" + path + "' for writing");
  emit(table, format, file);
  if (!file.flush()) fail(ErrorKind::IoError, "write to '" + path + "' failed");
}

}  // namespace qsl
