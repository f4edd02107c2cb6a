#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace purity::cli {

inline constexpr const char* kSchemaVersion = "1";

/// Table cell: text is written verbatim, numbers are preformatted by the caller.
using Cell = std::variant<std::string, std::int64_t, double>;

enum class Format { Csv, Jsonl };

Format parse_format(const std::string& name);
std::string extension(Format format);

/// A result table with a versioned schema tag ("purity.<name>.v1").
///
/// CSV: "# schema=..." comment line, optional "# key=value" metadata lines,
/// a header row, then data rows. JSONL: one header object carrying the schema
/// and metadata, then one object per row.
class Table {
 public:
  Table(std::string name, std::vector<std::string> columns);

  void meta(const std::string& key, const std::string& value);
  void row(std::vector<Cell> cells);
  /// For JSONL only: attach a nested object to the last row.
  void attach(const std::string& key, nlohmann::json value);

  std::string schema() const;
  const std::vector<std::string>& columns() const { return columns_; }
  void write(std::ostream& os, Format format) const;

 private:
  std::string name_;
  std::vector<std::string> columns_;
  std::vector<std::pair<std::string, std::string>> meta_;
  std::vector<std::vector<Cell>> rows_;
  std::vector<nlohmann::json> extras_;
};

/// Fifteen significant digits.
std::string fmt_exact(double value);
/// Decimal places chosen so the value is shown to two significant digits of
/// its standard error; 15 significant digits when the error is zero.
std::string fmt_mc(double value, double std_error);
/// Two significant digits.
std::string fmt_error(double std_error);

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);
std::string sha256_hex(const std::string& bytes);

}  // namespace purity::cli
