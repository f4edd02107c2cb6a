#include "output.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>
#include <stdexcept>

#include "purity/errors.hpp"
#include "purity/rational.hpp"

namespace purity::cli {

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::Csv;
  if (name == "jsonl") return Format::Jsonl;
  throw ValidationError("--format must be csv or jsonl, got '" + name + "'");
}

std::string extension(Format format) { return format == Format::Csv ? ".csv" : ".jsonl"; }

Table::Table(std::string name, std::vector<std::string> columns)
    : name_(std::move(name)), columns_(std::move(columns)) {}

void Table::meta(const std::string& key, const std::string& value) { meta_.emplace_back(key, value); }

void Table::row(std::vector<Cell> cells) {
  if (cells.size() != columns_.size()) throw std::logic_error("row width does not match the table header");
  rows_.push_back(std::move(cells));
  extras_.emplace_back(nlohmann::json::object());
}

void Table::attach(const std::string& key, nlohmann::json value) {
  if (extras_.empty()) throw std::logic_error("attach called before row");
  extras_.back()[key] = std::move(value);
}

std::string Table::schema() const { return "purity." + name_ + ".v" + kSchemaVersion; }

namespace {

std::string cell_text(const Cell& cell) {
  if (const auto* s = std::get_if<std::string>(&cell)) return *s;
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  return fmt_exact(std::get<double>(cell));
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

nlohmann::json cell_json(const Cell& cell) {
  if (const auto* s = std::get_if<std::string>(&cell)) {
    // Numeric text (preformatted decimals) is emitted as a JSON number.
    auto parsed = nlohmann::json::parse(*s, nullptr, false);
    return parsed.is_number() ? parsed : nlohmann::json(*s);
  }
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return *i;
  return std::get<double>(cell);
}

}  // namespace

void Table::write(std::ostream& os, Format format) const {
  if (format == Format::Csv) {
    os << "# schema=" << schema() << "\n";
    for (const auto& [k, v] : meta_) os << "# " << k << "=" << v << "\n";
    for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << columns_[i];
    os << "\n";
    for (const auto& r : rows_) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_escape(cell_text(r[i]));
      os << "\n";
    }
    return;
  }
  nlohmann::ordered_json header{{"schema", schema()}};
  for (const auto& [k, v] : meta_) header[k] = v;
  os << header.dump() << "\n";
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < columns_.size(); ++i) obj[columns_[i]] = cell_json(rows_[r][i]);
    for (const auto& [k, v] : extras_[r].items()) obj[k] = v;
    os << obj.dump() << "\n";
  }
}

std::string fmt_exact(double value) { return to_decimal(value); }

std::string fmt_error(double std_error) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2g", std_error);
  return buf;
}

std::string fmt_mc(double value, double std_error) {
  if (!(std_error > 0.0) || !std::isfinite(std_error)) return fmt_exact(value);
  const int places = std::clamp(1 - static_cast<int>(std::floor(std::log10(std_error))), 0, 17);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", places, value);
  return buf;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx, bytes.data(), bytes.size()) != 1 || EVP_DigestFinal_ex(ctx, digest, &length) != 1) {
    EVP_MD_CTX_free(ctx);
    throw std::runtime_error("SHA-256 computation failed");
  }
  EVP_MD_CTX_free(ctx);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return sha256_hex(bytes);
}

}  // namespace purity::cli
