#include "hapris/table.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include "hapris/errors.hpp"
#include "json.hpp"

namespace hapris::cli {

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw DomainError("table row width does not match the columns");
  rows.push_back(std::move(row));
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string csv_field(const Cell& c) {
  struct {
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(const std::string& s) const {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string out = "\"";
      for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
      }
      return out + "\"";
    }
  } visit;
  return std::visit(visit, c);
}

nlohmann::json json_value(const Cell& c) {
  struct {
    nlohmann::json operator()(std::monostate) const { return nullptr; }
    nlohmann::json operator()(double v) const {
      return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(format_double(v));
    }
    nlohmann::json operator()(std::int64_t v) const { return v; }
    nlohmann::json operator()(const std::string& s) const { return s; }
  } visit;
  return std::visit(visit, c);
}

}  // namespace

void write_csv(std::ostream& os, const Table& t, const Provenance& prov) {
  os << "# schema=" << t.schema << '\n';
  for (const auto& c : t.columns) os << c << ',';
  os << "config_hash,seed\n";
  for (const auto& row : t.rows) {
    for (const auto& c : row) os << csv_field(c) << ',';
    os << prov.config_hash << ',' << prov.seed << '\n';
  }
}

void write_json(std::ostream& os, const Table& t, const Provenance& prov) {
  nlohmann::ordered_json doc;
  doc["schema"] = t.schema;
  doc["config_hash"] = prov.config_hash;
  doc["seed"] = prov.seed;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json r;
    for (std::size_t i = 0; i < row.size(); ++i) r[t.columns[i]] = json_value(row[i]);
    r["config_hash"] = prov.config_hash;
    r["seed"] = prov.seed;
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  os << doc.dump(2) << '\n';
}

void write_table(std::ostream& os, const Table& t, const Provenance& prov, OutputFormat format) {
  if (format == OutputFormat::csv) {
    write_csv(os, t, prov);
  } else {
    write_json(os, t, prov);
  }
}

}  // namespace hapris::cli
