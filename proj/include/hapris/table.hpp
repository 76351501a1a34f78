#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "hapris/config.hpp"

namespace hapris::cli {

/// Empty cells are written as an empty CSV field or JSON null.
using Cell = std::variant<std::monostate, double, std::int64_t, std::string>;

/// Result table. Every row is stamped with the config hash and seed on output.
struct Table {
  /// Versioned column schema, e.g. "hapris.coverage/1".
  std::string schema;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

struct Provenance {
  std::string config_hash;
  std::uint64_t seed = 0;
};

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

void write_csv(std::ostream& os, const Table& t, const Provenance& prov);
void write_json(std::ostream& os, const Table& t, const Provenance& prov);
void write_table(std::ostream& os, const Table& t, const Provenance& prov, OutputFormat format);

}  // namespace hapris::cli
