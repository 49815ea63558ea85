#pragma once

#include <string>
#include <vector>

#include "msdd/dynamics.hpp"

namespace msdd::io {

/// A numeric table with named columns.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Column index by name; throws SchemaError when absent.
  std::size_t column(const std::string& name) const;
  std::vector<double> values(const std::string& name) const;
};

/// Comma-separated, one header line, every value printed with %.17g so that
/// reading it back reproduces the double exactly.
std::string format_csv(const Table& t);
Table diagnostics_table(const std::vector<DiagnosticsRow>& rows);

void write_csv(const std::string& path, const Table& t);
void write_diagnostics_csv(const std::string& path, const std::vector<DiagnosticsRow>& rows);

/// Throws SchemaError for an empty file, a missing header or ragged rows,
/// FormatError for unparsable numbers.
Table parse_csv(const std::string& text);
Table read_csv(const std::string& path);

}  // namespace msdd::io
