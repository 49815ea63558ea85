#pragma once

#include <string>
#include <utility>
#include <vector>

namespace msdd::io {

/// One verified statement with its measured quantities.
struct Check {
  std::string name;
  std::string statement;  // the inequality or identity being checked
  std::vector<std::pair<std::string, double>> measured;
  bool pass = false;
  std::string note;
};

struct Report {
  std::string title;
  std::vector<Check> checks;
  bool pass() const;
};

/// CSV with columns check,quantity,value,pass (one row per measured value).
std::string report_csv(const Report& r);
/// Plain-text summary: one block per check with its statement, values and verdict.
std::string report_summary(const Report& r);

/// Writes <dir>/<stem>.csv and <dir>/<stem>.txt.
void write_report(const Report& r, const std::string& dir, const std::string& stem);

}  // namespace msdd::io
