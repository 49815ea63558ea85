#include "msdd/io/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "msdd/errors.hpp"

namespace msdd::io {

namespace {

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
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

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write '" + path + "'");
  out << text;
}

}  // namespace

bool Report::pass() const {
  for (const Check& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

std::string report_csv(const Report& r) {
  std::string out = "check,quantity,value,pass\n";
  for (const Check& c : r.checks) {
    const std::string verdict = c.pass ? "1" : "0";
    if (c.measured.empty()) out += csv_field(c.name) + ",,," + verdict + "\n";
    for (const auto& [q, v] : c.measured) out += csv_field(c.name) + "," + csv_field(q) + "," + number(v) + "," + verdict + "\n";
  }
  return out;
}

std::string report_summary(const Report& r) {
  std::string out = r.title + "\n" + std::string(r.title.size(), '=') + "\n\n";
  for (const Check& c : r.checks) {
    out += "[" + std::string(c.pass ? "PASS" : "FAIL") + "] " + c.name + "\n";
    if (!c.statement.empty()) out += "  checks: " + c.statement + "\n";
    for (const auto& [q, v] : c.measured) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.10g", v);
      out += "  " + q + " = " + buf + "\n";
    }
    if (!c.note.empty()) out += "  note: " + c.note + "\n";
    out += "\n";
  }
  out += std::string("overall: ") + (r.pass() ? "PASS" : "FAIL") + "\n";
  return out;
}

void write_report(const Report& r, const std::string& dir, const std::string& stem) {
  std::filesystem::create_directories(dir);
  write_text((std::filesystem::path(dir) / (stem + ".csv")).string(), report_csv(r));
  write_text((std::filesystem::path(dir) / (stem + ".txt")).string(), report_summary(r));
}

}  // namespace msdd::io
