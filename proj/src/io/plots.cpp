#include "msdd/io/plots.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>

#include "msdd/estimates.hpp"
#include "msdd/io/csv.hpp"

namespace msdd::io {

namespace fs = std::filesystem;

namespace {

std::string relative_to(const std::string& file, const std::string& dir) {
  return fs::relative(fs::absolute(file), fs::absolute(dir)).generic_string();
}

std::string quoted(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += '\'';
    out += c;
  }
  return out + "'";
}

std::string preamble(const std::string& png) {
  return "set datafile separator ','\n"
         "set terminal pngcairo size 900,600\n"
         "set output " +
         quoted(png) + "\nset grid\nset xlabel 't'\n";
}

/// 1-based gnuplot column index.
std::string col(const Table& t, const std::string& name) { return std::to_string(t.column(name) + 1); }

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write '" + path + "'");
  out << text;
}

Table load_checked(const std::string& csv_path, std::initializer_list<const char*> needed) {
  const Table t = read_csv(csv_path);
  for (const char* c : needed) (void)t.column(c);
  if (t.rows.empty()) throw SchemaError("CSV '" + csv_path + "' has a header but no rows");
  return t;
}

}  // namespace

std::vector<std::string> emit_plots(const std::string& csv_path, const std::string& out_dir) {
  const Table t = load_checked(csv_path, {"t", "Q", "Phi", "X_norm2"});
  fs::create_directories(out_dir);
  const std::string csv = quoted(relative_to(csv_path, out_dir));
  const std::string tc = col(t, "t");
  std::vector<std::string> written;

  std::string charge = preamble("charge.png") + "set ylabel 'Q'\n";
  charge += "plot " + csv + " skip 1 using " + tc + ":" + col(t, "Q") + " with lines lw 2 title 'Q(t)'\n";
  written.push_back((fs::path(out_dir) / "charge.gp").string());
  write_text(written.back(), charge);

  std::string lyap = preamble("lyapunov.png") + "set ylabel 'Phi'\n";
  std::string envelope;
  if (t.rows.size() >= 10) {
    const LyapunovFit f = lyapunov_fit(t.values("t"), t.values("Phi"));
    lyap += "phi0 = " + number(f.phi0) + "\nbeta = " + number(f.beta) + "\nplateau = " + number(f.plateau) +
            "\nt0 = " + number(f.t0) + "\nenvelope(x) = phi0 * exp(-beta * (x - t0)) + plateau\n";
    envelope = ", envelope(x) with lines dt 2 lw 2 title 'fitted envelope'";
  }
  lyap += "plot " + csv + " skip 1 using " + tc + ":" + col(t, "Phi") + " with lines lw 2 title 'Phi(t)'" + envelope +
          "\n";
  written.push_back((fs::path(out_dir) / "lyapunov.gp").string());
  write_text(written.back(), lyap);

  std::string norm = preamble("state_norm.png") + "set ylabel '||X||^2'\nset logscale y\n";
  norm += "plot " + csv + " skip 1 using " + tc + ":" + col(t, "X_norm2") + " with lines lw 2 title '||X(t)||^2'\n";
  written.push_back((fs::path(out_dir) / "state_norm.gp").string());
  write_text(written.back(), norm);
  return written;
}

std::string emit_ensemble_plot(const std::vector<std::string>& csv_paths, const std::string& out_dir) {
  if (csv_paths.empty()) throw SchemaError("ensemble plot needs at least one CSV");
  fs::create_directories(out_dir);
  std::string s = preamble("ensemble.png") + "set ylabel '||X||^2'\nset logscale y\n";
  std::string plot = "plot ";
  for (std::size_t i = 0; i < csv_paths.size(); ++i) {
    const Table t = load_checked(csv_paths[i], {"t", "X_norm2"});
    if (i) plot += ", \\\n     ";
    plot += quoted(relative_to(csv_paths[i], out_dir)) + " skip 1 using " + col(t, "t") + ":" + col(t, "X_norm2") +
            " with lines lw 2 title " + quoted(fs::path(csv_paths[i]).stem().string());
  }
  s += plot + "\n";
  const std::string path = (fs::path(out_dir) / "ensemble.gp").string();
  write_text(path, s);
  return path;
}

}  // namespace msdd::io
