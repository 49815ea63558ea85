#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "msdd/io/config.hpp"
#include "msdd/io/csv.hpp"
#include "msdd/io/plots.hpp"
#include "msdd/io/report.hpp"
#include "msdd/io/snapshot.hpp"
#include "support.hpp"

using namespace msdd;
using namespace msdd::io;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("msdd_test_io_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

State random_state(const DomainPtr& d, std::uint64_t seed) {
  return State(testing::random_vector(d, Basis::MaxwellVector, seed), testing::random_vector(d, Basis::MaxwellVector, seed + 1),
               testing::random_complex(d, seed + 2), 0.1 * static_cast<double>(seed) + 1.0 / 3.0);
}

bool bit_equal(const State& a, const State& b) {
  auto same = [](auto x, auto y) {
    return x.size() == y.size() && std::memcmp(x.data(), y.data(), sizeof(*x.data()) * x.size()) == 0;
  };
  bool ok = std::memcmp(&a.t, &b.t, sizeof(double)) == 0 && same(a.psi.coeffs(), b.psi.coeffs());
  for (int c = 0; c < 3; ++c) ok = ok && same(a.A[c], b.A[c]) && same(a.Pi[c], b.Pi[c]);
  return ok;
}

}  // namespace

TEST_CASE("config: minimal text gives the documented defaults") {
  const RunConfig c = parse_config("");
  const RunConfig d;
  CHECK(c.L == d.L);
  CHECK(c.N == std::array<int, 3>{8, 8, 8});
  CHECK(c.params.sigma == 0.0);
  CHECK(c.params.dt == 1e-3);
  CHECK(c.params.coulomb);
  CHECK_FALSE(c.params.dealias);
  CHECK(c.potential.name == "constant");
  CHECK(c.pump.terms.empty());
  CHECK(c.output_dir == "out");
  CHECK(c.record_every == 10);
  CHECK(c.estimates.radii == std::vector<double>{0.1, 1.0, 10.0});
}

TEST_CASE("config: sections, lists and repeated pump terms") {
  const RunConfig c = parse_config(
      "# comment\n[domain]\nL = 1, 2, 0.5\nN = 4, 6, 5\n[params]\nsigma = 0.2 ; trailing\neps=0.1\ngamma = 0.3\n"
      "coulomb = false\nphi_base = alternative\n[pump]\nterm = 0,1,1, 1,0,0, 0.5, 2, 0\nterm = 1,0,1, 0,1,0, 0.1, 0, 0\n"
      "[potential]\npreset = well\ndepth = 3\n[estimates]\ngrids = 4, 6\n");
  CHECK(c.L == std::array<double, 3>{1.0, 2.0, 0.5});
  CHECK(c.N == std::array<int, 3>{4, 6, 5});
  CHECK(c.params.sigma == 0.2);
  CHECK_FALSE(c.params.coulomb);
  CHECK(c.params.phi_uses_paper_hamiltonian);
  REQUIRE(c.pump.terms.size() == 2);
  CHECK(c.pump.terms[1].mode == std::array<int, 3>{1, 0, 1});
  CHECK(c.pump.terms[0].omega == 2.0);
  CHECK(c.potential.depth == 3.0);
  CHECK(c.estimates.spectrum_grids == std::vector<int>{4, 6});
}

TEST_CASE("config: syntax errors carry the line number") {
  CHECK(config_error("[domain]\nL = 1\nthis line has no equals\n").rfind("line 3:", 0) == 0);
  CHECK(config_error("\n[nowhere]\n").rfind("line 2:", 0) == 0);
  CHECK(config_error("[domain]\nwidth = 3\n").rfind("line 2:", 0) == 0);
  CHECK(config_error("[params]\nsigma = 1\nsigma = 2\n").rfind("line 3:", 0) == 0);
  CHECK(config_error("[params]\nsigma = fast\n").rfind("line 2:", 0) == 0);
  CHECK(config_error("[pump]\nterm = 1, 2, 3\n").rfind("line 2:", 0) == 0);
  CHECK(config_error("[domain\n").rfind("line 1:", 0) == 0);
}

TEST_CASE("config: validation names the key and the violated condition") {
  const std::string g = config_error("[params]\ngamma = -1\n");
  CHECK(g.find("params.gamma") != std::string::npos);
  CHECK(g.find("nonnegative") != std::string::npos);
  CHECK(config_error("[potential]\npreset = constant\nvalue = -2\n").find("positivity of phi") != std::string::npos);
  CHECK(config_error("[domain]\nN = 0\n").find("domain") != std::string::npos);
  CHECK(config_error("[pump]\nterm = 9,9,9, 1,0,0, 1, 0, 0\n").find("pump.term") != std::string::npos);
}

TEST_CASE("config: dt above the RK4 stability bound reports the bound") {
  // unit cube, N = 8, eps = 0: kappa_max^2 = 3 (8 pi)^2, bound = 0.5 * 2.8 / (kappa_max^2 / 2)
  const double kmax2 = 3.0 * 64.0 * std::numbers::pi * std::numbers::pi;
  const double bound = 0.5 * 2.8 / std::max(0.5 * kmax2, std::sqrt(kmax2));
  std::ostringstream expect;
  expect.precision(6);
  expect << "dt <= " << bound;
  const std::string msg = config_error("[params]\ndt = 2e-3\n");
  CHECK(msg.find("params.dt") != std::string::npos);
  CHECK(msg.find(expect.str()) != std::string::npos);
  CHECK_NOTHROW(parse_config("[params]\ndt = 1.4e-3\n"));
}

TEST_CASE("config: output directory override") {
  RunConfig c;
  c.output_dir = "here";
  unsetenv("MSDD_OUTPUT_DIR");
  CHECK(output_directory(c) == "here");
  setenv("MSDD_OUTPUT_DIR", "/tmp/elsewhere", 1);
  CHECK(output_directory(c) == "/tmp/elsewhere");
  unsetenv("MSDD_OUTPUT_DIR");
}

TEST_CASE("csv: 17 significant digits round-trip every double") {
  Table t;
  t.header = {"a", "b", "c"};
  t.rows = {{1.0 / 3.0, -std::numbers::pi * 1e-300, 6.02214076e23},
            {0.1 + 0.2, std::nextafter(1.0, 2.0), -0.0},
            {1e-320, 123456789.123456789, std::numeric_limits<double>::max()}};
  const Table back = parse_csv(format_csv(t));
  CHECK(back.header == t.header);
  REQUIRE(back.rows.size() == t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    for (std::size_t j = 0; j < 3; ++j) CHECK(std::memcmp(&back.rows[i][j], &t.rows[i][j], sizeof(double)) == 0);
  }
  CHECK(back.values("b")[1] == std::nextafter(1.0, 2.0));
  CHECK_THROWS_AS(back.column("zzz"), SchemaError);
}

TEST_CASE("csv: diagnostics header order and schema errors") {
  DiagnosticsRow r;
  r.t = 0.5;
  r.X_norm2 = 2.0;
  const Table t = diagnostics_table({r});
  CHECK(format_csv(t).rfind(
            "t,Q,E,Ec,H_alt,Phi,grad_A,Pi_norm,psi_H1,div_A,boundary_residual,X_norm2\n", 0) == 0);
  CHECK(t.values("X_norm2")[0] == 2.0);
  CHECK_THROWS_AS(parse_csv(""), SchemaError);
  CHECK_THROWS_AS(parse_csv("a,b\n1,2\n3\n"), SchemaError);
  CHECK_THROWS_AS(parse_csv("a,b\n1,x\n"), FormatError);
}

TEST_CASE("snapshot: round trip is bit-exact and the layout is as documented") {
  const DomainPtr d = BoxDomain::make({1.0, 1.3, 0.7}, {3, 4, 2});
  const State s = random_state(d, 4);
  const auto bytes = encode_snapshot(s);
  // header 4 + 1 + 12 + 8, then 3 + 3 vector component arrays and two scalar arrays
  std::size_t count = 2 * static_cast<std::size_t>(s.psi.coeffs().size());
  for (int c = 0; c < 3; ++c) count += static_cast<std::size_t>(s.A[c].size() + s.Pi[c].size());
  CHECK(bytes.size() == 25 + 8 * count);
  CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "MSW1");
  CHECK(bytes[4] == kSnapshotVersion);
  CHECK(bytes[5] == 3);
  CHECK(bytes[9] == 4);
  CHECK(bytes[13] == 2);
  double t = 0.0;
  std::memcpy(&t, bytes.data() + 17, 8);  // little-endian host
  CHECK(t == s.t);
  double a0 = 0.0;
  std::memcpy(&a0, bytes.data() + 25, 8);
  CHECK(a0 == s.A[0](0));

  CHECK(bit_equal(decode_snapshot(bytes, d), s));
  const fs::path dir = scratch("snapshot");
  save_snapshot((dir / "s.msw").string(), s);
  CHECK(bit_equal(load_snapshot((dir / "s.msw").string(), d), s));
  CHECK(snapshot_dims((dir / "s.msw").string()) == std::array<int, 3>{3, 4, 2});
}

TEST_CASE("snapshot: format, corruption and dimension errors") {
  const DomainPtr d = BoxDomain::make({1.0, 1.0, 1.0}, {3, 3, 3});
  auto bytes = encode_snapshot(random_state(d, 9));
  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  CHECK_THROWS_AS(decode_snapshot(bad_magic, d), FormatError);
  auto bad_version = bytes;
  bad_version[4] = 2;
  CHECK_THROWS_AS(decode_snapshot(bad_version, d), FormatError);
  auto truncated = bytes;
  truncated.resize(truncated.size() - 3);
  CHECK_THROWS_AS(decode_snapshot(truncated, d), CorruptionError);
  truncated.resize(10);
  CHECK_THROWS_AS(decode_snapshot(truncated, d), CorruptionError);
  auto longer = bytes;
  longer.push_back(0);
  CHECK_THROWS_AS(decode_snapshot(longer, d), CorruptionError);
  CHECK_THROWS_AS(decode_snapshot(bytes, BoxDomain::make({1.0, 1.0, 1.0}, {3, 3, 4})), DimensionError);
}

TEST_CASE("plots: three scripts per diagnostics CSV with relative paths") {
  const fs::path dir = scratch("plots");
  std::vector<DiagnosticsRow> rows;
  for (int i = 0; i < 20; ++i) {
    DiagnosticsRow r;
    r.t = 0.1 * i;
    r.Q = std::exp(-r.t);
    r.Phi = 3.0 * std::exp(-r.t) + 1.0;
    r.X_norm2 = 2.0 + std::exp(-r.t);
    rows.push_back(r);
  }
  write_diagnostics_csv((dir / "run" / "diagnostics.csv").string(), rows);
  const auto written = emit_plots((dir / "run" / "diagnostics.csv").string(), (dir / "figs").string());
  REQUIRE(written.size() == 3);
  for (const char* name : {"charge.gp", "lyapunov.gp", "state_norm.gp"}) {
    const std::string text = slurp(dir / "figs" / name);
    CHECK(text.find("'../run/diagnostics.csv'") != std::string::npos);
    CHECK(text.find(dir.string()) == std::string::npos);
  }
  CHECK(slurp(dir / "figs" / "lyapunov.gp").find("envelope") != std::string::npos);
}

TEST_CASE("plots: schema errors and the ensemble overlay") {
  const fs::path dir = scratch("plots_err");
  std::ofstream(dir / "empty.csv").close();
  CHECK_THROWS_AS(emit_plots((dir / "empty.csv").string(), dir.string()), SchemaError);
  std::ofstream(dir / "partial.csv") << "t,Q\n0,1\n";
  CHECK_THROWS_AS(emit_plots((dir / "partial.csv").string(), dir.string()), SchemaError);

  std::vector<std::string> csvs;
  for (int i = 0; i < 3; ++i) {
    Table t;
    t.header = {"t", "X_norm2"};
    t.rows = {{0.0, 10.0 * (i + 1)}, {1.0, 1.0}};
    csvs.push_back((dir / ("r" + std::to_string(i) + ".csv")).string());
    write_csv(csvs.back(), t);
  }
  const std::string script = emit_ensemble_plot(csvs, (dir / "figs").string());
  const std::string text = slurp(script);
  for (int i = 0; i < 3; ++i) CHECK(text.find("'../r" + std::to_string(i) + ".csv'") != std::string::npos);
  CHECK_THROWS_AS(emit_ensemble_plot({(dir / "partial.csv").string()}, dir.string()), SchemaError);
}

TEST_CASE("report: verdict, csv rows and summary") {
  Report r;
  r.title = "demo";
  Check a;
  a.name = "first";
  a.statement = "x <= 1";
  a.measured = {{"x", 0.5}, {"y", 2.0}};
  a.pass = true;
  r.checks.push_back(a);
  CHECK(r.pass());
  const std::string csv = report_csv(r);
  CHECK(csv.rfind("check,quantity,value,pass\n", 0) == 0);
  CHECK(csv.find("first,x,0.5,1") != std::string::npos);
  Check b = a;
  b.name = "second";
  b.pass = false;
  r.checks.push_back(b);
  CHECK_FALSE(r.pass());
  const std::string text = report_summary(r);
  CHECK(text.find("[FAIL] second") != std::string::npos);
  CHECK(text.find("x <= 1") != std::string::npos);
  const fs::path dir = scratch("report");
  write_report(r, dir.string(), "demo");
  CHECK(fs::exists(dir / "demo.csv"));
  CHECK(fs::exists(dir / "demo.txt"));
}
