#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "msdd/io/commands.hpp"
#include "msdd/io/csv.hpp"
#include "msdd/io/snapshot.hpp"

using namespace msdd;
using namespace msdd::io;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("msdd_test_cli_" + name);
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

const char* kSmall =
    "[domain]\nL = 1\nN = 4\n"
    "[params]\nsigma = 0.1\neps = 0.1\ngamma = 0.1\neta = 0.05\ndt = 2e-3\nT = 0.2\nseed = 3\n"
    "[potential]\npreset = well\n"
    "[pump]\nterm = 0,1,1, 1,0,0, 0.3, 2, 0\n"
    "[initial]\nkind = random\ncharge = 1\nA_norm = 0.5\nPi_norm = 0.5\nmax_mode = 2\n"
    "[output]\nrecord_every = 5\nsnapshot_every = 50\n";

RunConfig small_config(const fs::path& out, const std::string& extra = "") {
  RunConfig c = parse_config(std::string(kSmall) + extra);
  c.output_dir = out.string();
  return c;
}

int run_binary(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(MSDD_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("simulate: T = 0 writes the header and one row") {
  unsetenv("MSDD_OUTPUT_DIR");
  const fs::path dir = scratch("t0");
  RunConfig c = small_config(dir);
  c.params.T = 0.0;
  std::ostringstream log;
  CHECK(cmd_simulate(c, log) == kPass);
  const Table t = read_csv((dir / "diagnostics.csv").string());
  CHECK(t.header == diagnostics_columns());
  CHECK(t.rows.size() == 1);
  CHECK(t.values("t")[0] == 0.0);
}

TEST_CASE("simulate: identical config gives a bit-identical CSV, snapshots on schedule") {
  unsetenv("MSDD_OUTPUT_DIR");
  const fs::path a = scratch("repro_a"), b = scratch("repro_b");
  std::ostringstream log;
  REQUIRE(cmd_simulate(small_config(a), log) == kPass);
  REQUIRE(cmd_simulate(small_config(b), log) == kPass);
  const std::string csv = slurp(a / "diagnostics.csv");
  CHECK(csv.size() > 100);
  CHECK(csv == slurp(b / "diagnostics.csv"));
  CHECK(fs::exists(a / "snapshot_0.msw"));
  CHECK(fs::exists(a / "snapshot_50.msw"));
  CHECK(fs::exists(a / "snapshot_100.msw"));
  CHECK(slurp(a / "snapshot_100.msw") == slurp(b / "snapshot_100.msw"));
  const DomainPtr d = BoxDomain::make({1.0, 1.0, 1.0}, {4, 4, 4});
  CHECK(load_snapshot((a / "snapshot_50.msw").string(), d).t == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("simulate: a damped run loses charge") {
  unsetenv("MSDD_OUTPUT_DIR");
  const fs::path dir = scratch("damped");
  std::ostringstream log;
  REQUIRE(cmd_simulate(small_config(dir), log) == kPass);
  const auto Q = read_csv((dir / "diagnostics.csv").string()).values("Q");
  CHECK(Q.back() < Q.front());
  for (std::size_t i = 1; i < Q.size(); ++i) CHECK(Q[i] <= Q[i - 1] + 1e-10);
}

TEST_CASE("simulate: MSDD_OUTPUT_DIR redirects output") {
  const fs::path dir = scratch("env");
  RunConfig c = small_config(scratch("env_unused"));
  c.params.T = 0.0;
  setenv("MSDD_OUTPUT_DIR", dir.string().c_str(), 1);
  std::ostringstream log;
  CHECK(cmd_simulate(c, log) == kPass);
  unsetenv("MSDD_OUTPUT_DIR");
  CHECK(fs::exists(dir / "diagnostics.csv"));
}

TEST_CASE("verify: gradcheck and charge suites pass and write reports") {
  unsetenv("MSDD_OUTPUT_DIR");
  const fs::path dir = scratch("verify");
  std::ostringstream log;
  CHECK(cmd_verify(small_config(dir), "gradcheck", log) == kPass);
  CHECK(fs::exists(dir / "verify_gradcheck.csv"));
  CHECK(fs::exists(dir / "verify_gradcheck.txt"));

  // single-mode oracle configuration: order >= 3.5 and the closed form
  RunConfig c = parse_config(
      "[domain]\nN = 4\n[params]\neps = 0.1\ngamma = 0.1\ndt = 2e-3\nT = 0.5\ncoulomb = false\n"
      "[initial]\nkind = ground\ncharge = 1\n");
  c.output_dir = dir.string();
  const Report r = run_suite(c, "charge");
  CHECK(r.pass());
  REQUIRE(r.checks.size() == 3);
  CHECK(r.checks[2].note.empty());
}

TEST_CASE("verify: conservation refuses damped configurations") {
  std::ostringstream log;
  CHECK(guarded(log, [&] { return cmd_verify(small_config(scratch("cons")), "conservation", log); }) == kConfigError);
  CHECK(log.str().find("sigma = eps = gamma = 0") != std::string::npos);
}

TEST_CASE("spectrum: lambda-min, equivalence and relative-bound at small size") {
  unsetenv("MSDD_OUTPUT_DIR");
  const fs::path dir = scratch("spectrum");
  RunConfig c = parse_config("[domain]\nN = 4\n[estimates]\nensemble = 2\nA_H1 = 10\ngrids = 3\n");
  c.output_dir = dir.string();
  std::ostringstream log;
  CHECK(cmd_spectrum(c, "lambda-min", log) == kPass);
  CHECK(log.str().find("lambda_min_over_pi2 = 2\n") != std::string::npos);
  const Report eq = run_spectrum(c, "equivalence");
  CHECK(eq.pass());
  CHECK(eq.checks[0].measured[0].second == 1.0);
  CHECK(eq.checks[0].measured[1].second == 1.0);
  const Report rb = run_spectrum(c, "relative-bound");
  CHECK(rb.pass());
  CHECK(rb.checks[0].measured[0].second == 0.0);
  CHECK_THROWS_AS(run_spectrum(c, "nope"), ConfigError);
}

TEST_CASE("binary: exit status contract") {
  const fs::path dir = scratch("binary");
  std::ofstream(dir / "ok.ini") << kSmall << "directory = " << (dir / "out").string() << "\n";
  std::ofstream(dir / "bad.ini") << "[params]\ngamma = -1\n";
  std::ofstream(dir / "blowup.ini") << "[domain]\nN = 4\n[params]\ndt = 2e-3\nT = 0.1\n"
                                    << "[initial]\nkind = scaled\nscale = 1e200\n"
                                    << "[output]\ndirectory = " << (dir / "blowup").string() << "\n";
  const fs::path log = dir / "log.txt";
  CHECK(run_binary("simulate " + (dir / "ok.ini").string(), log) == 0);
  CHECK(fs::exists(dir / "out" / "diagnostics.csv"));
  CHECK(run_binary("verify " + (dir / "ok.ini").string() + " --suite gradcheck", log) == 0);
  CHECK(run_binary("simulate " + (dir / "bad.ini").string(), log) == 2);
  CHECK(slurp(log).find("params.gamma") != std::string::npos);
  CHECK(run_binary("simulate " + (dir / "missing.ini").string(), log) == 2);
  CHECK(run_binary("verify " + (dir / "ok.ini").string() + " --suite unknown", log) == 2);
  CHECK(run_binary("simulate " + (dir / "blowup.ini").string(), log) == 3);
  CHECK(fs::exists(dir / "blowup" / "diagnostics.csv"));
  CHECK(run_binary("snapshot --in " + (dir / "out" / "snapshot_50.msw").string() + " --out " +
                       (dir / "copy.msw").string() + " --config " + (dir / "ok.ini").string(),
                   log) == 0);
  CHECK(slurp(dir / "copy.msw") == slurp(dir / "out" / "snapshot_50.msw"));
  std::ofstream(dir / "other.ini") << "[domain]\nN = 5\n";
  CHECK(run_binary("snapshot --in " + (dir / "copy.msw").string() + " --out " + (dir / "x.msw").string() +
                       " --config " + (dir / "other.ini").string(),
                   log) == 2);
  CHECK(run_binary("plots --csv " + (dir / "out" / "diagnostics.csv").string() + " --out " + (dir / "figs").string(),
                   log) == 0);
  CHECK(fs::exists(dir / "figs" / "charge.gp"));
}
