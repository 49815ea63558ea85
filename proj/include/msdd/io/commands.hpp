#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "msdd/io/config.hpp"
#include "msdd/io/report.hpp"

namespace msdd::io {

/// Process exit status of every command.
enum ExitCode : int { kPass = 0, kCheckFailed = 1, kConfigError = 2, kDivergence = 3 };

/// Runs the configured simulation; writes diagnostics.csv and, when
/// snapshot_every > 0, snapshot_<step>.msw into the output directory.
int cmd_simulate(const RunConfig& cfg, std::ostream& log);

/// Suites: charge, conservation, lyapunov, absorbing, gradcheck.
const std::vector<std::string>& verify_suites();
Report run_suite(const RunConfig& cfg, const std::string& suite);
int cmd_verify(const RunConfig& cfg, const std::string& suite, std::ostream& log);

/// Tasks: lambda-min, equivalence, relative-bound.
const std::vector<std::string>& spectrum_tasks();
Report run_spectrum(const RunConfig& cfg, const std::string& task);
int cmd_spectrum(const RunConfig& cfg, const std::string& task, std::ostream& log);

/// Loads a snapshot and writes it back out (bit-exact copy through the
/// decoder). With a config, the stored grid must match its domain.
int cmd_snapshot(const std::string& in, const std::string& out, const RunConfig* cfg, std::ostream& log);

/// Emits plot scripts for one diagnostics CSV, or one overlay for several.
int cmd_plots(const std::vector<std::string>& csv_paths, const std::string& out_dir, std::ostream& log);

/// Runs `body`, mapping library errors onto exit codes and printing them.
template <typename F>
int guarded(std::ostream& log, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const OracleInvalid& e) {
    log << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const DimensionError& e) {
    log << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const DivergenceError& e) {
    log << "divergence at t = " << e.time() << ": " << e.what() << "\n";
    return kDivergence;
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return kCheckFailed;
  }
}

}  // namespace msdd::io
