#pragma once

#include <string>
#include <vector>

namespace msdd::io {

/// Writes gnuplot scripts into `out_dir`. Each script references its CSV by
/// a path relative to `out_dir` and renders a PNG of the same stem when run
/// with gnuplot; nothing is plotted here.
///
/// Single diagnostics CSV: charge.gp (Q), lyapunov.gp (Phi with the fitted
/// envelope when the series is long enough) and state_norm.gp (||X||^2).
/// Returns the written paths. Throws SchemaError for an empty CSV or
/// missing columns.
std::vector<std::string> emit_plots(const std::string& csv_path, const std::string& out_dir);

/// One overlay script plotting ||X||^2 from every CSV on log axes.
std::string emit_ensemble_plot(const std::vector<std::string>& csv_paths, const std::string& out_dir);

}  // namespace msdd::io
