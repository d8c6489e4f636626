#pragma once

#include <string>

#include "tvd/experiments.hpp"
#include "tvd/partition.hpp"

namespace tvd {

/// %.17g, which round-trips every double. NaN prints as "nan".
std::string format_double(double x);

/// Plain CSV: one line per matrix row, comma-separated decimals, no header.
/// Errors (ArgumentError) name the path, and the 1-based row for malformed or
/// ragged lines. Trailing blank lines are ignored.
ImageMatrix read_matrix_csv(const std::string& path);
ImageMatrix parse_matrix_csv(const std::string& text, const std::string& origin = "<string>");
void write_matrix_csv(const std::string& path, const ImageMatrix& m);
std::string format_matrix_csv(const ImageMatrix& m);

/// JSON array of {row_lo, row_hi, col_lo, col_hi} in partition order.
std::string partition_to_json(const RectPartition& p);
/// Inverse of partition_to_json for a grid of the given shape; validates coverage.
RectPartition partition_from_json(const std::string& text, Index rows, Index cols);

/// Report CSV with header "signal,estimator,n,N,mse_mean,mse_stderr".
std::string report_csv(const ExperimentReport& report);
/// JSON sidecar {signal, estimator, slope, intercept, slope_stderr, seed, spec};
/// NaN fit values are written as null.
std::string report_json(const ExperimentReport& report);
/// `path` with a trailing ".csv" replaced by ".json" (or ".json" appended).
std::string sidecar_path(const std::string& path);
/// Writes the CSV to `path` and the sidecar next to it.
void write_report(const std::string& path, const ExperimentReport& report);
/// Reads a report pair written by write_report.
ExperimentReport read_report(const std::string& path);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace tvd
