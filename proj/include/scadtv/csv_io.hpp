#pragma once

#include "scadtv/estimators.hpp"

#include <string>
#include <vector>

namespace scadtv {

/// Writes sweep records as CSV with header `lambda,mse,sure`, rows ordered
/// by ascending lambda, 9 significant digits, absent fields left empty.
void write_csv(const std::vector<SweepRecord>& records, const std::string& path);

/// Reads a file produced by write_csv.
std::vector<SweepRecord> read_csv(const std::string& path);

/// Histogram counts as `bin_lo,bin_hi,count` rows over equal-width bins.
void write_histogram_csv(const std::vector<long long>& counts, double lo, double hi,
                         const std::string& path);

/// Per-level bias values as `level,shift` rows.
void write_level_shifts_csv(const std::vector<std::pair<double, double>>& shifts,
                            const std::string& path);

} // namespace scadtv
