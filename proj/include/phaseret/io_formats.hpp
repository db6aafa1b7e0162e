// Portable text persistence.
//
// Complex matrices use the "CPLX-CSV v1" layout: a `#cplx-csv v1
// rows=<M> cols=<N>` header line, then M lines of N comma-separated
// `<re>:<im>` fields, each rendered with 17 significant digits (enough to
// round-trip 64-bit floats exactly), LF line endings. Benchmark results use
// a flat CSV with a fixed header and deterministic row order.

#pragma once

#include <string>
#include <vector>

#include "phaseret/model.hpp"

namespace phaseret {

// Writes `mat` in CPLX-CSV v1. Rejects non-finite entries.
void write_cplx(const std::string &path, const CMatrix &mat);

// Parses a CPLX-CSV v1 file. Malformed headers, wrong field counts, extra
// or missing data lines, and unparsable fields are reported with the
// offending 1-based line number.
CMatrix read_cplx(const std::string &path);

// Writes rows as CSV with header
//   algo,n,m,sigma_n2,trial,seed,correlation,iterations,runtime_ms,sigma_n2_hat
// sorted by (algo, m, sigma_n2, trial). Values round-trip through
// read_results exactly.
void write_results(const std::string &path, std::vector<TrialResult> rows);

// Parses a results CSV produced by write_results.
std::vector<TrialResult> read_results(const std::string &path);

}  // namespace phaseret
