// csv.hpp — trace serialization and schema validation.
//
// Trace files carry one row per recorded iterate with the fixed header
//
//   method,seed,k,comms_per_node,total_comms,avg_rel_err,max_gap,dis_x,dis_y,diverged
//
// Reals are written with 17 significant digits so a rerun with the same
// seed reproduces the file byte for byte; missing values appear as "nan".
// The diverged column is 0 everywhere except the final row of a run that
// blew up, which carries 1.

#pragma once

#include <dgm/solvers.hpp>

#include <iosfwd>
#include <string>

namespace dgm {

/// Exact header line (without trailing newline) of a trace CSV.
extern const char* const kTraceCsvHeader;

/// Writes `trace` to `out` in the trace CSV schema.
void write_trace_csv(std::ostream& out, const RunTrace& trace);

/// Checks that `in` holds a well-formed trace CSV: exact header, ten
/// fields per row, integer and real fields that parse in full, iteration
/// numbers strictly increasing, communication counts nondecreasing, and
/// the diverged flag set only on the final row.  Returns the number of
/// data rows.  Throws std::invalid_argument describing the first defect.
long long validate_trace_csv(std::istream& in);

}  // namespace dgm
