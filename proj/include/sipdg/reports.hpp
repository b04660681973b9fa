#pragma once

// Deterministic serialization of penalty reports, time-step bounds and
// sharpness tables.  Every floating-point field goes through snprintf with
// a fixed format, so identical inputs produce byte-identical files across
// runs; JSON output uses ordered objects for the same reason.

#include "sipdg/stability.hpp"

#include <string>
#include <vector>

namespace sipdg {

// --------------------------------------------------------------------------
// Formatting primitives
// --------------------------------------------------------------------------

// Full-precision decimal form of x (%.17g) — round-trips a double exactly.
std::string format_full(Real x);

// Fixed-point form with the given number of decimals (%.*f), the layout the
// benchmark tables are printed in.
std::string format_fixed(Real x, int decimals);

// --------------------------------------------------------------------------
// Penalty reports
// --------------------------------------------------------------------------

// CSV columns: element,kappa,eta,rank — one row per element, full precision.
std::string penalty_csv(const PenaltyReport& report);

// JSON object {variant, c_kappa, elements: [{element, kappa, eta, rank}]}.
std::string penalty_json(const PenaltyReport& report);

// --------------------------------------------------------------------------
// Time-step bounds
// --------------------------------------------------------------------------

// A localized bound plus the optional exact reference it is compared with.
struct TimeStepReport {
  TimeStepBound bound;
  Real c_method = 2.0;
  bool has_exact = false;     // exact spectrum was also computed
  Real lambda_exact = 0.0;
  Real dt_exact = 0.0;
};

// CSV columns: lambda_bar,dt,c_method,lambda_exact,dt_exact (exact cells
// empty when has_exact is false), a header line and one value row.
std::string timestep_csv(const TimeStepReport& report);

// JSON object {c_method, lambda_bar, dt, submeshes: [{submesh, lambda,
// iterations}], exact: {lambda, dt} | null}.
std::string timestep_json(const TimeStepReport& report);

// --------------------------------------------------------------------------
// Table rows
// --------------------------------------------------------------------------

// One row of a sharpness table in the unified layout
//   mesh,p,variant,c_min,dt_eta_min,dt_eta,dt_est,ratio1,ratio2
// where ratio1 = dt_eta_min/dt_eta and ratio2 = dt_eta/dt_est.  Comparison
// rows (reference penalties that have no bisection or estimate attached)
// flag the fields they carry; absent fields serialize as empty CSV cells
// and JSON nulls.  In comparison rows the ratio columns instead hold the
// time-step gains of the two sharp penalties over the reference.
struct TableRow {
  std::string mesh;     // family label, e.g. "triangular" or "hexahedral[0.6]"
  int degree = 0;
  std::string variant;  // star / star2 / mulder
  bool has_c_min = false;
  Real c_min = 0.0;
  bool has_dt_eta_min = false;
  Real dt_eta_min = 0.0;
  Real dt_eta = 0.0;  // always present
  bool has_dt_est = false;
  Real dt_est = 0.0;
  bool has_ratios = false;
  Real ratio1 = 0.0;
  Real ratio2 = 0.0;
};

// Row assembled from a full sharpness study (all fields present).
TableRow sharpness_row(const std::string& mesh_label, int degree, const SharpnessReport& report);

// CSV with the unified header.  `rounded` prints the table layout (c_min
// with two decimals, time steps with four, ratios with two); otherwise all
// values are full precision.
std::string table_csv(const std::vector<TableRow>& rows, bool rounded = true);

// JSON array of row objects with the same field names as the CSV header.
std::string table_json(const std::vector<TableRow>& rows);

// --------------------------------------------------------------------------
// File output
// --------------------------------------------------------------------------

// Writes text to path (binary mode, no transformation); throws
// InvalidInputError when the file cannot be opened or written.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace sipdg
