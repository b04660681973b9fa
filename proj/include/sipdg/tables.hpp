#pragma once

// The six benchmark tables: deterministic job lists (mesh family,
// deformation/material parameters, polynomial degree, penalty variant)
// and a driver that recomputes every row from scratch.
//
//   1  sharp penalty eta*  on the regular families (1D .. tetrahedral)
//   2  sharp penalty eta** on the same families
//   3  simplicial families: reference penalty vs the sharp penalties
//   4  deformed 2D/3D meshes (eta**)
//   5  piecewise-constant acoustic coefficients (eta**)
//   6  electromagnetic and isotropic elastic materials (eta**)
//
// Tables 1, 2 and 4-6 produce one full sharpness row per job.  Table 3
// jobs are comparison jobs: each expands into three rows (variants
// mulder, star, star2) whose dt_eta columns hold the exact time step at
// that penalty on the periodic tiling; the mulder row's ratio columns
// hold dt(star)/dt(mulder) and dt(star2)/dt(mulder).

#include "sipdg/reports.hpp"

namespace sipdg {

struct TableJob {
  std::string label;  // row label, also a parseable family string
  GeneratorSpec spec;
  int degree = 1;
  PenaltyVariant variant = PenaltyVariant::star2;
  bool comparison = false;  // expand into mulder/star/star2 rows
};

// Number of defined tables (ids 1..table_count()).
int table_count();

// Human-readable description of a table id; throws InvalidInputError for
// ids outside 1..table_count().
std::string table_title(int id);

// Deterministic job list of a table.  `subset` trims tables 4-6 to two
// representative rows each (the continuous-integration sample); tables
// 1-3 are returned in full regardless.
std::vector<TableJob> table_jobs(int id, bool subset = false);

// Recomputes the rows of `jobs`; jobs run concurrently but rows are
// returned in job order (comparison jobs occupy three consecutive rows).
std::vector<TableRow> compute_rows(const std::vector<TableJob>& jobs,
                                   const SharpnessOptions& options = {});

// compute_rows(table_jobs(id, subset), options).
std::vector<TableRow> compute_table(int id, const SharpnessOptions& options = {},
                                    bool subset = false);

// Exact time step c_method / sqrt(lambda_max) at the variant's penalty on
// the options.fourier_cells tiling of the family's generator cell.  The
// spec's cells/boundary fields are ignored (the tiling is periodic by
// construction).  Shared by the table driver and the CLI.
Real exact_dt(const GeneratorSpec& spec, PenaltyVariant variant,
              const SharpnessOptions& options = {});

}  // namespace sipdg
