#include "sipdg/tables.hpp"

#include "sipdg/fourier.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace sipdg {

namespace {

std::string family_label(const std::string& family, const std::vector<Real>& params) {
  if (params.empty()) return family;
  std::string label = family + "[";
  for (std::size_t i = 0; i < params.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", static_cast<double>(params[i]));
    if (i) label += ",";
    label += buf;
  }
  return label + "]";
}

TableJob make_job(const std::string& family, const std::vector<Real>& params, int degree,
                  PenaltyVariant variant, bool comparison = false) {
  TableJob job;
  job.label = family_label(family, params);
  job.spec.family = family;
  job.spec.params = params;
  job.spec.degree = degree;
  job.spec.cells = 1;
  job.degree = degree;
  job.variant = variant;
  job.comparison = comparison;
  return job;
}

void push_family(std::vector<TableJob>& jobs, const std::string& family,
                 const std::vector<Real>& params, PenaltyVariant variant,
                 bool comparison = false) {
  for (int p = 1; p <= 3; ++p) jobs.push_back(make_job(family, params, p, variant, comparison));
}

std::vector<TableJob> regular_jobs(PenaltyVariant variant) {
  std::vector<TableJob> jobs;
  for (const char* family : {"1D", "square", "triangular", "cubic", "tetrahedral"})
    push_family(jobs, family, {}, variant);
  return jobs;
}

std::vector<TableJob> comparison_jobs() {
  std::vector<TableJob> jobs;
  for (const char* family : {"triangular", "tetrahedral"})
    push_family(jobs, family, {}, PenaltyVariant::star2, /*comparison=*/true);
  return jobs;
}

std::vector<TableJob> deformed_jobs(bool subset) {
  if (subset) {
    return {make_job("triangular", {0.7}, 1, PenaltyVariant::star2),
            make_job("hexahedral", {0.6}, 1, PenaltyVariant::star2)};
  }
  std::vector<TableJob> jobs;
  auto sweep = [&](const char* family, std::initializer_list<Real> values) {
    for (Real x : values) push_family(jobs, family, {x}, PenaltyVariant::star2);
  };
  sweep("triangular", {0.5, 0.7, 0.9});
  sweep("rectangular", {0.5, 0.7, 0.9});
  sweep("quadrilateral", {0.5, 0.6, 0.7});
  sweep("tetrahedral", {0.5, 0.7, 0.9});
  sweep("cuboid", {0.5, 0.7, 0.9});
  sweep("hexahedral", {0.5, 0.6, 0.65});
  return jobs;
}

std::vector<TableJob> layered_jobs(bool subset) {
  if (subset) {
    return {make_job("squarePL", {5.0, 5.0}, 1, PenaltyVariant::star2),
            make_job("tetrahedralPL", {10.0, 1.0}, 1, PenaltyVariant::star2)};
  }
  const std::vector<std::vector<Real>> params = {
      {1.0, 1.0}, {5.0, 5.0}, {10.0, 1.0}, {1.0, 10.0}, {10.0, 10.0}};
  std::vector<TableJob> jobs;
  for (const char* family : {"triPL", "squarePL", "tetrahedralPL", "cubicPL"})
    for (const std::vector<Real>& pr : params) push_family(jobs, family, pr, PenaltyVariant::star2);
  return jobs;
}

std::vector<TableJob> material_jobs(bool subset) {
  if (subset) {
    return {make_job("cubicEM", {1.0, 0.1}, 1, PenaltyVariant::star2),
            make_job("tetraISO", {10.0, 1.0}, 1, PenaltyVariant::star2)};
  }
  const std::vector<std::vector<Real>> em = {{1.0, 1.0}, {1.0, 0.1}, {1.0, 0.01}};
  const std::vector<std::vector<Real>> iso = {{1.0, 0.0}, {0.0, 1.0}, {10.0, 1.0}, {100.0, 1.0}};
  std::vector<TableJob> jobs;
  for (const char* family : {"tetraEM", "cubicEM"})
    for (const std::vector<Real>& pr : em) push_family(jobs, family, pr, PenaltyVariant::star2);
  for (const char* family : {"tetraISO", "cubicISO"})
    for (const std::vector<Real>& pr : iso) push_family(jobs, family, pr, PenaltyVariant::star2);
  return jobs;
}

// The three comparison rows of a simplicial family: exact time steps at
// the reference penalty and at both sharp penalties.
void comparison_rows(const TableJob& job, const SharpnessOptions& options, TableRow* rows) {
  const PenaltyVariant variants[3] = {PenaltyVariant::mulder, PenaltyVariant::star,
                                      PenaltyVariant::star2};
  Real dt[3];
  for (int k = 0; k < 3; ++k) dt[k] = exact_dt(job.spec, variants[k], options);
  for (int k = 0; k < 3; ++k) {
    TableRow row;
    row.mesh = job.label;
    row.degree = job.degree;
    row.variant = variant_name(variants[k]);
    row.dt_eta = dt[k];
    if (k == 0 && dt[0] > 0.0 && std::isfinite(dt[0])) {
      row.has_ratios = true;
      row.ratio1 = dt[1] / dt[0];
      row.ratio2 = dt[2] / dt[0];
    }
    rows[k] = row;
  }
}

}  // namespace

int table_count() { return 6; }

std::string table_title(int id) {
  switch (id) {
    case 1:
      return "Sharp penalty eta* on regular mesh families";
    case 2:
      return "Sharp penalty eta** on regular mesh families";
    case 3:
      return "Simplicial families: reference penalty vs sharp penalties";
    case 4:
      return "Deformed 2D/3D mesh families (eta**)";
    case 5:
      return "Piecewise-constant acoustic coefficients (eta**)";
    case 6:
      return "Electromagnetic and isotropic elastic materials (eta**)";
    default:
      throw InvalidInputError("table id must be between 1 and 6, got " + std::to_string(id));
  }
}

std::vector<TableJob> table_jobs(int id, bool subset) {
  switch (id) {
    case 1:
      return regular_jobs(PenaltyVariant::star);
    case 2:
      return regular_jobs(PenaltyVariant::star2);
    case 3:
      return comparison_jobs();
    case 4:
      return deformed_jobs(subset);
    case 5:
      return layered_jobs(subset);
    case 6:
      return material_jobs(subset);
    default:
      throw InvalidInputError("table id must be between 1 and 6, got " + std::to_string(id));
  }
}

Real exact_dt(const GeneratorSpec& spec, PenaltyVariant variant, const SharpnessOptions& options) {
  GeneratorSpec cell = spec;
  cell.cells = 1;
  cell.boundary = {BoundaryKind::periodic, BoundaryKind::periodic, BoundaryKind::periodic};
  Mesh mesh = generate_mesh(cell);
  PenaltyReport penalties = penalty_report(mesh, variant, 1.0, options.tol_rank);
  SymbolBlocks blocks =
      symbol_blocks(mesh, penalties.eta, 1.0, variant_assembly_options(variant));
  Real radius = spectral_radius(blocks, options.fourier_cells);
  if (!(radius > 0.0)) return std::numeric_limits<Real>::infinity();
  return options.c_method / std::sqrt(radius);
}

std::vector<TableRow> compute_rows(const std::vector<TableJob>& jobs,
                                   const SharpnessOptions& options) {
  std::vector<std::size_t> first_row(jobs.size());
  std::size_t total = 0;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    first_row[i] = total;
    total += jobs[i].comparison ? 3 : 1;
  }
  std::vector<TableRow> rows(total);
  parallel_for(static_cast<Index>(jobs.size()), [&](Index i) {
    const TableJob& job = jobs[static_cast<std::size_t>(i)];
    TableRow* slot = rows.data() + first_row[static_cast<std::size_t>(i)];
    if (job.comparison) {
      comparison_rows(job, options, slot);
    } else {
      *slot = sharpness_row(job.label, job.degree, sharpness_ratios(job.spec, job.variant, options));
    }
  });
  return rows;
}

std::vector<TableRow> compute_table(int id, const SharpnessOptions& options, bool subset) {
  return compute_rows(table_jobs(id, subset), options);
}

}  // namespace sipdg
