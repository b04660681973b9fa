// sipdg — sharp interior-penalty parameters and explicit time-step bounds
// for SIPDG discretizations of linear hyperbolic systems.
//
// Subcommands: penalty, timestep, table, simulate, mesh (generate /
// validate), fourier, matrices.  Exit codes: 0 success, 2 usage error,
// 3 numerical failure, 4 invalid mesh or mapping.

#include <CLI11.hpp>

#include "sipdg/decomposition.hpp"
#include "sipdg/fourier.hpp"
#include "sipdg/mesh_io.hpp"
#include "sipdg/reports.hpp"
#include "sipdg/tables.hpp"
#include "sipdg/timeloop.hpp"

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace {

using namespace sipdg;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitMesh = 4;

// --------------------------------------------------------------------------
// Mesh construction shared by all commands
// --------------------------------------------------------------------------

struct MeshConfig {
  std::string family;        // generator family, possibly "name[p1,p2]"
  std::vector<Real> params;  // extra deformation/material parameters
  std::string file;          // mesh JSON file (overrides the generator)
  int degree = 1;
  int cells = 2;
  std::string boundary = "periodic";
};

BoundaryKind parse_boundary(const std::string& name) {
  if (name == "periodic") return BoundaryKind::periodic;
  if (name == "dirichlet") return BoundaryKind::dirichlet;
  if (name == "neumann") return BoundaryKind::neumann;
  throw InvalidInputError("unknown boundary kind: " + name);
}

// Deformation parameters outside a generator's admissible range mean the
// cell mapping would degenerate; those rejections are mesh/mapping
// failures (exit 4), not usage errors.
bool is_mapping_validity_message(const std::string& message) {
  return message.find(" outside (") != std::string::npos;
}

GeneratorSpec build_spec(const MeshConfig& cfg) {
  if (cfg.family.empty()) throw InvalidInputError("--mesh <family> is required");
  GeneratorSpec spec;
  parse_family(cfg.family, spec.family, spec.params);
  spec.params.insert(spec.params.end(), cfg.params.begin(), cfg.params.end());
  spec.degree = cfg.degree;
  spec.cells = cfg.cells;
  spec.boundary.fill(parse_boundary(cfg.boundary));
  return spec;
}

Mesh build_mesh(const MeshConfig& cfg) {
  if (!cfg.file.empty()) {
    Mesh mesh;
    try {
      mesh = read_mesh_json(cfg.file);
    } catch (const InvalidInputError& err) {
      throw MappingError(std::string("invalid mesh file: ") + err.what());
    }
    std::vector<std::string> problems = validate(mesh);
    if (!problems.empty()) throw MappingError("invalid mesh: " + problems.front());
    return mesh;
  }
  try {
    return generate_mesh(build_spec(cfg));
  } catch (const InvalidInputError& err) {
    if (is_mapping_validity_message(err.what())) throw MappingError(err.what());
    throw;
  }
}

void add_mesh_options(CLI::App* cmd, MeshConfig& cfg, bool with_file = true) {
  cmd->add_option("--mesh", cfg.family,
                  "generator family, e.g. square, triangular, hexahedral[0.6]");
  cmd->add_option("--param", cfg.params, "extra generator parameter(s)");
  if (with_file) cmd->add_option("--mesh-file", cfg.file, "mesh JSON file instead of a generator");
  cmd->add_option("-p,--p,--degree", cfg.degree, "polynomial degree")->check(CLI::Range(0, 10));
  cmd->add_option("-N,--cells", cfg.cells, "generator cells per axis")->check(CLI::Range(1, 64));
  cmd->add_option("--boundary", cfg.boundary, "periodic | dirichlet | neumann");
}

void emit(const std::string& text, const std::string& output_path) {
  if (output_path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
  } else {
    write_text_file(output_path, text);
  }
}

// --------------------------------------------------------------------------
// penalty
// --------------------------------------------------------------------------

struct PenaltyCmd {
  MeshConfig mesh;
  std::string variant = "star2";
  Real c_kappa = 1.0;
  Real tol_rank = 1e-10;
  std::string format = "csv";
  std::string output;
};

int cmd_penalty(const PenaltyCmd& cfg) {
  Mesh mesh = build_mesh(cfg.mesh);
  PenaltyReport report =
      penalty_report(mesh, parse_variant(cfg.variant), cfg.c_kappa, cfg.tol_rank);
  emit(cfg.format == "json" ? penalty_json(report) : penalty_csv(report), cfg.output);
  return kExitOk;
}

// --------------------------------------------------------------------------
// timestep
// --------------------------------------------------------------------------

struct TimestepCmd {
  MeshConfig mesh;
  std::string variant = "star2";
  Real c_kappa = 1.0;
  Real tol_rank = 1e-10;
  Real c_method = 2.0;
  std::string decomposition = "vertex";
  bool exact = false;
  int max_exact_dofs = 5000;
  std::string format = "csv";
  std::string output;
};

int cmd_timestep(const TimestepCmd& cfg) {
  Mesh mesh = build_mesh(cfg.mesh);
  PenaltyVariant variant = parse_variant(cfg.variant);
  PenaltyReport penalties = penalty_report(mesh, variant, cfg.c_kappa, cfg.tol_rank);
  GlobalSystem system(mesh, penalties.eta, variant_assembly_options(variant));

  MeshDecomposition decomposition;
  if (cfg.decomposition == "vertex") {
    decomposition = vertex_decomposition(mesh);
  } else if (cfg.decomposition == "trivial") {
    decomposition = trivial_decomposition(mesh);
  } else {
    throw InvalidInputError("unknown decomposition: " + cfg.decomposition);
  }

  TimeStepReport report;
  report.c_method = cfg.c_method;
  report.bound = lambda_bound(system, decomposition, 1.0, cfg.c_method);
  if (cfg.exact) {
    report.has_exact = true;
    report.lambda_exact = lambda_exact_dense(system, 1.0, cfg.max_exact_dofs);
    report.dt_exact = report.lambda_exact > 0.0
                          ? cfg.c_method / std::sqrt(report.lambda_exact)
                          : std::numeric_limits<Real>::infinity();
  }
  emit(cfg.format == "json" ? timestep_json(report) : timestep_csv(report), cfg.output);
  return kExitOk;
}

// --------------------------------------------------------------------------
// table
// --------------------------------------------------------------------------

struct TableCmd {
  int id = 0;
  bool list = false;
  bool subset = false;
  bool full_precision = false;
  SharpnessOptions options;
  std::string format = "csv";
  std::string output;
};

int cmd_table(const TableCmd& cfg) {
  if (cfg.list) {
    std::string text;
    for (int id = 1; id <= table_count(); ++id)
      text += std::to_string(id) + "," + table_title(id) + "\n";
    emit(text, cfg.output);
    return kExitOk;
  }
  if (cfg.id < 1 || cfg.id > table_count())
    throw InvalidInputError("table id must be between 1 and " + std::to_string(table_count()));
  std::vector<TableRow> rows = compute_table(cfg.id, cfg.options, cfg.subset);
  emit(cfg.format == "json" ? table_json(rows) : table_csv(rows, !cfg.full_precision),
       cfg.output);
  return kExitOk;
}

// --------------------------------------------------------------------------
// simulate
// --------------------------------------------------------------------------

struct SimulateCmd {
  MeshConfig mesh;
  std::string variant = "star2";
  Real c_kappa = 1.0;
  Real tol_rank = 1e-10;
  Real c_method = 2.0;
  std::string dt_ref = "est";
  Real dt_scale = 1.0;
  int steps = 2000;
  std::uint64_t seed = 20240915;
  std::string trace;
};

int cmd_simulate(const SimulateCmd& cfg) {
  Mesh mesh = build_mesh(cfg.mesh);
  PenaltyVariant variant = parse_variant(cfg.variant);
  PenaltyReport penalties = penalty_report(mesh, variant, cfg.c_kappa, cfg.tol_rank);
  GlobalSystem system(mesh, penalties.eta, variant_assembly_options(variant));

  Real dt_base = 0.0;
  if (cfg.dt_ref == "exact") {
    Real lambda = lambda_exact_dense(system);
    if (!(lambda > 0.0)) throw NumericalError("simulate: exact spectrum is not positive");
    dt_base = cfg.c_method / std::sqrt(lambda);
  } else if (cfg.dt_ref == "est") {
    dt_base = lambda_bound(system, vertex_decomposition(mesh), 1.0, cfg.c_method).dt;
  } else {
    throw InvalidInputError("unknown dt reference: " + cfg.dt_ref);
  }
  const Real dt = cfg.dt_scale * dt_base;

  StabilityVerdict verdict = stability_probe(system, dt, cfg.steps, 1.0, cfg.seed);

  if (!cfg.trace.empty()) {
    SimulationState state;
    state.dt = dt;
    if (cfg.steps > 0 && system.total_dofs() > 0) {
      // Same trajectory as the probe: identical seeds and step count.
      LeapfrogIntegrator integrator(system);
      const Index n = system.total_dofs();
      state = integrator.start(seeded_unit_vector(n, cfg.seed),
                               seeded_unit_vector(n, cfg.seed + 1), dt);
      integrator.advance(state, cfg.steps - 1);
    }
    write_energy_csv(state, cfg.trace);
  }

  std::string text = "dt," + format_full(dt) + "\n";
  text += "steps," + std::to_string(cfg.steps) + "\n";
  text += std::string("verdict,") + (verdict.stable ? "stable" : "unstable") + "\n";
  if (!verdict.stable) text += "failure_step," + std::to_string(verdict.failure_step) + "\n";
  std::fwrite(text.data(), 1, text.size(), stdout);
  return kExitOk;
}

// --------------------------------------------------------------------------
// mesh generate / validate
// --------------------------------------------------------------------------

struct MeshGenerateCmd {
  MeshConfig mesh;
  std::string output;
};

int cmd_mesh_generate(const MeshGenerateCmd& cfg) {
  MeshConfig source = cfg.mesh;
  source.file.clear();  // generate always uses the generator
  Mesh mesh = build_mesh(source);
  if (cfg.output.empty()) {
    emit(mesh_to_json(mesh), "");
  } else {
    write_mesh_json(mesh, cfg.output);
  }
  return kExitOk;
}

struct MeshValidateCmd {
  std::string input;
};

int cmd_mesh_validate(const MeshValidateCmd& cfg) {
  Mesh mesh;
  try {
    mesh = read_mesh_json(cfg.input);
  } catch (const InvalidInputError& err) {
    std::fprintf(stdout, "invalid mesh file: %s\n", err.what());
    return kExitMesh;
  }
  std::vector<std::string> problems = validate(mesh);
  for (const std::string& problem : problems) std::fprintf(stdout, "%s\n", problem.c_str());
  if (!problems.empty()) return kExitMesh;
  std::fprintf(stdout, "ok\n");
  return kExitOk;
}

// --------------------------------------------------------------------------
// fourier
// --------------------------------------------------------------------------

struct FourierCmd {
  MeshConfig mesh;
  std::string variant = "star2";
  Real c_kappa = 1.0;
  Real tol_rank = 1e-10;
  int grid = 2;
  std::string output;
};

int cmd_fourier(const FourierCmd& cfg) {
  MeshConfig source = cfg.mesh;
  source.cells = 1;  // the symbol lives on the one-cell generator
  source.boundary = "periodic";
  Mesh mesh = build_mesh(source);
  PenaltyVariant variant = parse_variant(cfg.variant);
  PenaltyReport penalties = penalty_report(mesh, variant, cfg.c_kappa, cfg.tol_rank);
  SymbolBlocks blocks =
      symbol_blocks(mesh, penalties.eta, 1.0, variant_assembly_options(variant));
  std::vector<PhasePoint> scan = phase_scan(blocks, cfg.grid);
  write_phase_scan_csv(scan, blocks.dim, cfg.output);

  Real radius = spectral_radius(blocks, cfg.grid);
  std::string text = "spectral_radius," + format_full(radius) + "\n";
  if (radius > 0.0) text += "dt," + format_full(2.0 / std::sqrt(radius)) + "\n";
  std::fwrite(text.data(), 1, text.size(), stdout);
  return kExitOk;
}

// --------------------------------------------------------------------------
// matrices
// --------------------------------------------------------------------------

struct MatricesCmd {
  MeshConfig mesh;
  std::string variant = "star2";
  Real c_kappa = 1.0;
  Real tol_rank = 1e-10;
  std::string output = "system";
};

int cmd_matrices(const MatricesCmd& cfg) {
  Mesh mesh = build_mesh(cfg.mesh);
  PenaltyVariant variant = parse_variant(cfg.variant);
  PenaltyReport penalties = penalty_report(mesh, variant, cfg.c_kappa, cfg.tol_rank);
  GlobalSystem system(mesh, penalties.eta, variant_assembly_options(variant));
  write_coordinate_matrix(system.mass(), cfg.output + ".mass.mtx");
  write_coordinate_matrix(system.stiffness(), cfg.output + ".stiffness.mtx");
  write_text_file(cfg.output + ".dofmap.json", dof_map_json(system));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sharp interior-penalty parameters and time-step bounds for SIPDG"};
  app.require_subcommand(1);

  PenaltyCmd penalty_cfg;
  CLI::App* penalty = app.add_subcommand("penalty", "per-element penalty parameters");
  add_mesh_options(penalty, penalty_cfg.mesh);
  penalty->add_option("--variant", penalty_cfg.variant, "star | star2 | mulder");
  penalty->add_option("--c-kappa", penalty_cfg.c_kappa, "penalty safety factor");
  penalty->add_option("--tol-rank", penalty_cfg.tol_rank, "congruence rank tolerance")
      ->check(CLI::PositiveNumber);
  penalty->add_option("--format", penalty_cfg.format, "csv | json");
  penalty->add_option("-o,--output", penalty_cfg.output, "output file (default stdout)");

  TimestepCmd timestep_cfg;
  CLI::App* timestep = app.add_subcommand("timestep", "localized time-step bound");
  add_mesh_options(timestep, timestep_cfg.mesh);
  timestep->add_option("--variant", timestep_cfg.variant, "star | star2 | mulder");
  timestep->add_option("--c-kappa", timestep_cfg.c_kappa, "penalty safety factor");
  timestep->add_option("--tol-rank", timestep_cfg.tol_rank, "congruence rank tolerance")
      ->check(CLI::PositiveNumber);
  timestep->add_option("--c-method", timestep_cfg.c_method, "method constant in dt = c/sqrt(lambda)")
      ->check(CLI::PositiveNumber);
  timestep->add_option("--decomposition", timestep_cfg.decomposition, "vertex | trivial");
  timestep->add_flag("--exact", timestep_cfg.exact, "also compute the exact dense spectrum");
  timestep->add_option("--max-exact-dofs", timestep_cfg.max_exact_dofs,
                       "guard for the dense exact solve");
  timestep->add_option("--format", timestep_cfg.format, "csv | json");
  timestep->add_option("-o,--output", timestep_cfg.output, "output file (default stdout)");

  TableCmd table_cfg;
  CLI::App* table = app.add_subcommand("table", "recompute one of the six benchmark tables");
  table->add_option("id", table_cfg.id, "table id (1..6)");
  table->add_flag("--list", table_cfg.list, "list table ids and titles");
  table->add_flag("--subset", table_cfg.subset, "small deterministic row sample (tables 4-6)");
  table->add_flag("--full-precision", table_cfg.full_precision,
                  "print all digits instead of the table layout");
  table->add_option("-N,--cells", table_cfg.options.fourier_cells, "phase-grid resolution")
      ->check(CLI::Range(1, 16));
  table->add_option("--c-method", table_cfg.options.c_method,
                    "method constant in dt = c/sqrt(lambda)")
      ->check(CLI::PositiveNumber);
  table->add_option("--tol-rank", table_cfg.options.tol_rank, "congruence rank tolerance")
      ->check(CLI::PositiveNumber);
  table->add_option("--tol-psd", table_cfg.options.tol_psd, "semidefiniteness slack")
      ->check(CLI::PositiveNumber);
  table->add_option("--format", table_cfg.format, "csv | json");
  table->add_option("-o,--output", table_cfg.output, "output file (default stdout)");

  SimulateCmd simulate_cfg;
  CLI::App* simulate = app.add_subcommand("simulate", "leapfrog stability probe");
  add_mesh_options(simulate, simulate_cfg.mesh);
  simulate->add_option("--variant", simulate_cfg.variant, "star | star2 | mulder");
  simulate->add_option("--c-kappa", simulate_cfg.c_kappa, "penalty safety factor");
  simulate->add_option("--tol-rank", simulate_cfg.tol_rank, "congruence rank tolerance")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--c-method", simulate_cfg.c_method,
                       "method constant in dt = c/sqrt(lambda)")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--dt-ref", simulate_cfg.dt_ref,
                       "time-step reference: est (localized bound) | exact");
  simulate->add_option("--dt-scale", simulate_cfg.dt_scale, "multiple of the reference step")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--steps", simulate_cfg.steps, "number of leapfrog steps")
      ->check(CLI::Range(0, 100000000));
  simulate->add_option("--seed", simulate_cfg.seed, "random initial data seed");
  simulate->add_option("--trace", simulate_cfg.trace, "energy trace CSV file");

  CLI::App* mesh_cmd = app.add_subcommand("mesh", "generate or validate mesh files");
  mesh_cmd->require_subcommand(1);
  MeshGenerateCmd generate_cfg;
  CLI::App* generate = mesh_cmd->add_subcommand("generate", "write a generated mesh as JSON");
  add_mesh_options(generate, generate_cfg.mesh, /*with_file=*/false);
  generate->add_option("-o,--output", generate_cfg.output, "output file (default stdout)");
  MeshValidateCmd validate_cfg;
  CLI::App* validate_cmd = mesh_cmd->add_subcommand("validate", "check a mesh JSON file");
  validate_cmd->add_option("-i,--input", validate_cfg.input, "mesh JSON file")->required();

  FourierCmd fourier_cfg;
  CLI::App* fourier = app.add_subcommand("fourier", "phase scan of the symbol spectrum");
  add_mesh_options(fourier, fourier_cfg.mesh);
  fourier->add_option("--variant", fourier_cfg.variant, "star | star2 | mulder");
  fourier->add_option("--c-kappa", fourier_cfg.c_kappa, "penalty safety factor");
  fourier->add_option("--tol-rank", fourier_cfg.tol_rank, "congruence rank tolerance")
      ->check(CLI::PositiveNumber);
  fourier->add_option("--grid", fourier_cfg.grid, "phase-grid resolution N")
      ->check(CLI::Range(1, 64));
  fourier->add_option("-o,--output", fourier_cfg.output, "phase scan CSV file")->required();

  MatricesCmd matrices_cfg;
  CLI::App* matrices = app.add_subcommand("matrices", "export assembled matrices and dof map");
  add_mesh_options(matrices, matrices_cfg.mesh);
  matrices->add_option("--variant", matrices_cfg.variant, "star | star2 | mulder");
  matrices->add_option("--c-kappa", matrices_cfg.c_kappa, "penalty safety factor");
  matrices->add_option("--tol-rank", matrices_cfg.tol_rank, "congruence rank tolerance")
      ->check(CLI::PositiveNumber);
  matrices->add_option("-o,--output", matrices_cfg.output, "output file prefix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (penalty->parsed()) return cmd_penalty(penalty_cfg);
    if (timestep->parsed()) return cmd_timestep(timestep_cfg);
    if (table->parsed()) return cmd_table(table_cfg);
    if (simulate->parsed()) return cmd_simulate(simulate_cfg);
    if (mesh_cmd->parsed()) {
      if (generate->parsed()) return cmd_mesh_generate(generate_cfg);
      if (validate_cmd->parsed()) return cmd_mesh_validate(validate_cfg);
    }
    if (fourier->parsed()) return cmd_fourier(fourier_cfg);
    if (matrices->parsed()) return cmd_matrices(matrices_cfg);
  } catch (const MappingError& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return kExitMesh;
  } catch (const NumericalError& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return kExitNumerical;
  } catch (const InvalidInputError& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return kExitUsage;
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return kExitUsage;
  }
  return kExitUsage;
}
