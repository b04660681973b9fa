#include "sipdg/reports.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>

namespace sipdg {

namespace {

using ordered_json = nlohmann::ordered_json;

// Parses the decimal produced by format_full back to double; used to push
// floats into JSON without changing their printed value.
double full_value(Real x) { return static_cast<double>(x); }

void append_row(std::string& out, std::initializer_list<std::string> cells) {
  bool first = true;
  for (const std::string& cell : cells) {
    if (!first) out += ',';
    out += cell;
    first = false;
  }
  out += '\n';
}

std::string row_value(bool present, Real value, bool rounded, int decimals) {
  if (!present) return "";
  return rounded ? format_fixed(value, decimals) : format_full(value);
}

}  // namespace

std::string format_full(Real x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", static_cast<double>(x));
  return buf;
}

std::string format_fixed(Real x, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, static_cast<double>(x));
  return buf;
}

std::string penalty_csv(const PenaltyReport& report) {
  std::string out = "element,kappa,eta,rank\n";
  for (Index e = 0; e < report.eta.size(); ++e) {
    append_row(out, {std::to_string(e), format_full(report.kappa(e)), format_full(report.eta(e)),
                     std::to_string(report.rank(e))});
  }
  return out;
}

std::string penalty_json(const PenaltyReport& report) {
  ordered_json j;
  j["variant"] = variant_name(report.variant);
  j["c_kappa"] = full_value(report.c_kappa);
  ordered_json elems = ordered_json::array();
  for (Index e = 0; e < report.eta.size(); ++e) {
    ordered_json je;
    je["element"] = e;
    je["kappa"] = full_value(report.kappa(e));
    je["eta"] = full_value(report.eta(e));
    je["rank"] = report.rank(e);
    elems.push_back(je);
  }
  j["elements"] = elems;
  return j.dump(2) + "\n";
}

std::string timestep_csv(const TimeStepReport& report) {
  std::string out = "lambda_bar,dt,c_method,lambda_exact,dt_exact\n";
  append_row(out, {format_full(report.bound.lambda_bar), format_full(report.bound.dt),
                   format_full(report.c_method),
                   report.has_exact ? format_full(report.lambda_exact) : "",
                   report.has_exact ? format_full(report.dt_exact) : ""});
  return out;
}

std::string timestep_json(const TimeStepReport& report) {
  ordered_json j;
  j["c_method"] = full_value(report.c_method);
  j["lambda_bar"] = full_value(report.bound.lambda_bar);
  j["dt"] = full_value(report.bound.dt);
  ordered_json subs = ordered_json::array();
  for (Index s = 0; s < report.bound.submesh_lambda.size(); ++s) {
    ordered_json js;
    js["submesh"] = s;
    js["lambda"] = full_value(report.bound.submesh_lambda(s));
    js["iterations"] = report.bound.iterations(s);
    subs.push_back(js);
  }
  j["submeshes"] = subs;
  if (report.has_exact) {
    ordered_json ex;
    ex["lambda"] = full_value(report.lambda_exact);
    ex["dt"] = full_value(report.dt_exact);
    j["exact"] = ex;
  } else {
    j["exact"] = nullptr;
  }
  return j.dump(2) + "\n";
}

TableRow sharpness_row(const std::string& mesh_label, int degree, const SharpnessReport& report) {
  TableRow row;
  row.mesh = mesh_label;
  row.degree = degree;
  row.variant = variant_name(report.variant);
  row.has_c_min = true;
  row.c_min = report.c_min;
  row.has_dt_eta_min = true;
  row.dt_eta_min = report.dt_eta_min;
  row.dt_eta = report.dt_eta;
  row.has_dt_est = true;
  row.dt_est = report.dt_est;
  row.has_ratios = true;
  row.ratio1 = report.ratio_penalty;
  row.ratio2 = report.ratio_estimate;
  return row;
}

std::string table_csv(const std::vector<TableRow>& rows, bool rounded) {
  std::string out = "mesh,p,variant,c_min,dt_eta_min,dt_eta,dt_est,ratio1,ratio2\n";
  for (const TableRow& row : rows) {
    append_row(out, {row.mesh, std::to_string(row.degree), row.variant,
                     row_value(row.has_c_min, row.c_min, rounded, 2),
                     row_value(row.has_dt_eta_min, row.dt_eta_min, rounded, 4),
                     row_value(true, row.dt_eta, rounded, 4),
                     row_value(row.has_dt_est, row.dt_est, rounded, 4),
                     row_value(row.has_ratios, row.ratio1, rounded, 2),
                     row_value(row.has_ratios, row.ratio2, rounded, 2)});
  }
  return out;
}

std::string table_json(const std::vector<TableRow>& rows) {
  ordered_json arr = ordered_json::array();
  for (const TableRow& row : rows) {
    ordered_json j;
    j["mesh"] = row.mesh;
    j["p"] = row.degree;
    j["variant"] = row.variant;
    j["c_min"] = row.has_c_min ? ordered_json(full_value(row.c_min)) : ordered_json(nullptr);
    j["dt_eta_min"] =
        row.has_dt_eta_min ? ordered_json(full_value(row.dt_eta_min)) : ordered_json(nullptr);
    j["dt_eta"] = full_value(row.dt_eta);
    j["dt_est"] = row.has_dt_est ? ordered_json(full_value(row.dt_est)) : ordered_json(nullptr);
    j["ratio1"] = row.has_ratios ? ordered_json(full_value(row.ratio1)) : ordered_json(nullptr);
    j["ratio2"] = row.has_ratios ? ordered_json(full_value(row.ratio2)) : ordered_json(nullptr);
    arr.push_back(j);
  }
  return arr.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInputError("write_text_file: cannot open " + path);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw InvalidInputError("write_text_file: write failed for " + path);
}

}  // namespace sipdg
