#include "solitonflow/io.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace solitonflow {

using nlohmann::json;

CsvWriter::CsvWriter(const std::string& path) : f_(std::fopen(path.c_str(), "wb")) {
  if (!f_) throw std::runtime_error("cannot open " + path + " for writing");
}

CsvWriter::~CsvWriter() {
  if (f_) std::fclose(f_);
}

void CsvWriter::header(const std::vector<std::string>& names) {
  for (std::size_t i = 0; i < names.size(); ++i)
    std::fprintf(f_, "%s%s", names[i].c_str(), i + 1 < names.size() ? "," : "\n");
}

void CsvWriter::row(std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i)
    std::fprintf(f_, "%.17g%s", values[i], i + 1 < values.size() ? "," : "\n");
}

std::vector<std::string> trajectory_csv_header(int r) {
  std::vector<std::string> h;
  h.emplace_back("t");
  for (int i = 1; i <= r; ++i) h.push_back("g_" + std::to_string(i));
  for (int i = 1; i <= r; ++i) h.push_back("gdot_" + std::to_string(i));
  h.emplace_back("u");
  h.emplace_back("udot");
  h.emplace_back("xi");
  h.emplace_back("trL");
  h.emplace_back("Rbar");
  h.emplace_back("Lcal");
  h.emplace_back("H");
  for (int i = 1; i <= r; ++i) h.push_back("Xtilde_" + std::to_string(i));
  for (int i = 1; i <= r; ++i) h.push_back("Ytilde_" + std::to_string(i));
  h.emplace_back("res2");
  return h;
}

namespace {

json claim_to_json(const ClaimFlag& c) {
  json j;
  j["name"] = c.name;
  j["value"] = c.value;
  json tol;
  tol["lo"] = std::isinf(c.lo) ? json() : json(c.lo);
  tol["hi"] = std::isinf(c.hi) ? json() : json(c.hi);
  j["tolerance"] = tol;
  j["pass"] = c.pass;
  if (!c.detail.empty()) j["detail"] = c.detail;
  return j;
}

json meta_to_json(const ReportMeta& meta) {
  json j;
  j["system"] = meta.system;
  j["mode"] = meta.mode;
  if (!meta.preset.empty()) j["preset"] = meta.preset;
  return j;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(); }

}  // namespace

std::string report_json(const ReportMeta& meta, const DiagnosticsReport& rep) {
  json j;
  j["run"] = meta_to_json(meta);
  j["termination"]["reason"] = rep.termination;
  if (!rep.termination_detail.empty()) j["termination"]["detail"] = rep.termination_detail;
  j["has_fits"] = rep.has_fits;
  if (rep.has_fits) {
    j["tail_window"] = {rep.tail_lo, rep.tail_hi};
    json est;
    est["udot_limit"] = finite_or_null(rep.udot_limit);
    est["xi_limit"] = finite_or_null(rep.xi_limit);
    est["g1_limit"] = finite_or_null(rep.g1_limit);
    if (!rep.growth_ratios.empty()) {
      json arr = json::array();
      for (double v : rep.growth_ratios) arr.push_back(finite_or_null(v));
      est["growth_ratios"] = arr;
    }
    json xt = json::array(), yt = json::array(), xy2 = json::array();
    for (double v : rep.xtilde_tail) xt.push_back(finite_or_null(v));
    for (double v : rep.ytilde_tail) yt.push_back(finite_or_null(v));
    for (double v : rep.x_over_y2_tail) xy2.push_back(finite_or_null(v));
    est["Xtilde_tail"] = xt;
    est["Ytilde_tail"] = yt;
    if (!rep.x_over_y2_tail.empty()) est["X_over_Y2_tail"] = xy2;
    est["Xtilde1_over_Xtilde2_tail"] = finite_or_null(rep.xt_ratio_tail);
    est["Ytilde1_over_Ytilde2_tail"] = finite_or_null(rep.yt_ratio_tail);
    est["Ytilde1_cv"] = finite_or_null(rep.ytilde1_cv);
    if (!rep.loglog_exponents.empty()) {
      json arr = json::array();
      for (double v : rep.loglog_exponents) arr.push_back(finite_or_null(v));
      est["loglog_exponents"] = arr;
    }
    j["estimates"] = est;
  }
  json claims = json::array();
  for (const auto& c : rep.claims) claims.push_back(claim_to_json(c));
  j["claims"] = claims;
  return j.dump(2) + "\n";
}

std::string report_json(const ReportMeta& meta, const Trajectory& traj,
                        const RicciFlatConvergence& conv) {
  json j;
  j["run"] = meta_to_json(meta);
  j["termination"]["reason"] = to_string(traj.termination);
  if (!traj.termination_detail.empty()) j["termination"]["detail"] = traj.termination_detail;
  json est;
  est["max_lyap_drift"] = conv.max_lyap;
  est["max_H_drift"] = conv.max_h_drift;
  est["distance_to_E_final"] = conv.dist_E_final;
  est["fhat_tail"] = conv.fhat_tail;
  est["fhat_min"] = conv.fhat_min;
  j["estimates"] = est;
  json claims = json::array();
  for (const auto& c : conv.claims) claims.push_back(claim_to_json(c));
  j["claims"] = claims;
  return j.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
}

}  // namespace solitonflow
