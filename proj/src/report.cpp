#include "goest/report.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace goest {

namespace {

std::string field(const std::optional<double>& v) { return v ? format_real(*v) : std::string(); }

nlohmann::json opt(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

std::optional<double> opt_from(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

AdjointRole role_from_string(const std::string& s) {
  for (auto r : {AdjointRole::Coarse, AdjointRole::Enriched, AdjointRole::Reference, AdjointRole::AnalyticWitness})
    if (to_string(r) == s) return r;
  throw std::invalid_argument("unknown adjoint role '" + s + "'");
}

}  // namespace

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ReportFormat report_format_from_string(const std::string& s) {
  if (s == "csv") return ReportFormat::Csv;
  if (s == "json") return ReportFormat::Json;
  throw std::invalid_argument("format must be 'csv' or 'json', got '" + s + "'");
}

void write_csv(const SweepReport& r, std::ostream& out) {
  out << "level,h,n_dofs,J_uh,true_error,eta1,eta2,eta3,remainder,eff1,eff2,eff3,b_h,reliability_ok\n";
  for (const auto& l : r.levels) {
    const auto& e = l.estimate;
    out << l.level << ',' << format_real(l.h) << ',' << l.n_dofs << ',' << format_real(l.J_uh) << ','
        << field(e.true_error) << ',' << format_real(e.eta1) << ',' << format_real(e.eta2) << ','
        << format_real(e.eta3) << ',' << format_real(e.remainder_enriched) << ',' << field(e.effectivity_eta1)
        << ',' << field(e.effectivity_eta2) << ',' << field(e.effectivity_eta3) << ',' << field(e.b_h_measured)
        << ',';
    if (l.reliability_ok) out << (*l.reliability_ok ? "true" : "false");
    out << '\n';
  }
}

std::string to_csv(const SweepReport& r) {
  std::ostringstream s;
  write_csv(r, s);
  return s.str();
}

nlohmann::json to_json(const SweepReport& r) {
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& l : r.levels) {
    const auto& e = l.estimate;
    levels.push_back({{"level", l.level},
                      {"h", l.h},
                      {"n_dofs", l.n_dofs},
                      {"n_dofs_plus", l.n_dofs_plus},
                      {"J_uh", l.J_uh},
                      {"J_uplus", l.J_uplus},
                      {"true_error", opt(e.true_error)},
                      {"eta1", e.eta1},
                      {"eta2", e.eta2},
                      {"eta3", e.eta3},
                      {"remainder", e.remainder_enriched},
                      {"remainder_reference", opt(e.remainder_reference)},
                      {"eff1", opt(e.effectivity_eta1)},
                      {"eff2", opt(e.effectivity_eta2)},
                      {"eff3", opt(e.effectivity_eta3)},
                      {"z_distance_to_Vh", e.z_distance_to_Vh},
                      {"b_h", opt(e.b_h_measured)},
                      {"eta2_source", to_string(e.eta2_source)},
                      {"orthogonality_defect", l.orthogonality_defect},
                      {"reliability_ok", l.reliability_ok ? nlohmann::json(*l.reliability_ok) : nullptr}});
  }
  return {{"scenario", r.scenario},
          {"problem", r.problem},
          {"functional", r.functional},
          {"enrichment", r.enrichment},
          {"dim", r.dim},
          {"degree", r.degree},
          {"base_size", r.base_size},
          {"J_exact", opt(r.J_exact)},
          {"rate_true_error", opt(r.rate_true_error)},
          {"rate_eta1", opt(r.rate_eta1)},
          {"verdict", r.verdict},
          {"levels", levels}};
}

SweepReport sweep_from_json(const nlohmann::json& doc) {
  SweepReport r;
  r.scenario = doc.at("scenario").get<std::string>();
  r.problem = doc.at("problem").get<std::string>();
  r.functional = doc.at("functional").get<std::string>();
  r.enrichment = doc.at("enrichment").get<std::string>();
  r.dim = doc.at("dim").get<int>();
  r.degree = doc.at("degree").get<int>();
  r.base_size = doc.at("base_size").get<int>();
  r.J_exact = opt_from(doc, "J_exact");
  r.rate_true_error = opt_from(doc, "rate_true_error");
  r.rate_eta1 = opt_from(doc, "rate_eta1");
  r.verdict = doc.at("verdict").get<std::string>();
  for (const auto& j : doc.at("levels")) {
    LevelReport l;
    l.level = j.at("level").get<int>();
    l.h = j.at("h").get<double>();
    l.n_dofs = j.at("n_dofs").get<int>();
    l.n_dofs_plus = j.at("n_dofs_plus").get<int>();
    l.J_uh = j.at("J_uh").get<double>();
    l.J_uplus = j.at("J_uplus").get<double>();
    auto& e = l.estimate;
    e.true_error = opt_from(j, "true_error");
    e.eta1 = j.at("eta1").get<double>();
    e.eta2 = j.at("eta2").get<double>();
    e.eta3 = j.at("eta3").get<double>();
    e.remainder_enriched = j.at("remainder").get<double>();
    e.remainder_reference = opt_from(j, "remainder_reference");
    e.effectivity_eta1 = opt_from(j, "eff1");
    e.effectivity_eta2 = opt_from(j, "eff2");
    e.effectivity_eta3 = opt_from(j, "eff3");
    e.z_distance_to_Vh = j.at("z_distance_to_Vh").get<double>();
    e.b_h_measured = opt_from(j, "b_h");
    e.eta2_source = role_from_string(j.at("eta2_source").get<std::string>());
    l.orthogonality_defect = j.at("orthogonality_defect").get<double>();
    if (!j.at("reliability_ok").is_null()) l.reliability_ok = j.at("reliability_ok").get<bool>();
    r.levels.push_back(l);
  }
  return r;
}

void emit_report(const SweepReport& r, ReportFormat format, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  if (format == ReportFormat::Csv) write_csv(r, out);
  else out << to_json(r).dump(2) << '\n';
  out.flush();
  if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

}  // namespace goest
