#include "qsu11/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace qsu11 {

using nlohmann::json;
namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

json params_json(const RepParams& p) {
  json j{{"q", p.base.q}, {"l", p.l}, {"psi", p.psi}};
  if (p.c) j["c"] = *p.c;
  return j;
}

json checks_array(const std::vector<CheckLine>& checks) {
  json arr = json::array();
  for (const CheckLine& c : checks)
    arr.push_back(json{{"name", c.name}, {"value", c.value}, {"tol", c.tol}, {"pass", c.pass}});
  return arr;
}

}  // namespace

std::string spectrum_report_json(const SpectrumReport& r,
                                 const std::vector<CheckLine>& checks) {
  json j;
  j["params"] = params_json(r.params);
  j["op"] = to_string(r.kind);
  j["dim"] = r.dim;
  switch (r.prediction) {
    case PredictionType::interval:
      j["prediction"] = json{{"type", "interval"},
                             {"lo", r.interval_lo},
                             {"hi", r.interval_hi},
                             {"max_violation", r.max_violation}};
      break;
    case PredictionType::point_set: {
      json pts = json::array();
      for (const MatchedPoint& m : r.matched_points)
        pts.push_back(json{{"index", m.index},
                           {"predicted", m.predicted},
                           {"computed", m.computed},
                           {"abs_error", m.abs_error}});
      j["prediction"] = json{{"type", "point_set"}, {"matched_points", pts}};
      break;
    }
    case PredictionType::extension_dependent:
      j["prediction"] = json{{"type", "extension_dependent"},
                             {"ratio_estimate",
                              r.ratio_estimate ? json(*r.ratio_estimate) : json()},
                             {"note", r.note}};
      break;
  }
  j["eigenvalues"] = std::vector<double>(r.eigenvalues.data(),
                                         r.eigenvalues.data() + r.eigenvalues.size());
  j["checks"] = checks_array(checks);
  return j.dump(2) + "\n";
}

std::string spectrum_report_csv(const SpectrumReport& r) {
  std::string out = "index,eigenvalue,predicted,abs_error\n";
  const double q = r.params.base.q;
  for (int i = 0; i < r.eigenvalues.size(); ++i) {
    const double ev = r.eigenvalues[i];
    std::string pred, err;
    if (r.prediction == PredictionType::interval) {
      const double clamped = std::min(std::max(ev, r.interval_lo), r.interval_hi);
      pred = format_double(clamped);
      err = format_double(std::abs(ev - clamped));
    } else if (r.prediction == PredictionType::point_set) {
      // nearest ladder point
      double best = std::numeric_limits<double>::infinity(), bp = 0.0;
      for (int n = 0; n < 64; ++n) {
        const double pv = std::pow(q, n) / (1.0 - 1.0 / q);
        if (std::abs(pv - ev) < best) {
          best = std::abs(pv - ev);
          bp = pv;
        }
      }
      pred = format_double(bp);
      err = format_double(best);
    }
    out += std::to_string(i) + "," + format_double(ev) + "," + pred + "," + err + "\n";
  }
  return out;
}

std::string gram_report_json(const GramReport& r, const RepParams& params,
                             const std::vector<CheckLine>& checks) {
  json j;
  j["params"] = params_json(params);
  j["relation"] = to_string(r.relation);
  j["n_max"] = r.n_max;
  std::vector<std::vector<double>> g(r.gram.rows(), std::vector<double>(r.gram.cols()));
  for (int i = 0; i < r.gram.rows(); ++i)
    for (int jj = 0; jj < r.gram.cols(); ++jj) g[i][jj] = r.gram(i, jj);
  j["gram"] = g;
  j["max_offdiag"] = r.max_offdiag;
  j["max_diag_dev"] = r.max_diag_dev;
  j["fitted_constant"] = r.fitted_constant;
  j["truncation_terms_used"] = r.truncation_terms_used;
  j["checks"] = checks_array(checks);
  return j.dump(2) + "\n";
}

std::string gram_report_csv(const GramReport& r) {
  std::string out = "i,j,value\n";
  for (int i = 0; i < r.gram.rows(); ++i)
    for (int j = 0; j < r.gram.cols(); ++j)
      out += std::to_string(i) + "," + std::to_string(j) + "," +
             format_double(r.gram(i, j)) + "\n";
  return out;
}

std::string deficiency_report_json(const DeficiencyVerdict& v, const RepParams& params,
                                   const std::vector<CheckLine>& checks) {
  json j;
  j["params"] = params_json(params);
  j["op"] = to_string(v.kind);
  j["logconcave_ok"] = v.logconcave_ok;
  j["carleman_sum"] = v.carleman_sum;
  j["ratio_limit"] = v.ratio_limit;
  j["verdict"] = to_string(v.verdict);
  j["checks"] = checks_array(checks);
  return j.dump(2) + "\n";
}

std::string checks_json(const std::string& command, const RepParams& params,
                        const std::vector<CheckLine>& checks) {
  json j;
  j["command"] = command;
  j["params"] = params_json(params);
  j["checks"] = checks_array(checks);
  return j.dump(2) + "\n";
}

std::string limits_csv(const std::vector<double>& qs, const std::vector<double>& errors) {
  std::string out = "q,error\n";
  for (size_t i = 0; i < qs.size(); ++i)
    out += format_double(qs[i]) + "," + format_double(errors[i]) + "\n";
  return out;
}

const char* to_string(OpKind k) {
  switch (k) {
    case OpKind::I1: return "I1";
    case OpKind::I1_phi: return "I1_phi";
    case OpKind::I2_psi: return "I2";
    case OpKind::I3: return "I3";
    case OpKind::I3_psi: return "I3_psi";
    case OpKind::I4_psi: return "I4";
    case OpKind::classical: return "classical";
  }
  return "?";
}

const char* to_string(Relation r) {
  switch (r) {
    case Relation::cont_qL_313: return "cont_qL_313";
    case Relation::little_qL_510: return "little_qL_510";
    case Relation::qLaguerre_712: return "qLaguerre_712";
    case Relation::asc_dual_514: return "asc_dual_514";
    case Relation::fk_719: return "fk_719";
  }
  return "?";
}

bool parse_op_kind(const std::string& s, OpKind& out) {
  if (s == "I1") out = OpKind::I1;
  else if (s == "I1_phi") out = OpKind::I1_phi;
  else if (s == "I2" || s == "I2_psi") out = OpKind::I2_psi;
  else if (s == "I3") out = OpKind::I3;
  else if (s == "I3_psi") out = OpKind::I3_psi;
  else if (s == "I4" || s == "I4_psi") out = OpKind::I4_psi;
  else if (s == "classical") out = OpKind::classical;
  else return false;
  return true;
}

bool parse_relation(const std::string& s, Relation& out) {
  if (s == "cont_qL_313") out = Relation::cont_qL_313;
  else if (s == "little_qL_510") out = Relation::little_qL_510;
  else if (s == "qLaguerre_712") out = Relation::qLaguerre_712;
  else if (s == "asc_dual_514") out = Relation::asc_dual_514;
  else if (s == "fk_719") out = Relation::fk_719;
  else return false;
  return true;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out << content;
  }
  fs::rename(tmp, target);
}

}  // namespace qsu11
