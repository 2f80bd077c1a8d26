#include "qsu11/cli.hpp"

#include <CLI11.hpp>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "qsu11/report.hpp"

namespace qsu11 {

namespace {

std::vector<double> parse_q_seq(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

// flat "key = value" lines, '#' comments; command-line flags override
bool apply_config_file(const std::string& path, RunConfig& cfg, std::ostream& err) {
  std::ifstream in(path);
  if (!in) {
    err << "cannot open config file '" << path << "'\n";
    return false;
  }
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      const char* ws = " \t\r";
      const size_t b = s.find_first_not_of(ws);
      if (b == std::string::npos) return std::string();
      return s.substr(b, s.find_last_not_of(ws) - b + 1);
    };
    if (trim(line).empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      err << path << ":" << lineno << ": expected 'key = value'\n";
      return false;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    try {
      if (key == "q") cfg.q = std::stod(val);
      else if (key == "l") cfg.l = std::stod(val);
      else if (key == "psi") cfg.psi = std::stod(val);
      else if (key == "c") cfg.c = std::stod(val);
      else if (key == "dim") cfg.dim = std::stoi(val);
      else if (key == "nmax") cfg.nmax = std::stoi(val);
      else if (key == "kmax") cfg.kmax = std::stoi(val);
      else if (key == "op") cfg.op = val;
      else if (key == "relation") cfg.relation = val;
      else if (key == "check") cfg.check = val;
      else if (key == "mu") cfg.mu = std::stod(val);
      else if (key == "q-seq") cfg.q_seq = val;
      else if (key == "out") cfg.out_path = val;
      else if (key == "format") cfg.format = val;
      else if (key == "tol-spectrum") cfg.tol_spectrum = std::stod(val);
      else if (key == "tol-gram") cfg.tol_gram = std::stod(val);
      else if (key == "seed-free") cfg.seed_free = (val == "true" || val == "1");
      // unknown keys may belong to another command; ignored
    } catch (const std::exception&) {
      err << path << ":" << lineno << ": bad value for '" << key << "'\n";
      return false;
    }
  }
  return true;
}

int worker_cap() {
  const char* env = std::getenv("QSU11_THREADS");
  if (!env) return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (!end || *end != '\0' || v < 1) throw DomainError("QSU11_THREADS must be a positive integer");
  return static_cast<int>(v);
}

bool all_pass(const std::vector<CheckLine>& checks) {
  for (const CheckLine& c : checks)
    if (!c.pass) return false;
  return true;
}

void emit(const RunConfig& cfg, const std::string& content, std::ostream& out) {
  if (cfg.out_path.empty())
    out << content;
  else
    write_file_atomic(cfg.out_path, content);
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  OpKind kind;
  if (!parse_op_kind(cfg.op, kind) || kind == OpKind::classical) {
    err << "unknown operator '" << cfg.op << "'\n";
    return 2;
  }
  if (cfg.dim < 16) {
    err << "dim must be >= 16 for the spectrum command\n";
    return 2;
  }
  RepParams p(QBase(cfg.q), cfg.l, cfg.psi, cfg.c);
  const SpectrumReport r = spectrum_report(kind, p, cfg.dim);
  std::vector<CheckLine> checks;
  if (r.prediction == PredictionType::interval) {
    checks.push_back({"interval-violation", r.max_violation, cfg.tol_spectrum,
                      r.max_violation <= cfg.tol_spectrum});
  } else if (r.prediction == PredictionType::point_set) {
    double worst = 0.0;
    for (size_t i = 0; i < std::min<size_t>(8, r.matched_points.size()); ++i)
      worst = std::max(worst, r.matched_points[i].abs_error);
    checks.push_back({"ladder-match", worst, 1e-9, worst <= 1e-9});
  } else if (r.ratio_estimate) {
    checks.push_back({"ladder-ratio-reported", *r.ratio_estimate, 1.0, true});
  }
  emit(cfg, cfg.format == "csv" ? spectrum_report_csv(r) : spectrum_report_json(r, checks),
       out);
  return all_pass(checks) ? 0 : 1;
}

int cmd_ortho(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Relation rel;
  if (!parse_relation(cfg.relation, rel)) {
    err << "unknown relation '" << cfg.relation << "'\n";
    return 2;
  }
  RepParams p(QBase(cfg.q), cfg.l, cfg.psi, cfg.c);
  MeasureSpec spec{rel, p};
  const GramReport r = gram_matrix(spec, cfg.nmax);
  std::vector<CheckLine> checks;
  checks.push_back({"offdiag-ratio", r.max_offdiag, cfg.tol_gram,
                    r.max_offdiag <= cfg.tol_gram});
  emit(cfg, cfg.format == "csv" ? gram_report_csv(r) : gram_report_json(r, p, checks),
       out);
  return all_pass(checks) ? 0 : 1;
}

int cmd_deficiency(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  OpKind kind;
  if (!parse_op_kind(cfg.op, kind) || kind == OpKind::classical) {
    err << "unknown operator '" << cfg.op << "'\n";
    return 2;
  }
  RepParams p(QBase(cfg.q), cfg.l, cfg.psi, cfg.c);
  const DeficiencyVerdict v = deficiency_test(kind, p, cfg.kmax);
  const bool unbounded_kind = kind == OpKind::I3 || kind == OpKind::I3_psi ||
                              kind == OpKind::I4_psi;
  const Verdict expected =
      unbounded_kind ? Verdict::indices_1_1 : Verdict::bounded_selfadjoint;
  std::vector<CheckLine> checks;
  checks.push_back({"verdict-matches", static_cast<double>(v.verdict == expected), 1.0,
                    v.verdict == expected});
  emit(cfg, deficiency_report_json(v, p, checks), out);
  return all_pass(checks) ? 0 : 1;
}

int cmd_limits(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const std::vector<double> qs = parse_q_seq(cfg.q_seq);
  if (qs.empty()) {
    err << "empty q sequence\n";
    return 2;
  }
  std::vector<double> errors;
  for (double qv : qs) {
    const QBase base(qv);
    if (cfg.check == "eigenvalue-map") {
      const double lam = (1.0 - std::pow(qv, cfg.mu)) /
                         (std::pow(qv, -0.5) - std::pow(qv, 0.5));
      errors.push_back(std::abs(lam - cfg.mu));
    } else if (cfg.check == "poly-limit") {
      // P_n^{(alpha)}(q^lambda | q) -> L_n^{(alpha)}(2 lambda); n=3, alpha=1, lambda=mu
      const double alpha = 1.0;
      const Complex Pq = eval_poly({Family::cont_q_laguerre, alpha}, 3,
                                   std::pow(qv, cfg.mu), base, EvalRoute::recurrence);
      const Complex Lc = eval_poly({Family::laguerre_classical, alpha}, 3, 2.0 * cfg.mu,
                                   base, EvalRoute::recurrence);
      errors.push_back(std::abs(Pq - Lc));
    } else if (cfg.check == "matrix-limit") {
      RepParams p(base, cfg.l);
      double worst = 0.0;
      for (int k = 0; k < 10; ++k) {
        worst = std::max(worst, std::abs(operator_diag_entry(OpKind::I1, k, p) -
                                         operator_diag_entry(OpKind::classical, k, p)));
        if (k < 9)
          worst = std::max(worst,
                           std::abs(operator_offdiag_entry(OpKind::I1, k, p) -
                                    operator_offdiag_entry(OpKind::classical, k, p)));
      }
      errors.push_back(worst);
    } else {
      err << "unknown limits check '" << cfg.check << "'\n";
      return 2;
    }
  }
  bool decreasing = true;
  for (size_t i = 1; i < errors.size(); ++i)
    if (!(errors[i] < errors[i - 1])) decreasing = false;
  emit(cfg, limits_csv(qs, errors), out);
  return decreasing ? 0 : 1;
}

int cmd_verify_all(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  RepParams p(QBase(cfg.q), cfg.l, cfg.psi, cfg.c);
  const double q = cfg.q;
  using Task = std::function<CheckLine()>;
  std::vector<std::pair<std::string, Task>> tasks;

  tasks.emplace_back("i1-interval", [&]() -> CheckLine {
    const SpectrumReport r = spectrum_report(OpKind::I1, p, 300);
    const bool filled = r.eigenvalues[0] < 1e-3 &&
                        r.eigenvalues[r.dim - 1] > r.interval_hi - 1e-3;
    return {"i1-interval", r.max_violation, 1e-10,
            r.max_violation <= 1e-10 && filled};
  });
  tasks.emplace_back("i1-phase-invariance", [&]() -> CheckLine {
    const JacobiOperator op = build_operator(OpKind::I1, p, 200);
    const Eigen::VectorXd base_ev = eigen_truncated(op);
    double worst = 0.0;
    for (double phase : {0.0, 1.0, M_PI}) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
          phased_dense_matrix(op, phase), Eigen::EigenvaluesOnly);
      worst = std::max(worst, (es.eigenvalues() - base_ev).cwiseAbs().maxCoeff());
    }
    return {"i1-phase-invariance", worst, 1e-10, worst <= 1e-10};
  });
  tasks.emplace_back("i2-ladder", [&]() -> CheckLine {
    const SpectrumReport r = spectrum_report(OpKind::I2_psi, p, 200);
    double worst = 0.0;
    for (int i = 0; i < 8; ++i) worst = std::max(worst, r.matched_points[i].abs_error);
    return {"i2-ladder", worst, 1e-9, worst <= 1e-9};
  });
  tasks.emplace_back("i1-reconstruction", [&]() -> CheckLine {
    double worst = 0.0;
    for (int n = 0; n <= 10; ++n)
      worst = std::max(worst, reconstruct_basis(OpKind::I1, n, p, n + 6));
    return {"i1-reconstruction", worst, 1e-9, worst <= 1e-9};
  });
  tasks.emplace_back("asc-duality", [&]() -> CheckLine {
    const UnitarityResidual u = unitarity_check(Pairing::little_qL_vs_asc, p, 6, 6);
    return {"asc-duality", u.col_residual, 1e-9, u.col_residual <= 1e-9};
  });
  tasks.emplace_back("i2-reconstruction", [&]() -> CheckLine {
    double worst = 0.0;
    for (int n = 0; n <= 10; ++n)
      worst = std::max(worst, reconstruct_basis(OpKind::I2_psi, n, p, n + 6));
    return {"i2-reconstruction", worst, 1e-9, worst <= 1e-9};
  });
  tasks.emplace_back("i3-deficiency", [&]() -> CheckLine {
    const DeficiencyVerdict v = deficiency_test(OpKind::I3, p, 200);
    const double dev = std::abs(v.ratio_limit - q * q);
    return {"i3-deficiency", dev, 1e-6,
            v.verdict == Verdict::indices_1_1 && v.logconcave_ok && dev <= 1e-6};
  });
  tasks.emplace_back("fk-orthogonality", [&]() -> CheckLine {
    MeasureSpec spec{Relation::fk_719, p};
    const GramReport r = gram_matrix(spec, 6);
    return {"fk-orthogonality", r.max_offdiag, 1e-8, r.max_offdiag <= 1e-8};
  });
  tasks.emplace_back("i4-deficiency", [&]() -> CheckLine {
    const DeficiencyVerdict v = deficiency_test(OpKind::I4_psi, p, 200);
    const double dev = std::abs(v.ratio_limit - q);
    return {"i4-deficiency", dev, 1e-6,
            v.verdict == Verdict::indices_1_1 && v.logconcave_ok && dev <= 1e-6};
  });

  const int cap = worker_cap();
  std::vector<CheckLine> results(tasks.size());
  if (cap <= 1) {
    for (size_t i = 0; i < tasks.size(); ++i) results[i] = tasks[i].second();
  } else {
    size_t next = 0;
    while (next < tasks.size()) {
      const size_t batch = std::min<size_t>(cap, tasks.size() - next);
      std::vector<std::future<CheckLine>> futs;
      for (size_t i = 0; i < batch; ++i)
        futs.push_back(std::async(std::launch::async, tasks[next + i].second));
      for (size_t i = 0; i < batch; ++i) results[next + i] = futs[i].get();
      next += batch;
    }
  }

  std::string summary;
  bool ok = true;
  for (const CheckLine& c : results) {
    summary += (c.pass ? "PASS" : "FAIL");
    summary += "  " + c.name + "  value=" + format_double(c.value) +
               "  tol=" + format_double(c.tol) + "\n";
    ok = ok && c.pass;
  }
  if (!ok) {
    summary += "failing:";
    for (const CheckLine& c : results)
      if (!c.pass) summary += " " + c.name;
    summary += "\n";
  }
  if (!cfg.out_path.empty()) write_file_atomic(cfg.out_path, checks_json("verify-all", p, results));
  out << summary;
  (void)err;
  return ok ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"spectral verification toolkit for q-deformed ladder operators"};
  app.require_subcommand(1);

  std::string config_dummy;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_dummy, "flat key = value configuration file");
    sub->add_option("--q", cfg.q, "deformation parameter in (0,1)");
    sub->add_option("--l", cfg.l, "lowest weight, > 0");
    sub->add_option("--psi", cfg.psi, "phase in [0, 2pi)");
    sub->add_option("--c", cfg.c, "discrete-measure scale, > 0");
    sub->add_option("--out", cfg.out_path, "report file path (atomic write)");
    sub->add_option("--format", cfg.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_flag("--seed-free", cfg.seed_free, "all computations are deterministic");
    sub->add_option("--tol-spectrum", cfg.tol_spectrum, "spectrum tolerance");
    sub->add_option("--tol-gram", cfg.tol_gram, "gram off-diagonal tolerance");
  };

  CLI::App* sp = app.add_subcommand("spectrum", "diagonalize a finite section");
  sp->add_option("--op", cfg.op, "operator kind");
  sp->add_option("--dim", cfg.dim, "truncation dimension");
  add_common(sp);

  CLI::App* ortho = app.add_subcommand("ortho", "certify an orthogonality relation");
  ortho->add_option("--relation", cfg.relation, "relation id");
  ortho->add_option("--nmax", cfg.nmax, "gram size");
  add_common(ortho);

  CLI::App* defc = app.add_subcommand("deficiency", "limit-point/limit-circle classification");
  defc->add_option("--op", cfg.op, "operator kind");
  defc->add_option("--kmax", cfg.kmax, "coefficient range");
  add_common(defc);

  CLI::App* lim = app.add_subcommand("limits", "q->1 convergence tables");
  lim->add_option("--check", cfg.check, "eigenvalue-map, poly-limit or matrix-limit");
  lim->add_option("--mu", cfg.mu, "target value of the limit");
  lim->add_option("--q-seq", cfg.q_seq, "comma-separated q values");
  add_common(lim);

  CLI::App* all = app.add_subcommand("verify-all", "run every named check");
  all->add_option("--dim", cfg.dim, "truncation dimension");
  add_common(all);

  // apply the config file first so that explicit flags take precedence
  for (size_t i = 0; i + 1 < args.size(); ++i) {
    if (args[i] == "--config" && !apply_config_file(args[i + 1], cfg, err)) return 2;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << e.what() << "\n";
    return 2;
  }

  try {
    if (!(cfg.q > 0.0 && cfg.q < 1.0)) {
      err << "q must lie in (0,1)\n";
      return 2;
    }
    if (!(cfg.l > 0.0)) {
      err << "l must be positive\n";
      return 2;
    }
    if (!cfg.seed_free) {
      err << "computations are always deterministic; --seed-free cannot be disabled\n";
      return 2;
    }
    if (sp->parsed()) return cmd_spectrum(cfg, out, err);
    if (ortho->parsed()) return cmd_ortho(cfg, out, err);
    if (defc->parsed()) return cmd_deficiency(cfg, out, err);
    if (lim->parsed()) return cmd_limits(cfg, out, err);
    if (all->parsed()) return cmd_verify_all(cfg, out, err);
  } catch (const DomainError& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return 1;
  }
  err << "no command\n";
  return 2;
}

}  // namespace qsu11
