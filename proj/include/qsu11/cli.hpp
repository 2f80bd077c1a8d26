#ifndef QSU11_CLI_HPP
#define QSU11_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace qsu11 {

struct RunConfig {
  std::string command;
  double q = 0.5;
  double l = 1.0;
  double psi = 0.0;
  double c = 1.0;
  int dim = 300;
  int nmax = 8;
  int kmax = 200;
  std::string op = "I1";
  std::string relation = "cont_qL_313";
  std::string check = "eigenvalue-map";
  double mu = 1.0;
  std::string q_seq = "0.9,0.99,0.999";
  std::string out_path;
  std::string format = "json";  // csv | json
  bool seed_free = true;
  double tol_spectrum = 1e-10;
  double tol_gram = 1e-8;
};

/// Runs one CLI invocation.  Returns the process exit status:
/// 0 all checks pass, 1 a check failed, 2 invalid configuration.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qsu11

#endif
