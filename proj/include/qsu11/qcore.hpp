#ifndef QSU11_QCORE_HPP
#define QSU11_QCORE_HPP

#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

namespace qsu11 {

using Complex = std::complex<double>;

/// Parameter or argument outside the admissible domain.
class DomainError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A series or infinite product failed to converge within budget.
class SeriesError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Deformation base, 0 < q < 1 strictly.
struct QBase {
  double q;
  explicit QBase(double q_) : q(q_) {
    if (!(q > 0.0 && q < 1.0)) throw DomainError("q must lie in (0,1)");
  }
};

/// Truncation budget for series and infinite products.
struct SeriesControl {
  int max_terms = 10000;
  double abs_tol = 1e-16;
  double rel_tol = 1e-14;
};

/// Parameters of a basic hypergeometric series r_phi_s.
struct HyperSpec {
  std::vector<Complex> upper;
  std::vector<Complex> lower;
  Complex argument = 0.0;
  QBase base;
};

/// [a]_q = (q^{a/2} - q^{-a/2}) / (q^{1/2} - q^{-1/2}).
double q_bracket(double a, QBase base);

/// Finite product (a;q)_n = (1-a)(1-aq)...(1-aq^{n-1}); empty product is 1.
Complex q_pochhammer(Complex a, QBase base, int n);

/// Infinite product (a;q)_inf, truncated once |a q^r| < abs_tol.
Complex q_pochhammer_inf(Complex a, QBase base, SeriesControl ctl = {});

/// Generalized exponent (a;q)_nu = (a;q)_inf / (a q^nu;q)_inf, real nu.
Complex q_pochhammer_gen(Complex a, QBase base, double nu, SeriesControl ctl = {});

/// Jackson's E_q(z) = (-z;q)_inf.
Complex q_exp_E(Complex z, QBase base, SeriesControl ctl = {});

/// Index n such that an upper parameter equals q^{-n} (within 1e-12 in
/// log-q units), which terminates the series after n+1 terms.
std::optional<int> terminating_index(const std::vector<Complex>& upper, QBase base);

/// Evaluates sum_k prod(a_i;q)_k / ((q;q)_k prod(b_j;q)_k) *
/// [(-1)^k q^{k(k-1)/2}]^{1+s-r} z^k.  Terminating upper parameters are
/// detected and the sum is cut exactly; non-terminating series with
/// r > s+1 are rejected as divergent.
Complex basic_hyper(const HyperSpec& spec, SeriesControl ctl = {});

}  // namespace qsu11

#endif
