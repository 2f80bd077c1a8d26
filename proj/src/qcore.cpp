#include "qsu11/qcore.hpp"

#include <cmath>

namespace qsu11 {

double q_bracket(double a, QBase base) {
  const double rq = std::sqrt(base.q);
  return (std::pow(base.q, a / 2.0) - std::pow(base.q, -a / 2.0)) / (rq - 1.0 / rq);
}

Complex q_pochhammer(Complex a, QBase base, int n) {
  if (n < 0) throw DomainError("q_pochhammer: n must be nonnegative");
  Complex r = 1.0;
  Complex aq = a;
  for (int k = 0; k < n; ++k) {
    r *= (1.0 - aq);
    aq *= base.q;
  }
  return r;
}

Complex q_pochhammer_inf(Complex a, QBase base, SeriesControl ctl) {
  if (!std::isfinite(std::abs(a))) throw DomainError("q_pochhammer_inf: |a| must be finite");
  Complex r = 1.0;
  Complex aq = a;
  for (int k = 0; k < ctl.max_terms; ++k) {
    if (std::abs(aq) < ctl.abs_tol) return r;
    r *= (1.0 - aq);
    aq *= base.q;
  }
  throw SeriesError("q_pochhammer_inf: factor count exceeded max_terms");
}

Complex q_pochhammer_gen(Complex a, QBase base, double nu, SeriesControl ctl) {
  const double rounded = std::round(nu);
  if (std::abs(nu - rounded) < 1e-12 && rounded >= 0.0) {
    return q_pochhammer(a, base, static_cast<int>(rounded));
  }
  return q_pochhammer_inf(a, base, ctl) /
         q_pochhammer_inf(a * std::pow(base.q, nu), base, ctl);
}

Complex q_exp_E(Complex z, QBase base, SeriesControl ctl) {
  return q_pochhammer_inf(-z, base, ctl);
}

std::optional<int> terminating_index(const std::vector<Complex>& upper, QBase base) {
  std::optional<int> best;
  const double logq = std::log(base.q);
  for (const Complex& a : upper) {
    const double mag = std::abs(a);
    if (mag < 1.0 || std::abs(a.imag()) > 1e-12 * mag || a.real() <= 0.0) continue;
    const double x = std::log(a.real()) / logq;  // a = q^x, x <= 0
    const int n = static_cast<int>(std::llround(-x));
    if (n < 0 || std::abs(x + n) > 1e-12) continue;
    if (!best || n < *best) best = n;
  }
  return best;
}

Complex basic_hyper(const HyperSpec& spec, SeriesControl ctl) {
  const double q = spec.base.q;
  const int r = static_cast<int>(spec.upper.size());
  const int s = static_cast<int>(spec.lower.size());
  const int p = 1 + s - r;
  const std::optional<int> nterm = terminating_index(spec.upper, spec.base);

  if (!nterm && r > s + 1 && spec.argument != 0.0)
    throw SeriesError("basic_hyper: non-terminating series with r > s+1 diverges");

  // lower parameter q^{-m} with m before the cut divides by zero
  if (auto mpole = terminating_index(spec.lower, spec.base)) {
    if (!nterm || *mpole < *nterm)
      throw DomainError("basic_hyper: lower parameter q^{-m} hits a pole");
  }

  Complex total = 0.0;
  Complex term = 1.0;
  double qk = 1.0;  // q^k
  int small_streak = 0;
  for (int k = 0; k < ctl.max_terms; ++k) {
    total += term;
    if (nterm && k >= *nterm) return total;
    Complex num = 1.0;
    for (const Complex& a : spec.upper) num *= (1.0 - a * qk);
    Complex den = 1.0 - q * qk;
    for (const Complex& b : spec.lower) den *= (1.0 - b * qk);
    if (den == 0.0) throw DomainError("basic_hyper: zero denominator factor");
    Complex extra = 1.0;
    if (p != 0) {
      const Complex base_factor = -qk;
      extra = (p > 0) ? std::pow(base_factor, p) : 1.0 / std::pow(base_factor, -p);
    }
    term *= num / den * extra * spec.argument;
    qk *= q;
    if (!nterm) {
      const double bound = std::max(ctl.abs_tol, ctl.rel_tol * std::abs(total));
      small_streak = (std::abs(term) < bound) ? small_streak + 1 : 0;
      if (small_streak >= 2 && k >= 3) {
        total += term;
        return total;
      }
    }
  }
  throw SeriesError("basic_hyper: max_terms exceeded");
}

}  // namespace qsu11
