#include "qsu11/qpolys.hpp"

#include <cmath>

#include "qsu11/series.hpp"

namespace qsu11 {

namespace {

constexpr Complex kI(0.0, 1.0);

// e^{i theta} from nu = cos(theta); works off [-1,1] through the complex sqrt
Complex eitheta_from_nu(Complex nu) {
  return nu + kI * std::sqrt(Complex(1.0, 0.0) - nu * nu);
}

// e^{theta} from u = 2 cosh(theta), root of e^{2t} - u e^t + 1 = 0
Complex etheta_from_2cosh(Complex u) {
  const Complex root = std::sqrt(u * u - 4.0);
  Complex e = (u + root) / 2.0;
  if (std::abs(e) < 1.0) e = (u - root) / 2.0;
  return e;
}

void check_family_domain(const PolyFamily& f, double q) {
  switch (f.tag) {
    case Family::laguerre_classical:
    case Family::cont_q_laguerre:
    case Family::q_laguerre:
    case Family::phi31:
      if (!(f.alpha_or_a > -1.0)) throw DomainError("family parameter alpha must exceed -1");
      break;
    case Family::little_q_laguerre:
    case Family::asc_dual:
      if (!(f.alpha_or_a > 0.0 && f.alpha_or_a < 1.0 / q))
        throw DomainError("family parameter a must lie in (0, 1/q)");
      break;
  }
}

Complex eval_recurrence(const PolyFamily& f, int n, Complex arg, QBase base) {
  const double q = base.q;
  const double al = f.alpha_or_a;
  Complex pm1 = 0.0, p0 = 1.0;
  if (n == 0) return p0;
  for (int k = 0; k < n; ++k) {
    Complex next;
    switch (f.tag) {
      case Family::laguerre_classical:
        next = ((2.0 * k + al + 1.0 - arg) * p0 - (k + al) * pm1) / (k + 1.0);
        break;
      case Family::cont_q_laguerre: {
        const double rq = std::sqrt(q);
        const Complex lhs =
            (2.0 * rq * arg -
             (std::pow(q, 0.25) + std::pow(q, -0.25)) * std::pow(q, (al + 2.0) / 2.0 + k)) *
                p0 -
            std::pow(q, (2.0 * al + 3.0) / 4.0) * (1.0 - std::pow(q, al + k)) * pm1;
        next = lhs / (std::pow(q, (1.0 - 2.0 * al) / 4.0) * (1.0 - std::pow(q, k + 1)));
        break;
      }
      case Family::little_q_laguerre: {
        const double A = std::pow(q, k) * (1.0 - al * std::pow(q, k + 1));
        const double C = al * std::pow(q, k) * (1.0 - std::pow(q, k));
        next = (((A + C) - arg) * p0 - C * pm1) / A;
        break;
      }
      case Family::q_laguerre: {
        const Complex rhs = (1.0 - std::pow(q, k + 1) + q * (1.0 - std::pow(q, al + k)) -
                             std::pow(q, al + 1.0 + 2.0 * k) * arg) *
                                p0 -
                            q * (1.0 - std::pow(q, al + k)) * pm1;
        next = rhs / (1.0 - std::pow(q, k + 1));
        break;
      }
      case Family::asc_dual: {
        const double qmk = std::pow(q, -k);
        next = (((1.0 + al) * qmk - arg) * p0 - qmk * (1.0 - std::pow(q, k)) * pm1) /
               (al * qmk);
        break;
      }
      case Family::phi31: {
        // d lambda with d = (1-q) q^{l-1}, l = (alpha+1)/2
        const double d = (1.0 - q) * std::pow(q, (al - 1.0) / 2.0);
        next = (std::pow(q, k) * d * arg * p0 -
                q * (1.0 - std::pow(q, al + k)) * pm1) /
               (1.0 - std::pow(q, k + 1));
        break;
      }
    }
    pm1 = p0;
    p0 = next;
  }
  return p0;
}

// stable convolution form of the continuous q-Laguerre polynomial
Complex cont_q_laguerre_convolution(int n, double alpha, Complex nu, QBase base) {
  const double q = base.q;
  const Complex eit = eitheta_from_nu(nu);
  const Complex a1 = std::pow(q, (2.0 * alpha + 1.0) / 4.0) / eit;
  const Complex a2 = std::pow(q, (2.0 * alpha + 3.0) / 4.0) * eit;
  // running Pochhammers (a;q)_j, indexed 0..n
  std::vector<Complex> p1(n + 1), p2(n + 1), pq(n + 1);
  p1[0] = p2[0] = pq[0] = 1.0;
  for (int j = 1; j <= n; ++j) {
    const double qj = std::pow(q, j - 1);
    p1[j] = p1[j - 1] * (1.0 - a1 * qj);
    p2[j] = p2[j - 1] * (1.0 - a2 * qj);
    pq[j] = pq[j - 1] * (1.0 - std::pow(q, j));
  }
  Complex sum = 0.0;
  for (int j = 0; j <= n; ++j)
    sum += p1[j] * p2[n - j] / (pq[j] * pq[n - j]) * std::pow(eit, 2 * j - n);
  return std::pow(q, (2.0 * alpha + 1.0) * n / 4.0) * sum;
}

Complex eval_explicit(const PolyFamily& f, int n, Complex arg, QBase base) {
  const double q = base.q;
  const double al = f.alpha_or_a;
  switch (f.tag) {
    case Family::laguerre_classical: {
      // ((alpha+1)_n / n!) sum_k (-n)_k x^k / ((alpha+1)_k k!)
      Complex sum = 0.0, term = 1.0;
      for (int k = 0; k <= n; ++k) {
        sum += term;
        if (k == n) break;
        term *= (-(double)n + k) * arg / ((al + 1.0 + k) * (k + 1.0));
      }
      double pref = 1.0;
      for (int k = 0; k < n; ++k) pref *= (al + 1.0 + k) / (k + 1.0);
      return pref * sum;
    }
    case Family::cont_q_laguerre:
      return cont_q_laguerre_convolution(n, al, arg, base);
    case Family::little_q_laguerre: {
      HyperSpec spec{{std::pow(q, -n), 0.0}, {al * q}, q * arg, base};
      return basic_hyper(spec);
    }
    case Family::q_laguerre: {
      HyperSpec spec{{std::pow(q, -n)},
                     {std::pow(q, al + 1.0)},
                     -std::pow(q, n + al + 1.0) * arg,
                     base};
      return q_pochhammer(std::pow(q, al + 1.0), base, n) /
             q_pochhammer(q, base, n) * basic_hyper(spec);
    }
    case Family::asc_dual: {
      HyperSpec spec{{std::pow(q, -n), arg}, {}, std::pow(q, n) / al, base};
      return basic_hyper(spec);
    }
    case Family::phi31: {
      const double d = (1.0 - q) * std::pow(q, (al - 1.0) / 2.0);
      const double qlh = std::pow(q, (al + 1.0) / 2.0 + 0.5);  // q^{l+1/2}
      const Complex et = etheta_from_2cosh(-d * arg / qlh);
      const Complex ql = std::pow(q, (al + 1.0) / 2.0);
      HyperSpec spec{{std::pow(q, -n), -kI * ql * et, -kI * ql / et},
                     {std::pow(q, al + 1.0)},
                     -std::pow(q, n),
                     base};
      return std::pow(-kI, n) * std::pow(q, n / 2.0) *
             q_pochhammer(std::pow(q, al + 1.0), base, n) /
             q_pochhammer(q, base, n) * basic_hyper(spec);
    }
  }
  throw DomainError("eval_poly: unknown family");
}

}  // namespace

SpectralPoint spectral_point_from_lambda(OpKind kind, double lambda, const RepParams& p) {
  const double q = p.base.q;
  SpectralPoint pt;
  pt.kind = kind;
  pt.lambda = lambda;
  switch (kind) {
    case OpKind::I1:
    case OpKind::I1_phi: {
      pt.nu = 1.0 - (std::pow(q, -0.5) - std::pow(q, 0.5)) * lambda;
      pt.theta = std::acos(Complex(pt.nu));
      break;
    }
    case OpKind::I2_psi: {
      const double qy = (1.0 - 1.0 / q) * lambda;
      if (!(qy > 0.0)) throw DomainError("I2 spectral point needs lambda(1-1/q) > 0");
      pt.y = std::log(qy) / std::log(q);
      break;
    }
    case OpKind::I3:
    case OpKind::I3_psi:
      pt.nu = 2.0 * (1.0 - q) * lambda;
      break;
    case OpKind::I4_psi: {
      // the matrix entries a_k place the eigenvalue at lambda = -2 cosh(theta)
      const Complex et = etheta_from_2cosh(Complex(-lambda));
      pt.theta = std::log(et);
      break;
    }
    case OpKind::classical:
      throw DomainError("no spectral-point parametrization for the classical kind");
  }
  return pt;
}

SpectralPoint spectral_point_from_theta(OpKind kind, Complex theta, const RepParams& p) {
  const double q = p.base.q;
  SpectralPoint pt;
  pt.kind = kind;
  pt.theta = theta;
  switch (kind) {
    case OpKind::I1:
    case OpKind::I1_phi: {
      const Complex nu = std::cos(theta);
      pt.nu = nu.real();
      pt.lambda = ((1.0 - nu) / (std::pow(q, -0.5) - std::pow(q, 0.5))).real();
      break;
    }
    case OpKind::I4_psi:
      pt.lambda = (-2.0 * std::cosh(theta)).real();
      break;
    default:
      throw DomainError("theta parametrization applies to I1 and I4 kinds");
  }
  return pt;
}

SpectralPoint spectral_point_from_nu(OpKind kind, double nu, const RepParams& p) {
  const double q = p.base.q;
  switch (kind) {
    case OpKind::I1:
    case OpKind::I1_phi:
      return spectral_point_from_lambda(
          kind, (1.0 - nu) / (std::pow(q, -0.5) - std::pow(q, 0.5)), p);
    case OpKind::I3:
    case OpKind::I3_psi:
      return spectral_point_from_lambda(kind, nu / (2.0 * (1.0 - q)), p);
    default:
      throw DomainError("nu parametrization applies to I1 and I3 kinds");
  }
}

SpectralPoint spectral_point_from_y(double y, const RepParams& p) {
  const double q = p.base.q;
  SpectralPoint pt;
  pt.kind = OpKind::I2_psi;
  pt.y = y;
  pt.lambda = std::pow(q, y) / (1.0 - 1.0 / q);
  return pt;
}

double basis_normalizer(int n, const RepParams& p) {
  if (n < 0) throw DomainError("basis_normalizer: n must be nonnegative");
  const double q = p.base.q;
  const double num = q_pochhammer(std::pow(q, 2.0 * p.l), p.base, n).real();
  const double den = q_pochhammer(q, p.base, n).real();
  return std::pow(q, (1.0 - 2.0 * p.l) * n / 4.0) * std::sqrt(num / den);
}

Complex eval_poly(const PolyFamily& family, int n, Complex arg, QBase base,
                  EvalRoute route) {
  if (n < 0) throw DomainError("eval_poly: degree must be nonnegative");
  check_family_domain(family, base.q);
  return route == EvalRoute::recurrence ? eval_recurrence(family, n, arg, base)
                                        : eval_explicit(family, n, arg, base);
}

Complex little_ql_stable(int n, double a, Complex x, QBase base) {
  const double q = base.q;
  int grid_k = -1;
  if (std::abs(x.imag()) <= 1e-12 * std::abs(x) && x.real() > 0.0) {
    const double kx = std::log(x.real()) / std::log(q);
    const int k = static_cast<int>(std::llround(kx));
    if (k >= 0 && std::abs(kx - k) < 1e-9) grid_k = k;
  }
  const PolyFamily fam{Family::little_q_laguerre, a};
  if (grid_k < 0) return eval_recurrence(fam, n, x, base);
  if (grid_k >= n) return eval_explicit(fam, n, x, base);
  // p_n(q^k) = hatp_k(q^{-n}) / (q^{1-2l-n};q)_n with the prefactor in the
  // closed form (-1)^n q^{-2ln - n(n-1)/2} (q^{2l};q)_n, a = q^{2l-1}
  const double twol = std::log(a * q) / std::log(q);
  const Complex hp = eval_explicit({Family::asc_dual, a}, grid_k,
                                   std::pow(q, -double(n)), base);
  const double sgn = (n % 2 == 0) ? 1.0 : -1.0;
  const double scale = std::pow(q, twol * n + 0.5 * n * (n - 1));
  return sgn * scale / q_pochhammer(std::pow(q, twol), base, n).real() * hp;
}

Complex overlap_coeff(const SpectralPoint& pt, int n, const RepParams& p) {
  const double q = p.base.q;
  const double twol = 2.0 * p.l;
  const double pq = q_pochhammer(q, p.base, n).real();
  const double p2l = q_pochhammer(std::pow(q, twol), p.base, n).real();
  const Complex phase = std::exp(kI * (p.psi * n));
  switch (pt.kind) {
    case OpKind::I1:
    case OpKind::I1_phi: {
      const Complex P = eval_poly({Family::cont_q_laguerre, twol - 1.0}, n, pt.nu,
                                  p.base, EvalRoute::recurrence);
      Complex v = std::pow(q, (0.25 - p.l) * n) * std::sqrt(pq / p2l) * P;
      return pt.kind == OpKind::I1_phi ? phase * v : v;
    }
    case OpKind::I2_psi: {
      const Complex little =
          little_ql_stable(n, std::pow(q, twol - 1.0), std::pow(q, pt.y), p.base);
      return phase * std::sqrt(p2l / pq) * std::pow(q, -p.l * n) * little;
    }
    case OpKind::I3:
    case OpKind::I3_psi: {
      const Complex L = eval_poly({Family::q_laguerre, twol - 1.0}, n, pt.nu, p.base,
                                  EvalRoute::recurrence);
      Complex v = std::pow(q, n / 2.0) * std::sqrt(pq / p2l) * L;
      return pt.kind == OpKind::I3_psi ? phase * v : v;
    }
    case OpKind::I4_psi: {
      // the family's natural argument carries d lambda_nat = q^{l+1/2} lambda
      const double lam_nat = std::pow(q, 1.5) / (1.0 - q) * pt.lambda;
      const Complex Pp = eval_poly({Family::phi31, twol - 1.0}, n, lam_nat, p.base,
                                   EvalRoute::recurrence);
      return phase * std::sqrt(pq / p2l) * Pp;
    }
    case OpKind::classical:
      throw DomainError("overlap_coeff: no overlap family for the classical kind");
  }
  throw DomainError("overlap_coeff: unknown kind");
}

Eigen::VectorXcd eigenfunction_coeffs(const SpectralPoint& pt, int n_max,
                                      const RepParams& p) {
  if (n_max < 0 || n_max > 200) throw DomainError("eigenfunction_coeffs: n_max out of range");
  const double q = p.base.q;
  const double l = p.l;
  TruncatedSeries s(n_max);
  switch (pt.kind) {
    case OpKind::I1:
    case OpKind::I1_phi: {
      const Complex eit = std::exp(kI * pt.theta);
      s.mul_poch_inf(std::pow(q, l / 2.0), p.base);
      s.mul_poch_inf(std::pow(q, (l + 1.0) / 2.0), p.base);
      s.div_poch_inf(std::pow(q, (1.0 - 2.0 * l) / 4.0) * eit, p.base);
      s.div_poch_inf(std::pow(q, (1.0 - 2.0 * l) / 4.0) / eit, p.base);
      break;
    }
    case OpKind::I2_psi: {
      const double yr = std::round(pt.y);
      if (std::abs(pt.y - yr) > 1e-9 || yr < 0.0)
        throw DomainError("I2 eigenfunction needs a spectrum point (integer y >= 0)");
      const int y = static_cast<int>(yr);
      s.mul_poch_inf(std::pow(q, (2.0 * l + 1.0) / 4.0), p.base);
      const Complex W = std::pow(q, pt.y + (1.0 - 6.0 * l) / 4.0);
      Eigen::VectorXcd poly = Eigen::VectorXcd::Zero(n_max + 1);
      Complex term = 1.0;
      for (int k = 0; k <= std::min(y, n_max); ++k) {
        poly[k] = term;
        term *= (1.0 - std::pow(q, k - y)) / (1.0 - std::pow(q, k + 1)) *
                (-std::pow(q, -k)) * W;
        // term ratio of 2phi0(q^{-y}, 0; -; q, W): [(-1) q^k]^{-1} W
      }
      s.mul_series(poly);
      break;
    }
    case OpKind::I3:
    case OpKind::I3_psi: {
      s.div_poch_inf(std::pow(q, (3.0 - 2.0 * l) / 4.0), p.base);
      Eigen::VectorXcd poly = Eigen::VectorXcd::Zero(n_max + 1);
      const double E = std::pow(q, (6.0 * l + 3.0) / 4.0);
      Complex term = 1.0;
      for (int k = 0; k <= n_max; ++k) {
        poly[k] = term;
        term *= (1.0 + pt.nu * std::pow(q, k)) / (1.0 - std::pow(q, k + 1)) *
                (-std::pow(q, k)) * E;
      }
      s.mul_series(poly);
      break;
    }
    case OpKind::I4_psi: {
      const Complex et = std::exp(pt.theta);
      s.mul_poch_inf(std::pow(q, (2.0 * l + 3.0) / 4.0) * et, p.base);
      s.mul_poch_inf(std::pow(q, (2.0 * l + 3.0) / 4.0) / et, p.base);
      s.div_poch_inf(kI * std::pow(q, (3.0 - 2.0 * l) / 4.0), p.base);
      s.div_poch_inf(-kI * std::pow(q, (3.0 - 2.0 * l) / 4.0), p.base);
      break;
    }
    case OpKind::classical:
      throw DomainError("eigenfunction_coeffs: no product form for the classical kind");
  }
  Eigen::VectorXcd out = s.coeffs();
  // phases enter through x -> e^{i psi} x
  const bool phased = pt.kind == OpKind::I1_phi || pt.kind == OpKind::I2_psi ||
                      pt.kind == OpKind::I3_psi || pt.kind == OpKind::I4_psi;
  if (phased && p.psi != 0.0) {
    for (int n = 0; n <= n_max; ++n) out[n] *= std::exp(kI * (p.psi * n));
  }
  return out;
}

Complex gf_closed_form(const PolyFamily& family, Complex t, Complex x, QBase base,
                       int variant) {
  const double q = base.q;
  const double al = family.alpha_or_a;
  switch (family.tag) {
    case Family::laguerre_classical:
      return std::pow(1.0 - t, -al - 1.0) * std::exp(x * t / (t - 1.0));
    case Family::little_q_laguerre: {
      const Complex pref = q_exp_E(-al * q * t, base);
      if (variant == 0) {
        HyperSpec spec{{1.0 / x, 0.0}, {}, x * t, base};
        return pref * basic_hyper(spec);
      }
      HyperSpec spec{{0.0, 0.0}, {q / t}, q * x, base};
      return pref / q_exp_E(-t, base) * basic_hyper(spec);
    }
    case Family::q_laguerre: {
      HyperSpec spec{{-x}, {0.0}, std::pow(q, al + 1.0) * t, base};
      return basic_hyper(spec) / q_pochhammer_inf(t, base);
    }
    default:
      throw DomainError("gf_closed_form: no closed generating function for this family");
  }
}

double generating_function_check(const PolyFamily& family, Complex t, Complex x,
                                 QBase base) {
  if (std::abs(t) >= 1.0) throw DomainError("generating_function_check: need |t| < 1");
  const double q = base.q;
  Complex sum = 0.0;
  Complex tn = 1.0;
  int small_streak = 0;
  for (int n = 0; n < 400; ++n) {
    Complex coeff;
    switch (family.tag) {
      case Family::laguerre_classical:
        coeff = eval_poly(family, n, x, base, EvalRoute::recurrence);
        break;
      case Family::little_q_laguerre: {
        // on-grid arguments x = q^k evaluate stably through the dual family
        const double kx = std::log(std::abs(x)) / std::log(q);
        const int k = static_cast<int>(std::llround(kx));
        if (std::abs(x.imag()) > 1e-12 || k < 0 || std::abs(kx - k) > 1e-9)
          throw DomainError("little q-Laguerre generating function: x must be q^k");
        const double a = family.alpha_or_a;
        const double twol = std::log(a * q) / std::log(q);  // a = q^{2l-1}
        const Complex hp = eval_poly({Family::asc_dual, a}, k, std::pow(q, -n), base,
                                     EvalRoute::explicit_sum);
        const double sgn = (n % 2 == 0) ? 1.0 : -1.0;
        const double pref = sgn * std::pow(q, -twol * n - 0.5 * n * (n - 1)) *
                            q_pochhammer(std::pow(q, twol), base, n).real();
        coeff = q_pochhammer(a * q, base, n) / q_pochhammer(q, base, n) * hp / pref;
        break;
      }
      case Family::q_laguerre:
        coeff = eval_poly(family, n, x, base, EvalRoute::explicit_sum);
        break;
      default:
        throw DomainError("generating_function_check: unsupported family");
    }
    sum += coeff * tn;
    tn *= t;
    small_streak = (std::abs(coeff * tn) < 1e-18 * std::max(1.0, std::abs(sum)))
                       ? small_streak + 1
                       : 0;
    if (small_streak >= 3 && n > 8) break;
  }
  const Complex closed = gf_closed_form(family, t, x, base, 0);
  return std::abs(sum - closed) / std::max(1.0, std::abs(closed));
}

double dual_action_residual(OpKind kind, int k, const RepParams& p,
                            const SpectralPoint& pt) {
  if (k < 0) throw DomainError("dual_action_residual: degree must be nonnegative");
  const double q = p.base.q;
  const double l = p.l;
  if (kind == OpKind::I2_psi) {
    const double a = std::pow(q, 2.0 * l - 1.0);
    const double y = pt.y;
    const Complex u = std::pow(q, y);
    const Complex pk = little_ql_stable(k, a, u, p.base);
    const Complex pkp = little_ql_stable(k, a, u * q, p.base);
    const Complex pkm = little_ql_stable(k, a, u / q, p.base);
    const Complex lhs = std::pow(q, -k - l) * pk;
    const Complex rhs = -std::pow(q, l - y - 1.0) * pkp +
                        std::pow(q, -l) * (1.0 - std::pow(q, -y)) * pkm +
                        std::pow(q, -y) * (std::pow(q, l - 1.0) + std::pow(q, -l)) * pk;
    const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    return std::abs(lhs - rhs) / scale;
  }
  if (kind == OpKind::I3 || kind == OpKind::I3_psi) {
    const PolyFamily fam{Family::q_laguerre, 2.0 * l - 1.0};
    const Complex y = pt.nu;
    const Complex pn = eval_poly(fam, k, y, p.base, EvalRoute::recurrence);
    const Complex pnp = eval_poly(fam, k, q * y, p.base, EvalRoute::recurrence);
    const Complex pnm = eval_poly(fam, k, y / q, p.base, EvalRoute::recurrence);
    const Complex lhs = std::pow(q, k) * y * pn;
    const Complex rhs = (1.0 + y) * pnp - (std::pow(q, 1.0 - 2.0 * l) + 1.0) * pn +
                        std::pow(q, 1.0 - 2.0 * l) * pnm;
    const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    return std::abs(lhs - rhs) / scale;
  }
  throw DomainError("dual_action_residual: kind must be I2 or I3");
}

namespace {

// multiply a lambda-polynomial by (A + B lambda)
Eigen::VectorXd affine_mul(const Eigen::VectorXd& c, double A, double B) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(c.size() + 1);
  out.head(c.size()) += A * c;
  out.tail(c.size()) += B * c;
  return out;
}

Eigen::VectorXd pad(const Eigen::VectorXd& c, Eigen::Index len) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(len);
  out.head(c.size()) = c;
  return out;
}

}  // namespace

Eigen::VectorXd overlap_poly_lambda_coeffs(OpKind kind, int n, const RepParams& p) {
  if (n < 0) throw DomainError("overlap_poly_lambda_coeffs: n must be nonnegative");
  const double q = p.base.q;
  const double l = p.l;
  const double al = 2.0 * l - 1.0;
  // argument map arg = A + B lambda per kind
  double A = 0.0, B = 0.0;
  switch (kind) {
    case OpKind::I1:
    case OpKind::I1_phi:
      A = 1.0;
      B = -(std::pow(q, -0.5) - std::pow(q, 0.5));
      break;
    case OpKind::I2_psi:
      A = 0.0;
      B = 1.0 - 1.0 / q;
      break;
    case OpKind::I3:
    case OpKind::I3_psi:
      A = 0.0;
      B = 2.0 * (1.0 - q);
      break;
    case OpKind::I4_psi:
      A = 0.0;
      B = std::pow(q, 1.5) / (1.0 - q);
      break;
    default:
      throw DomainError("overlap_poly_lambda_coeffs: unsupported kind");
  }

  std::vector<Eigen::VectorXd> P(n + 1);
  P[0] = Eigen::VectorXd::Ones(1);
  for (int k = 0; k < n; ++k) {
    const Eigen::VectorXd& p0 = P[k];
    const Eigen::VectorXd pm1 = (k >= 1) ? P[k - 1] : Eigen::VectorXd::Zero(1);
    const Eigen::VectorXd argp = affine_mul(p0, A, B);
    Eigen::VectorXd next;
    switch (kind) {
      case OpKind::I1:
      case OpKind::I1_phi: {
        const double rq = std::sqrt(q);
        Eigen::VectorXd lhs = 2.0 * rq * argp;
        lhs -= pad((std::pow(q, 0.25) + std::pow(q, -0.25)) *
                       std::pow(q, (al + 2.0) / 2.0 + k) * p0,
                   lhs.size());
        lhs -= pad(std::pow(q, (2.0 * al + 3.0) / 4.0) * (1.0 - std::pow(q, al + k)) * pm1,
                   lhs.size());
        next = lhs / (std::pow(q, (1.0 - 2.0 * al) / 4.0) * (1.0 - std::pow(q, k + 1)));
        break;
      }
      case OpKind::I2_psi: {
        const double a = std::pow(q, al);
        const double Ak = std::pow(q, k) * (1.0 - a * std::pow(q, k + 1));
        const double Ck = a * std::pow(q, k) * (1.0 - std::pow(q, k));
        Eigen::VectorXd lhs = -argp;
        lhs += pad((Ak + Ck) * p0, lhs.size());
        lhs -= pad(Ck * pm1, lhs.size());
        next = lhs / Ak;
        break;
      }
      case OpKind::I3:
      case OpKind::I3_psi: {
        Eigen::VectorXd lhs = -std::pow(q, al + 1.0 + 2.0 * k) * argp;
        lhs += pad((1.0 - std::pow(q, k + 1) + q * (1.0 - std::pow(q, al + k))) * p0,
                   lhs.size());
        lhs -= pad(q * (1.0 - std::pow(q, al + k)) * pm1, lhs.size());
        next = lhs / (1.0 - std::pow(q, k + 1));
        break;
      }
      case OpKind::I4_psi: {
        const double d = (1.0 - q) * std::pow(q, l - 1.0);
        Eigen::VectorXd lhs = std::pow(q, k) * d * argp;
        lhs -= pad(q * (1.0 - std::pow(q, al + k)) * pm1, lhs.size());
        next = lhs / (1.0 - std::pow(q, k + 1));
        break;
      }
      default:
        throw DomainError("unreachable");
    }
    P[k + 1] = next;
  }

  const double pq = q_pochhammer(q, p.base, n).real();
  const double p2l = q_pochhammer(std::pow(q, 2.0 * l), p.base, n).real();
  double norm = 1.0;
  switch (kind) {
    case OpKind::I1:
    case OpKind::I1_phi:
      norm = std::pow(q, (0.25 - l) * n) * std::sqrt(pq / p2l);
      break;
    case OpKind::I2_psi:
      norm = std::sqrt(p2l / pq) * std::pow(q, -l * n);
      break;
    case OpKind::I3:
    case OpKind::I3_psi:
      norm = std::pow(q, n / 2.0) * std::sqrt(pq / p2l);
      break;
    case OpKind::I4_psi:
      norm = std::sqrt(pq / p2l);
      break;
    default:
      break;
  }
  return norm * pad(P[n], n + 1);
}

}  // namespace qsu11
