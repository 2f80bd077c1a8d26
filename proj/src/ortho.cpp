#include "qsu11/ortho.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <map>
#include <mutex>

namespace qsu11 {

namespace {

constexpr Complex kI(0.0, 1.0);

double sq(double x) { return x * x; }

// |(e^{i t}; q^{1/2})_inf (-e^{i t}; q^{1/2})_inf|^2 / |(q^{l-1/4} e^{i t}; q^{1/2})_inf|^2
double w_theta(double theta, const RepParams& p) {
  const QBase half(std::sqrt(p.base.q));
  const Complex e = std::exp(kI * theta);
  const Complex num = q_pochhammer_inf(e, half) * q_pochhammer_inf(-e, half);
  const Complex den = q_pochhammer_inf(std::pow(p.base.q, p.l - 0.25) * e, half);
  return std::norm(num / den);
}

struct GLRule {
  Eigen::VectorXd x, w;
};

const GLRule& gl_rule(int n) {
  static std::map<int, GLRule> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  // Newton iteration on P_n
  GLRule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  for (int k = 0; k < n; ++k) {
    double x = std::cos(M_PI * (k + 0.75) / (n + 0.5));
    double dP = 0.0;
    for (int it2 = 0; it2 < 100; ++it2) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dP = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dP;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.x[n - 1 - k] = x;
    rule.w[n - 1 - k] = 2.0 / ((1.0 - x * x) * dP * dP);
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

double gl_integrate(const std::function<double(double)>& f, double a, double b, int n) {
  const GLRule& rule = gl_rule(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (int k = 0; k < n; ++k) s += rule.w[k] * f(mid + half * rule.x[k]);
  return half * s;
}

double pred_diagonal(Relation rel, int n, const RepParams& p) {
  const double q = p.base.q;
  const double twol = 2.0 * p.l;
  auto pq = [&] { return q_pochhammer(q, p.base, n).real(); };
  auto p2l = [&] { return q_pochhammer(std::pow(q, twol), p.base, n).real(); };
  switch (rel) {
    case Relation::cont_qL_313:
      return 1.0;
    case Relation::little_qL_510:
      return std::pow(q, twol * n) * pq() / p2l();
    case Relation::qLaguerre_712:
      return p2l() / (pq() * std::pow(q, n));
    case Relation::asc_dual_514:
      return std::pow(q, -twol * n) * pq() /
             q_pochhammer_inf(std::pow(q, twol), p.base).real();
    case Relation::fk_719: {
      // index n ranges over the k-grid here; caller shifts
      const double c = p.c.value();
      const double bc = std::pow(c, twol) * std::pow(q, p.l * (twol - 1.0)) *
                        q_pochhammer_gen(q, p.base, twol - 1.0).real();
      return q_pochhammer_inf(-c * std::pow(q, n), p.base).real() /
             (std::pow(q, twol * n) * bc);
    }
  }
  throw DomainError("pred_diagonal: unknown relation");
}

void finalize_report(GramReport& r, const MeasureSpec& spec, int offset) {
  const int n = static_cast<int>(r.gram.rows());
  r.max_offdiag = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j)
        r.max_offdiag = std::max(
            r.max_offdiag, std::abs(r.gram(i, j)) / std::sqrt(r.gram(i, i) * r.gram(j, j)));
  std::vector<double> fits(n);
  for (int i = 0; i < n; ++i)
    fits[i] = pred_diagonal(spec.relation, i + offset, spec.params) / r.gram(i, i);
  std::vector<double> sorted = fits;
  std::sort(sorted.begin(), sorted.end());
  r.fitted_constant = sorted[sorted.size() / 2];
  r.max_diag_dev = 0.0;
  for (int i = 0; i < n; ++i) {
    const double pred = pred_diagonal(spec.relation, i + offset, spec.params);
    r.max_diag_dev =
        std::max(r.max_diag_dev, std::abs(r.fitted_constant * r.gram(i, i) - pred) /
                                     std::abs(pred));
  }
}

}  // namespace

double weight_continuous(double lambda, const RepParams& p) {
  const double q = p.base.q;
  const double hi = 2.0 * std::sqrt(q) / (1.0 - q);
  if (!(lambda > 0.0 && lambda < hi))
    throw DomainError("weight_continuous: lambda outside the open spectral interval");
  const double y = 1.0 - (1.0 - q) * lambda / std::sqrt(q);
  const double theta = std::acos(y);
  const double norm = q_pochhammer_inf(q, p.base).real() *
                      q_pochhammer_inf(std::pow(q, 2.0 * p.l), p.base).real();
  return norm / (2.0 * M_PI) * std::sqrt((1.0 - q) / (lambda * std::sqrt(q))) *
         w_theta(theta, p) / std::sqrt(2.0 - (1.0 - q) * lambda / std::sqrt(q));
}

double little_ql_on_grid(int m, int k, const RepParams& p) {
  const double q = p.base.q;
  return little_ql_stable(m, std::pow(q, 2.0 * p.l - 1.0), std::pow(q, k), p.base)
      .real();
}

double fk_value(int n, int k, const RepParams& p) {
  if (!p.c) throw DomainError("fk_value: the scale c is required");
  const double q = p.base.q;
  const double c = *p.c;
  // 2phi1(q^{-n}, -c q^k; 0; q, q^{n+2l}) / (q;q)_n, summed termwise
  double s = 0.0, term = 1.0;
  const double z = std::pow(q, n + 2.0 * p.l);
  for (int j = 0; j <= n; ++j) {
    s += term;
    if (j == n) break;
    term *= (1.0 - std::pow(q, j - n)) * (1.0 + c * std::pow(q, k + j)) /
            (1.0 - std::pow(q, j + 1)) * z;
  }
  return s / q_pochhammer(q, p.base, n).real();
}

double quadrature_integrate(const std::function<double(double)>& f, double a,
                            double b, int nodes) {
  if (nodes < 2) throw DomainError("quadrature_integrate: need at least 2 nodes");
  double prev = gl_integrate(f, a, b, nodes);
  for (int d = 0; d < 4; ++d) {
    nodes *= 2;
    const double cur = gl_integrate(f, a, b, nodes);
    if (std::abs(cur - prev) <= 1e-12 * std::max(1.0, std::abs(cur))) return cur;
    prev = cur;
  }
  throw SeriesError("quadrature_integrate: node doubling did not converge");
}

GramReport gram_matrix(const MeasureSpec& spec, int n_max) {
  if (n_max < 0 || n_max > 20) throw DomainError("gram_matrix: n_max out of range");
  const RepParams& p = spec.params;
  const double q = p.base.q;
  const double twol = 2.0 * p.l;
  GramReport r{spec.relation, n_max, Eigen::MatrixXd::Zero(n_max + 1, n_max + 1),
               0.0, 0.0, 1.0, 0};

  switch (spec.relation) {
    case Relation::cont_qL_313: {
      const double C = q_pochhammer_inf(q, p.base).real() *
                       q_pochhammer_inf(std::pow(q, twol), p.base).real() /
                       (2.0 * M_PI);
      auto accumulate = [&](int nodes) {
        Eigen::VectorXd x, w;
        gauss_legendre(nodes, 0.0, M_PI, x, w);
        Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n_max + 1, n_max + 1);
        for (int iq = 0; iq < nodes; ++iq) {
          const double theta = x[iq];
          const SpectralPoint pt =
              spectral_point_from_nu(OpKind::I1, std::cos(theta), p);
          Eigen::VectorXd pv(n_max + 1);
          for (int n = 0; n <= n_max; ++n)
            pv[n] = overlap_coeff(pt, n, p).real();
          G += (w[iq] * w_theta(theta, p)) * (pv * pv.transpose());
        }
        return (C * G).eval();
      };
      int nodes = spec.quadrature_nodes;
      Eigen::MatrixXd G = accumulate(nodes);
      bool converged = false;
      for (int d = 0; d < 4 && !converged; ++d) {
        nodes *= 2;
        Eigen::MatrixXd G2 = accumulate(nodes);
        converged = ((G2 - G).cwiseAbs().maxCoeff() < 1e-10);
        G = G2;
      }
      if (!converged)
        throw SeriesError("gram_matrix: quadrature node doubling did not converge");
      r.gram = G;
      r.truncation_terms_used = nodes;
      break;
    }

    case Relation::little_qL_510: {
      const double front = q_pochhammer_inf(std::pow(q, twol), p.base).real();
      double running_max = 0.0;
      int small = 0;
      for (int k = 0; k < 400; ++k) {
        const double w = std::pow(q, twol * k) / q_pochhammer(q, p.base, k).real();
        Eigen::VectorXd pv(n_max + 1);
        for (int m = 0; m <= n_max; ++m) pv[m] = little_ql_on_grid(m, k, p);
        const double tsz = w * pv.cwiseAbs().maxCoeff() * pv.cwiseAbs().maxCoeff();
        r.gram += w * (pv * pv.transpose());
        ++r.truncation_terms_used;
        running_max = std::max(running_max, tsz);
        small = (tsz < spec.tail_tol * running_max) ? small + 1 : 0;
        if (small >= 3 && k > n_max + 4) break;
      }
      r.gram *= front;
      break;
    }

    case Relation::qLaguerre_712: {
      if (!p.c) throw DomainError("gram_matrix: relation needs the scale c");
      const double c = *p.c;
      const double bc = std::pow(c, twol) * std::pow(q, p.l * (twol - 1.0)) *
                        q_pochhammer_gen(q, p.base, twol - 1.0).real();
      const PolyFamily fam{Family::q_laguerre, twol - 1.0};
      auto add_term = [&](int k) {
        const double w =
            std::pow(q, twol * k) / q_pochhammer_inf(-c * std::pow(q, k), p.base).real();
        Eigen::VectorXd Lv(n_max + 1);
        for (int m = 0; m <= n_max; ++m)
          Lv[m] = eval_poly(fam, m, c * std::pow(q, k), p.base, EvalRoute::explicit_sum)
                      .real();
        r.gram += w * (Lv * Lv.transpose());
        ++r.truncation_terms_used;
        return w * sq(Lv.cwiseAbs().maxCoeff());
      };
      // both tails truncated by magnitude, independently
      double running_max = add_term(0);
      for (int dir : {+1, -1}) {
        int small = 0;
        for (int k = dir; std::abs(k) < 400; k += dir) {
          const double tsz = add_term(k);
          running_max = std::max(running_max, tsz);
          small = (tsz < spec.tail_tol * running_max) ? small + 1 : 0;
          if (small >= 3 && std::abs(k) > 6) break;
        }
      }
      r.gram *= bc;
      break;
    }

    case Relation::asc_dual_514: {
      const PolyFamily fam{Family::asc_dual, std::pow(q, twol - 1.0)};
      double running_max = 0.0;
      int small = 0;
      for (int m = 0; m < 250; ++m) {
        const double w = std::pow(q, twol * m + double(m) * (m - 1)) /
                         (q_pochhammer(q, p.base, m).real() *
                          q_pochhammer(std::pow(q, twol), p.base, m).real());
        Eigen::VectorXd hv(n_max + 1);
        for (int n = 0; n <= n_max; ++n)
          hv[n] = eval_poly(fam, n, std::pow(q, -double(m)), p.base,
                            EvalRoute::explicit_sum)
                      .real();
        const double tsz = w * sq(hv.cwiseAbs().maxCoeff());
        r.gram += w * (hv * hv.transpose());
        ++r.truncation_terms_used;
        running_max = std::max(running_max, tsz);
        small = (tsz < spec.tail_tol * running_max) ? small + 1 : 0;
        if (small >= 3 && m > 2 * n_max + 6) break;
      }
      break;
    }

    case Relation::fk_719: {
      if (!p.c) throw DomainError("gram_matrix: relation needs the scale c");
      // indexed by the k-range, not by n_max
      const int klo = spec.k_range.first;
      const int dim = spec.k_range.second - klo;
      r.n_max = dim;
      r.gram = Eigen::MatrixXd::Zero(dim + 1, dim + 1);
      double running_max = 0.0;
      int small = 0;
      for (int n = 0; n < 400; ++n) {
        const double w = std::pow(q, n) * q_pochhammer(q, p.base, n).real() /
                         q_pochhammer(std::pow(q, twol), p.base, n).real();
        Eigen::VectorXd Fv(dim + 1);
        for (int k = klo; k <= spec.k_range.second; ++k)
          Fv[k - klo] = fk_value(n, k, p);
        const double tsz = w * sq(Fv.cwiseAbs().maxCoeff());
        r.gram += w * (Fv * Fv.transpose());
        ++r.truncation_terms_used;
        running_max = std::max(running_max, tsz);
        small = (tsz < spec.tail_tol * running_max) ? small + 1 : 0;
        if (small >= 3 && n > 20) break;
      }
      finalize_report(r, spec, klo);
      return r;
    }
  }
  finalize_report(r, spec, 0);
  return r;
}

void gauss_legendre(int n, double a, double b, Eigen::VectorXd& x, Eigen::VectorXd& w) {
  const GLRule& rule = gl_rule(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  x = (mid + half * rule.x.array()).matrix();
  w = (half * rule.w.array()).matrix();
}

UnitarityResidual unitarity_check(Pairing pairing, const RepParams& p, int m_max,
                                  int n_max) {
  if (m_max < 0 || n_max < 0 || m_max > 12 || n_max > 12)
    throw DomainError("unitarity_check: index bounds out of range");
  const double q = p.base.q;
  const double twol = 2.0 * p.l;
  UnitarityResidual res{0.0, 0.0};

  if (pairing == Pairing::little_qL_vs_asc) {
    const double p2linf = q_pochhammer_inf(std::pow(q, twol), p.base).real();
    auto entry = [&](int m, int n) {
      const double cn =
          std::pow(q, p.l * n) * std::sqrt(p2linf / q_pochhammer(q, p.base, n).real());
      const double Pm = std::sqrt(q_pochhammer(std::pow(q, twol), p.base, m).real() /
                                  q_pochhammer(q, p.base, m).real()) *
                        std::pow(q, -p.l * m) * little_ql_on_grid(m, n, p);
      return cn * Pm;
    };
    // rows: fixed degrees, summed over the grid
    const int NT = 160;
    Eigen::MatrixXd A(m_max + 1, NT);
    for (int m = 0; m <= m_max; ++m)
      for (int n = 0; n < NT; ++n) A(m, n) = entry(m, n);
    for (int m = 0; m <= m_max; ++m)
      for (int mp = 0; mp <= m_max; ++mp)
        res.row_residual =
            std::max(res.row_residual,
                     std::abs(A.row(m).dot(A.row(mp)) - (m == mp ? 1.0 : 0.0)));
    // columns: fixed grid points, summed over degrees until entries vanish
    int MT = n_max + 8;
    while (MT < 200) {
      bool tiny = true;
      for (int n = 0; n <= n_max; ++n)
        if (std::abs(entry(MT, n)) > 1e-19) tiny = false;
      if (tiny) break;
      ++MT;
    }
    Eigen::MatrixXd B(MT + 1, n_max + 1);
    for (int m = 0; m <= MT; ++m)
      for (int n = 0; n <= n_max; ++n) B(m, n) = entry(m, n);
    for (int n = 0; n <= n_max; ++n)
      for (int np = 0; np <= n_max; ++np)
        res.col_residual =
            std::max(res.col_residual,
                     std::abs(B.col(n).dot(B.col(np)) - (n == np ? 1.0 : 0.0)));
    return res;
  }

  // qL_vs_fk
  if (!p.c) throw DomainError("unitarity_check: pairing needs the scale c");
  const double c = *p.c;
  const double bc = std::pow(c, twol) * std::pow(q, p.l * (twol - 1.0)) *
                    q_pochhammer_gen(q, p.base, twol - 1.0).real();
  const PolyFamily fam{Family::q_laguerre, twol - 1.0};
  auto entry = [&](int k, int n) {
    const double dk = std::sqrt(bc) * std::pow(q, p.l * k) /
                      std::sqrt(q_pochhammer_inf(-c * std::pow(q, k), p.base).real());
    const double L =
        eval_poly(fam, n, c * std::pow(q, k), p.base, EvalRoute::explicit_sum).real();
    return dk * std::pow(q, 0.5 * n) *
           std::sqrt(q_pochhammer(q, p.base, n).real() /
                     q_pochhammer(std::pow(q, twol), p.base, n).real()) *
           L;
  };
  // rows of the bilateral relation: fixed degrees, summed over k in Z
  const int KT = 60;
  Eigen::MatrixXd A(m_max + 1, 2 * KT + 1);
  for (int n = 0; n <= m_max; ++n)
    for (int k = -KT; k <= KT; ++k) A(n, k + KT) = entry(k, n);
  for (int n = 0; n <= m_max; ++n)
    for (int np = 0; np <= m_max; ++np)
      res.row_residual = std::max(
          res.row_residual, std::abs(A.row(n).dot(A.row(np)) - (n == np ? 1.0 : 0.0)));
  // dual side: fixed grid points, summed over degrees
  const int NT = 400;
  const int kw = 3;
  Eigen::MatrixXd B(2 * kw + 1, NT);
  for (int k = -kw; k <= kw; ++k)
    for (int n = 0; n < NT; ++n) B(k + kw, n) = entry(k, n);
  for (int k = 0; k < 2 * kw + 1; ++k)
    for (int kp = 0; kp < 2 * kw + 1; ++kp)
      res.col_residual = std::max(
          res.col_residual, std::abs(B.row(k).dot(B.row(kp)) - (k == kp ? 1.0 : 0.0)));
  return res;
}

}  // namespace qsu11
