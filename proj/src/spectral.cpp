#include "qsu11/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cfloat>
#include <cmath>

namespace qsu11 {

namespace {

// Sturm-sequence bisection in long double; handles the strongly graded
// matrices of the unbounded kinds, whose entry range defeats the QR sweep.
Eigen::VectorXd bisection_eigenvalues(const Eigen::VectorXd& diag,
                                      const Eigen::VectorXd& off) {
  const int n = static_cast<int>(diag.size());
  std::vector<long double> d(n), e2(std::max(n - 1, 0));
  for (int i = 0; i < n; ++i) d[i] = diag[i];
  for (int i = 0; i + 1 < n; ++i)
    e2[i] = static_cast<long double>(off[i]) * static_cast<long double>(off[i]);
  const long double pivmin = LDBL_MIN / LDBL_EPSILON;

  auto count_below = [&](long double x) {
    int cnt = 0;
    long double t = 1.0L;
    for (int k = 0; k < n; ++k) {
      t = d[k] - x - (k > 0 ? e2[k - 1] / t : 0.0L);
      if (fabsl(t) < pivmin) t = -pivmin;
      if (t < 0.0L) ++cnt;
    }
    return cnt;
  };

  long double lo = d[0], hi = d[0];
  for (int k = 0; k < n; ++k) {
    const long double r = (k > 0 ? sqrtl(e2[k - 1]) : 0.0L) +
                          (k + 1 < n ? sqrtl(e2[k]) : 0.0L);
    lo = std::min(lo, d[k] - r);
    hi = std::max(hi, d[k] + r);
  }
  const long double pad = LDBL_EPSILON * std::max(fabsl(lo), fabsl(hi)) + pivmin;
  lo -= pad;
  hi += pad;

  Eigen::VectorXd ev(n);
  for (int i = 0; i < n; ++i) {
    long double a = lo, b = hi;
    for (int it = 0; it < 40000; ++it) {
      const long double mid = 0.5L * (a + b);
      if (mid == a || mid == b) break;
      if (count_below(mid) <= i)
        a = mid;
      else
        b = mid;
      if (b - a <= 2.0L * LDBL_EPSILON * std::max(fabsl(a), fabsl(b)) + pivmin) break;
    }
    ev[i] = static_cast<double>(0.5L * (a + b));
  }
  return ev;
}

}  // namespace

Eigen::VectorXd eigen_truncated(const JacobiOperator& op) {
  if (!op.diag.allFinite() || !op.offdiag.allFinite())
    throw DomainError("eigen_truncated: matrix entries are not representable");
  if (op.dim == 1) return op.diag;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(op.diag, op.offdiag, Eigen::EigenvaluesOnly);
  if (es.info() == Eigen::Success) return es.eigenvalues();
  return bisection_eigenvalues(op.diag, op.offdiag);
}

Eigen::VectorXd eigen_truncated(const JacobiOperator& op, Eigen::MatrixXd& vectors) {
  if (op.dim == 1) {
    vectors = Eigen::MatrixXd::Ones(1, 1);
    return op.diag;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(op.diag, op.offdiag, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success)
    throw SeriesError("eigen_truncated: tridiagonal QR did not converge");
  vectors = es.eigenvectors();
  return es.eigenvalues();
}

namespace {

// median of successive ratios lambda_{j+1}/lambda_j over the 10 largest-|lambda|
// eigenvalues of one sign
std::optional<double> ladder_ratio_estimate(const Eigen::VectorXd& ev) {
  std::vector<double> pos, neg;
  for (int i = 0; i < ev.size(); ++i) {
    if (ev[i] > 0) pos.push_back(ev[i]);
    if (ev[i] < 0) neg.push_back(-ev[i]);
  }
  std::vector<double>& side = (pos.size() >= neg.size()) ? pos : neg;
  std::sort(side.begin(), side.end(), std::greater<double>());
  if (side.size() < 11) return std::nullopt;
  std::vector<double> ratios;
  for (int j = 0; j + 1 < 10; ++j) ratios.push_back(side[j + 1] / side[j]);
  std::sort(ratios.begin(), ratios.end());
  return ratios[ratios.size() / 2];
}

}  // namespace

SpectrumReport spectrum_report(OpKind kind, const RepParams& params, int N) {
  if (N < 16) throw DomainError("spectrum_report: N must be >= 16");
  const double q = params.base.q;
  SpectrumReport r{kind, params, N, {}, PredictionType::interval, 0.0, 0.0, 0.0, {}, std::nullopt, {}};
  r.eigenvalues = eigen_truncated(build_operator(kind, params, N));
  switch (kind) {
    case OpKind::I1:
    case OpKind::I1_phi: {
      r.prediction = PredictionType::interval;
      r.interval_lo = 0.0;
      r.interval_hi = 2.0 * std::sqrt(q) / (1.0 - q);
      r.max_violation = std::max(
          {0.0, r.interval_lo - r.eigenvalues[0], r.eigenvalues[N - 1] - r.interval_hi});
      break;
    }
    case OpKind::I2_psi: {
      r.prediction = PredictionType::point_set;
      // greedy nearest-neighbor from largest |lambda| downward, ties toward
      // the smaller ladder index
      std::vector<double> ev(r.eigenvalues.data(), r.eigenvalues.data() + N);
      std::sort(ev.begin(), ev.end(),
                [](double a, double b) { return std::abs(a) > std::abs(b); });
      std::vector<bool> used(64, false);
      for (int j = 0; j < 10 && j < N; ++j) {
        int best = -1;
        double bdist = std::numeric_limits<double>::infinity();
        for (int n = 0; n < 64; ++n) {
          if (used[n]) continue;
          const double pred = std::pow(q, n) / (1.0 - 1.0 / q);
          const double d = std::abs(pred - ev[j]);
          if (d < bdist - 1e-300 || (d == bdist && best < 0)) {
            bdist = d;
            best = n;
          }
        }
        used[best] = true;
        r.matched_points.push_back(
            {best, std::pow(q, best) / (1.0 - 1.0 / q), ev[j], bdist});
      }
      break;
    }
    case OpKind::I3:
    case OpKind::I3_psi:
    case OpKind::I4_psi: {
      r.prediction = PredictionType::extension_dependent;
      r.ratio_estimate = ladder_ratio_estimate(r.eigenvalues);
      r.note =
          "point spectrum is extension dependent; the finite-section ladder "
          "ratio reflects the coefficient growth rate (point set adopted as "
          "c q^k/(2(1-q)))";
      break;
    }
    case OpKind::classical:
      throw DomainError("spectrum_report: no prediction for the classical kind");
  }
  return r;
}

DeficiencyVerdict deficiency_test(OpKind kind, const RepParams& params, int K) {
  if (K < 50) throw DomainError("deficiency_test: K must be >= 50");
  DeficiencyVerdict v{kind, true, 0.0, 0.0, Verdict::inconclusive};
  std::vector<double> a(K + 2);
  for (int k = 0; k <= K + 1; ++k)
    a[k] = std::abs(operator_offdiag_entry(kind, k, params));
  for (int k = 1; k <= K; ++k) {
    if (a[k - 1] * a[k + 1] > a[k] * a[k] * (1.0 + 1e-12)) {
      v.logconcave_ok = false;
      break;
    }
  }
  for (int k = 0; k <= K; ++k) v.carleman_sum += 1.0 / a[k];
  v.ratio_limit = a[K] / a[K + 1];
  const CoefficientLimits lim = coefficient_limits(kind, params);
  if (lim.bounded)
    v.verdict = Verdict::bounded_selfadjoint;
  else if (v.logconcave_ok && v.ratio_limit < 1.0)
    v.verdict = Verdict::indices_1_1;
  else
    v.verdict = Verdict::inconclusive;
  return v;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::bounded_selfadjoint: return "bounded_selfadjoint";
    case Verdict::indices_1_1: return "indices_1_1";
    default: return "inconclusive";
  }
}

}  // namespace qsu11
