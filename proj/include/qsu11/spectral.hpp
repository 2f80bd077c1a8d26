#ifndef QSU11_SPECTRAL_HPP
#define QSU11_SPECTRAL_HPP

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "qsu11/operators.hpp"

namespace qsu11 {

/// All eigenvalues of a finite section, sorted ascending.  Deterministic.
Eigen::VectorXd eigen_truncated(const JacobiOperator& op);
Eigen::VectorXd eigen_truncated(const JacobiOperator& op, Eigen::MatrixXd& vectors);

enum class PredictionType { interval, point_set, extension_dependent };

struct MatchedPoint {
  int index;         // ladder index n
  double predicted;  // q^n / (1 - q^{-1})
  double computed;
  double abs_error;
};

struct SpectrumReport {
  OpKind kind;
  RepParams params;
  int dim;
  Eigen::VectorXd eigenvalues;  // sorted ascending
  PredictionType prediction;
  double interval_lo = 0.0;
  double interval_hi = 0.0;
  double max_violation = 0.0;                // interval case
  std::vector<MatchedPoint> matched_points;  // point-set case
  std::optional<double> ratio_estimate;      // extension-dependent case
  std::string note;
};

SpectrumReport spectrum_report(OpKind kind, const RepParams& params, int N);

enum class Verdict { bounded_selfadjoint, indices_1_1, inconclusive };

struct DeficiencyVerdict {
  OpKind kind;
  bool logconcave_ok;   // a_{k-1} a_{k+1} <= a_k^2 over the tested range
  double carleman_sum;  // partial sum of 1/a_k
  double ratio_limit;   // a_k / a_{k+1} at the far end
  Verdict verdict;
};

DeficiencyVerdict deficiency_test(OpKind kind, const RepParams& params, int K);

const char* to_string(Verdict v);

}  // namespace qsu11

#endif
