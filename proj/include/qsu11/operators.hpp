#ifndef QSU11_OPERATORS_HPP
#define QSU11_OPERATORS_HPP

#include <Eigen/Core>

#include "qsu11/qpolys.hpp"

namespace qsu11 {

enum class BasisTag { canonical, tilde_psi };

/// Truncated symmetric tridiagonal matrix of a representation operator in an
/// orthonormal basis (the phase-absorbing tilde basis for the phased kinds,
/// which makes every entry real).
struct JacobiOperator {
  OpKind kind;
  RepParams params;
  int dim;
  Eigen::VectorXd diag;     // dim entries
  Eigen::VectorXd offdiag;  // dim-1 entries
  BasisTag basis_tag;
};

/// Ladder matrices of the discrete series representation.
struct LadderMatrices {
  Eigen::VectorXd J0_diag;       // l, l+1, ..., l+N-1
  Eigen::VectorXd Jplus_sub;     // sqrt([2l+n]_q [n+1]_q)
  Eigen::VectorXd Jminus_super;  // equal to Jplus_sub
};

LadderMatrices build_ladder(const RepParams& params, int N);

double operator_diag_entry(OpKind kind, int k, const RepParams& params);
double operator_offdiag_entry(OpKind kind, int k, const RepParams& params);

JacobiOperator build_operator(OpKind kind, const RepParams& params, int N);

struct CoefficientLimits {
  bool bounded;
  double diag_limit;
  double offdiag_limit;
  double essential_lo;  // valid when bounded
  double essential_hi;
};

/// Numerically extrapolated k->infinity limits of the coefficient sequences
/// (k = 200 with a consistency check at k = 400).
CoefficientLimits coefficient_limits(OpKind kind, const RepParams& params);

Eigen::VectorXd apply(const JacobiOperator& op, const Eigen::VectorXd& v);

/// || p_n(Op) e_0 - e_n ||_2 with p_n the kind's overlap polynomial in the
/// power basis.  Exact up to roundoff once N > n.
double reconstruct_basis(OpKind kind, int n, const RepParams& params, int N);

/// Complex Hermitian tridiagonal of a phased kind in the canonical basis
/// (off-diagonals carry e^{i phase}); same spectrum as the tilde-basis matrix.
Eigen::MatrixXcd phased_dense_matrix(const JacobiOperator& op, double phase);

}  // namespace qsu11

#endif
