#ifndef QSU11_ORTHO_HPP
#define QSU11_ORTHO_HPP

#include <Eigen/Core>
#include <functional>
#include <utility>

#include "qsu11/qpolys.hpp"

namespace qsu11 {

enum class Relation {
  cont_qL_313,    // continuous overlap measure on [0, 2 sqrt(q)/(1-q)]
  little_qL_510,  // little q-Laguerre on the grid q^k, k >= 0
  qLaguerre_712,  // bilateral q-Laguerre grid c q^k, k in Z
  asc_dual_514,   // dual family against its q^{m^2}-type weight
  fk_719,         // the claimed dual system of the bilateral relation
};

struct MeasureSpec {
  Relation relation;
  RepParams params;
  int quadrature_nodes = 128;          // continuous case
  std::pair<int, int> k_range{-3, 3};  // bilateral dual case
  double tail_tol = 1e-16;
};

struct GramReport {
  Relation relation;
  int n_max;
  Eigen::MatrixXd gram;
  double max_offdiag;      // max |G_ij| / sqrt(G_ii G_jj), i != j
  double max_diag_dev;     // relative, after the fitted global constant
  double fitted_constant;  // predicted diagonal / computed, median over n
  long truncation_terms_used = 0;
};

/// Spectral weight of the continuous relation at an interior point
/// 0 < lambda < 2 sqrt(q)/(1-q).
double weight_continuous(double lambda, const RepParams& params);

GramReport gram_matrix(const MeasureSpec& spec, int n_max);

/// Deterministic Gauss-Legendre quadrature with node-doubling convergence
/// control; throws SeriesError if doubling never settles.
double quadrature_integrate(const std::function<double(double)>& f, double a,
                            double b, int nodes);

/// Nodes and weights on [a, b] (Golub-Welsch).
void gauss_legendre(int n, double a, double b, Eigen::VectorXd& x, Eigen::VectorXd& w);

enum class Pairing { little_qL_vs_asc, qL_vs_fk };

struct UnitarityResidual {
  double row_residual;  // family orthogonality over its argument grid
  double col_residual;  // dual-side orthogonality over the degree index
};

UnitarityResidual unitarity_check(Pairing pairing, const RepParams& params,
                                  int m_max, int n_max);

/// Member of the claimed dual system of the bilateral relation, evaluated at
/// q^{-n}; equals the q-Laguerre value L_n^{(2l-1)}(c q^k; q).
double fk_value(int n, int k, const RepParams& params);

/// Little q-Laguerre value p_m(q^k; q^{2l-1}|q) through whichever of the
/// explicit and dual routes is well conditioned at (m, k).
double little_ql_on_grid(int m, int k, const RepParams& params);

}  // namespace qsu11

#endif
