#ifndef QSU11_QPOLYS_HPP
#define QSU11_QPOLYS_HPP

#include <Eigen/Core>
#include <optional>

#include "qsu11/qcore.hpp"

namespace qsu11 {

/// Representation parameters threaded through every computation.
struct RepParams {
  QBase base;
  double l;                 // lowest weight, > 0
  double psi = 0.0;         // phase in [0, 2pi)
  std::optional<double> c;  // discrete-measure scale, > 0 when set

  RepParams(QBase b, double l_, double psi_ = 0.0,
            std::optional<double> c_ = std::nullopt)
      : base(b), l(l_), psi(psi_), c(c_) {
    if (!(l > 0.0)) throw DomainError("l must be positive");
    if (c && !(*c > 0.0)) throw DomainError("c must be positive");
  }
};

enum class Family {
  laguerre_classical,
  cont_q_laguerre,
  little_q_laguerre,
  q_laguerre,
  asc_dual,
  phi31,
};

/// Family tag plus its single parameter: alpha for the Laguerre-type
/// families and phi31, a for little_q_laguerre and asc_dual.
struct PolyFamily {
  Family tag;
  double alpha_or_a;
};

enum class OpKind { I1, I1_phi, I2_psi, I3, I3_psi, I4_psi, classical };

/// One eigenvalue with its equivalent parametrizations.
struct SpectralPoint {
  OpKind kind;
  double lambda = 0.0;
  double nu = 0.0;      // I1: cos(theta); I3: 2(1-q)lambda
  Complex theta = 0.0;  // may be complex for I4
  double y = 0.0;       // I2 ladder exponent, q^y = (1-1/q) lambda
};

SpectralPoint spectral_point_from_lambda(OpKind kind, double lambda, const RepParams& p);
SpectralPoint spectral_point_from_theta(OpKind kind, Complex theta, const RepParams& p);
SpectralPoint spectral_point_from_nu(OpKind kind, double nu, const RepParams& p);
SpectralPoint spectral_point_from_y(double y, const RepParams& p);  // I2_psi

/// Monomial-basis normalization c_n, c_n^2 = q^{(1-2l)n/2} (q^{2l};q)_n / (q;q)_n.
double basis_normalizer(int n, const RepParams& p);

enum class EvalRoute { recurrence, explicit_sum };

/// Degree-n member of a polynomial family, by three-term recurrence or by
/// its explicit hypergeometric sum.
Complex eval_poly(const PolyFamily& family, int n, Complex arg, QBase base,
                  EvalRoute route);

/// Little q-Laguerre value with arguments on the grid q^k routed through
/// whichever of the dual and explicit forms is well conditioned.  Upward
/// recursion at high degree on small grid points loses all accuracy to the
/// dominant solution; off-grid arguments fall back to the recurrence.
Complex little_ql_stable(int n, double a, Complex x, QBase base);

/// Normalized overlap polynomial p_n(lambda) of the operator kind at pt.
Complex overlap_coeff(const SpectralPoint& pt, int n, const RepParams& p);

/// Taylor coefficients b_0..b_{n_max} of the closed product/series
/// eigenfunction form, by exact polynomial arithmetic on factor lists.
Eigen::VectorXcd eigenfunction_coeffs(const SpectralPoint& pt, int n_max,
                                      const RepParams& p);

/// Closed generating-function forms.  Variant 0 is the primary closed form;
/// little_q_laguerre also has variant 1 (the alternative closed form).
Complex gf_closed_form(const PolyFamily& family, Complex t, Complex x,
                       QBase base, int variant = 0);

/// Relative residual |sum_n coeff_n t^n - closed_form| of the family's
/// generating function, summed adaptively.
double generating_function_check(const PolyFamily& family, Complex t,
                                 Complex x, QBase base);

/// Residual of the three-term difference identity in the ladder variable
/// (the q^{-J0} action for I2, the q^{J0} action for I3) at degree k and
/// the ladder point carried by pt.
double dual_action_residual(OpKind kind, int k, const RepParams& p,
                            const SpectralPoint& pt);

/// Power-basis coefficients in lambda of the kind's overlap polynomial
/// (psi-stripped, real), built from the family recurrence.
Eigen::VectorXd overlap_poly_lambda_coeffs(OpKind kind, int n, const RepParams& p);

}  // namespace qsu11

#endif
