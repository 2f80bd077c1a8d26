#ifndef QSU11_SERIES_HPP
#define QSU11_SERIES_HPP

#include <Eigen/Core>
#include <algorithm>

#include "qsu11/qcore.hpp"

namespace qsu11 {

// Power series truncated at a fixed degree.  Multiplication by the linear
// factors of a q-Pochhammer product is exact per factor; division uses the
// recurrence s_n = t_n + c s_{n-1}, also exact per factor.
class TruncatedSeries {
 public:
  explicit TruncatedSeries(int degree)
      : coeffs_(Eigen::VectorXcd::Zero(degree + 1)) {
    coeffs_[0] = 1.0;
  }

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const Eigen::VectorXcd& coeffs() const { return coeffs_; }
  Eigen::VectorXcd& coeffs() { return coeffs_; }

  /// Multiply by (1 - c x).
  void mul_linear(Complex c) {
    for (int n = degree(); n >= 1; --n) coeffs_[n] -= c * coeffs_[n - 1];
  }

  /// Divide by (1 - c x).
  void div_linear(Complex c) {
    for (int n = 1; n <= degree(); ++n) coeffs_[n] += c * coeffs_[n - 1];
  }

  /// Multiply by (a x; q)_inf.
  void mul_poch_inf(Complex a, QBase base, double cutoff = 1e-18) {
    Complex c = a;
    while (std::abs(c) >= cutoff) {
      mul_linear(c);
      c *= base.q;
    }
  }

  /// Divide by (a x; q)_inf.
  void div_poch_inf(Complex a, QBase base, double cutoff = 1e-18) {
    Complex c = a;
    while (std::abs(c) >= cutoff) {
      div_linear(c);
      c *= base.q;
    }
  }

  /// Cauchy product with another coefficient vector.
  void mul_series(const Eigen::VectorXcd& other) {
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(degree() + 1);
    for (int i = 0; i <= degree(); ++i) {
      if (coeffs_[i] == 0.0) continue;
      const int jmax = std::min<int>(degree() - i, static_cast<int>(other.size()) - 1);
      for (int j = 0; j <= jmax; ++j) out[i + j] += coeffs_[i] * other[j];
    }
    coeffs_ = out;
  }

 private:
  Eigen::VectorXcd coeffs_;
};

}  // namespace qsu11

#endif
