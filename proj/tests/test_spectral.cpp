#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "qsu11/spectral.hpp"

using namespace qsu11;
using doctest::Approx;

TEST_CASE("eigen_truncated closed forms") {
  QBase base(0.5);
  RepParams p(base, 1.0);

  SUBCASE("1x1") {
    JacobiOperator op{OpKind::I1, p, 1, Eigen::VectorXd::Constant(1, 3.25),
                      Eigen::VectorXd(0), BasisTag::canonical};
    CHECK(eigen_truncated(op)[0] == Approx(3.25));
  }

  SUBCASE("2x2 with equal diagonal") {
    JacobiOperator op{OpKind::I1, p, 2, Eigen::VectorXd::Constant(2, 1.5),
                      Eigen::VectorXd::Constant(1, -0.7), BasisTag::canonical};
    const Eigen::VectorXd ev = eigen_truncated(op);
    CHECK(ev[0] == Approx(1.5 - 0.7).epsilon(1e-14));
    CHECK(ev[1] == Approx(1.5 + 0.7).epsilon(1e-14));
  }

  SUBCASE("N = 12 against a dense solver") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Eigen::VectorXd d(12), e(11);
    for (int i = 0; i < 12; ++i) d[i] = dist(rng);
    for (int i = 0; i < 11; ++i) e[i] = dist(rng);
    JacobiOperator op{OpKind::I1, p, 12, d, e, BasisTag::canonical};
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(12, 12);
    for (int i = 0; i < 12; ++i) M(i, i) = d[i];
    for (int i = 0; i < 11; ++i) M(i, i + 1) = M(i + 1, i) = e[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
    CHECK((eigen_truncated(op) - es.eigenvalues()).cwiseAbs().maxCoeff() < 1e-11);
  }
}

TEST_CASE("I1 spectrum confinement and endpoint filling") {
  SUBCASE("cited N = 300 report") {
    RepParams p{QBase(0.5), 1.0};
    const SpectrumReport r = spectrum_report(OpKind::I1, p, 300);
    CHECK(r.max_violation < 1e-10);
    CHECK(r.eigenvalues[0] < 1e-3);
    CHECK(r.eigenvalues[299] > r.interval_hi - 1e-3);
  }

  SUBCASE("finite sections stay inside the interval") {
    for (double q : {0.3, 0.5, 0.8})
      for (double l : {0.6, 1.0, 2.0})
        for (int N : {50, 200, 400}) {
          RepParams p{QBase(q), l};
          const SpectrumReport r = spectrum_report(OpKind::I1, p, N);
          CHECK(r.eigenvalues[0] > -1e-10);
          CHECK(r.eigenvalues[N - 1] < 2.0 * std::sqrt(q) / (1.0 - q) + 1e-10);
        }
  }
}

TEST_CASE("eigenvalue interlacing between consecutive sections") {
  RepParams p{QBase(0.5), 1.0};
  for (int N : {24, 60}) {
    const Eigen::VectorXd a = eigen_truncated(build_operator(OpKind::I1, p, N));
    const Eigen::VectorXd b = eigen_truncated(build_operator(OpKind::I1, p, N + 1));
    const double tol = 1e-12 * b.cwiseAbs().maxCoeff();
    for (int i = 0; i < N; ++i) {
      CHECK(b[i] <= a[i] + tol);
      CHECK(a[i] <= b[i + 1] + tol);
    }
  }
}

TEST_CASE("I2 ladder spectrum") {
  RepParams p{QBase(0.5), 1.0};

  SUBCASE("eight most-negative eigenvalues match the ladder at N = 200") {
    const SpectrumReport r = spectrum_report(OpKind::I2_psi, p, 200);
    REQUIRE(r.matched_points.size() >= 8);
    for (int i = 0; i < 8; ++i) {
      CHECK(r.matched_points[i].index == i);
      CHECK(r.matched_points[i].abs_error < 1e-9);
    }
  }

  SUBCASE("truncation error decreases with N up to the noise floor") {
    const double floor_ = 5e-15;
    std::vector<double> worst;
    for (int N : {50, 100, 200}) {
      const SpectrumReport r = spectrum_report(OpKind::I2_psi, p, N);
      double w = 0.0;
      for (int i = 0; i < 6; ++i) w = std::max(w, r.matched_points[i].abs_error);
      worst.push_back(w);
    }
    CHECK(worst[1] <= worst[0] + floor_);
    CHECK(worst[2] <= worst[1] + floor_);
  }
}

TEST_CASE("finite-section ladder ratios of the unbounded kinds") {
  RepParams p{QBase(0.5), 1.0};
  // one-sign ladder ratio reflects the coefficient growth rate q^2
  const SpectrumReport r3 = spectrum_report(OpKind::I3, p, 200);
  REQUIRE(r3.ratio_estimate.has_value());
  CHECK(std::abs(*r3.ratio_estimate - 0.25) < 2.5e-2);
  const SpectrumReport r4 = spectrum_report(OpKind::I4_psi, p, 200);
  REQUIRE(r4.ratio_estimate.has_value());
  CHECK(std::abs(*r4.ratio_estimate - 0.25) < 2.5e-2);
}

TEST_CASE("strongly graded sections fall back to bisection") {
  // QR sweeps stall once the entry range spans hundreds of orders of
  // magnitude; the Sturm bisection path must keep the ladder structure
  RepParams p{QBase(0.5), 1.0};
  const SpectrumReport r3 = spectrum_report(OpKind::I3, p, 300);
  REQUIRE(r3.ratio_estimate.has_value());
  CHECK(std::abs(*r3.ratio_estimate - 0.25) < 2.5e-2);
  CHECK(r3.eigenvalues[0] > 0.0);

  RepParams p4{QBase(0.3), 0.6};
  const SpectrumReport r4 = spectrum_report(OpKind::I4_psi, p4, 400);
  REQUIRE(r4.ratio_estimate.has_value());
  CHECK(std::abs(*r4.ratio_estimate - 0.09) < 1e-2);

  // interlacing across the section size ties the bisection values together
  const Eigen::VectorXd a = eigen_truncated(build_operator(OpKind::I3, p, 300));
  const Eigen::VectorXd b = eigen_truncated(build_operator(OpKind::I3, p, 301));
  for (int i = 0; i < 300; ++i) {
    const double tol = 1e-11 * std::max(std::abs(a[i]), 1.0);
    CHECK(b[i] <= a[i] + tol);
    CHECK(a[i] <= b[i + 1] + tol);
  }

  RepParams p03{QBase(0.3), 0.6};
  CHECK_THROWS_AS(eigen_truncated(build_operator(OpKind::I3, p03, 500)), DomainError);
}

TEST_CASE("deficiency classification") {
  RepParams p{QBase(0.5), 1.0};

  SUBCASE("bounded kinds") {
    CHECK(deficiency_test(OpKind::I1, p, 200).verdict == Verdict::bounded_selfadjoint);
    CHECK(deficiency_test(OpKind::I2_psi, p, 200).verdict ==
          Verdict::bounded_selfadjoint);
  }

  SUBCASE("I4 has indices (1,1) with coefficient ratio q") {
    const DeficiencyVerdict v = deficiency_test(OpKind::I4_psi, p, 200);
    CHECK(v.verdict == Verdict::indices_1_1);
    CHECK(v.logconcave_ok);
    CHECK(std::abs(v.ratio_limit - 0.5) < 1e-6);
    CHECK(v.carleman_sum < 3.0);  // the reciprocal sum converges quickly
  }

  SUBCASE("I3 has indices (1,1) with coefficient ratio q^2") {
    const DeficiencyVerdict v = deficiency_test(OpKind::I3, p, 200);
    CHECK(v.verdict == Verdict::indices_1_1);
    CHECK(v.logconcave_ok);
    CHECK(std::abs(v.ratio_limit - 0.25) < 1e-6);
  }

  SUBCASE("verdicts do not depend on psi") {
    for (double psi : {0.0, 1.0, M_PI}) {
      RepParams pp{QBase(0.5), 1.0, psi};
      CHECK(deficiency_test(OpKind::I4_psi, pp, 200).verdict == Verdict::indices_1_1);
      CHECK(deficiency_test(OpKind::I2_psi, pp, 200).verdict ==
            Verdict::bounded_selfadjoint);
    }
  }

  SUBCASE("K below 50 rejected") {
    CHECK_THROWS_AS(deficiency_test(OpKind::I3, p, 10), DomainError);
  }
}
