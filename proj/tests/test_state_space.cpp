#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "ggc/errors.hpp"
#include "ggc/rng.hpp"
#include "ggc/state_space.hpp"
#include "ggc/var.hpp"
#include "test_util.hpp"

using namespace ggc;
using namespace ggc_test;

namespace {

double radius(const MatrixXd& a) {
  Eigen::EigenSolver<MatrixXd> eig(a, false);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("VAR(1) embedding keeps the model matrices") {
  const VarModel m = random_stable_model(2, 1, 0.7, 3);
  const StateSpaceInnovations ss = var_to_ss(m);
  CHECK(ss.m == 2);
  CHECK(ss.A == m.coeffs[0]);
  CHECK(ss.C == MatrixXd::Identity(2, 2));
  CHECK(ss.V == m.sigma);
}

TEST_CASE("VAR(3) embedding has the companion spectrum") {
  const VarModel m = random_stable_model(3, 3, 0.85, 4);
  const StateSpaceInnovations ss = var_to_ss(m);
  CHECK(ss.m == 9);
  CHECK(radius(ss.A) == doctest::Approx(m.spectral_radius).epsilon(1e-10));
}

TEST_CASE("state-space recursion reproduces the VAR sample path exactly") {
  const VarModel m = random_stable_model(2, 3, 0.8, 5);
  const StateSpaceInnovations ss = var_to_ss(m);
  const int T = 200;

  // shared innovations stream
  Eigen::LLT<MatrixXd> llt(m.sigma);
  const MatrixXd chol = llt.matrixL();
  CounterRng rng(12345);
  MatrixXd innov(2, T);
  for (int t = 0; t < T; ++t)
    for (int i = 0; i < 2; ++i) innov(i, t) = rng.normal();
  innov = chol * innov;

  MatrixXd var_path = MatrixXd::Zero(2, T);
  for (int t = 0; t < T; ++t) {
    var_path.col(t) = innov.col(t);
    for (int j = 0; j < m.p; ++j)
      if (t - 1 - j >= 0) var_path.col(t) += m.coeffs[j] * var_path.col(t - 1 - j);
  }

  MatrixXd ss_path(2, T);
  VectorXd z = VectorXd::Zero(ss.m);
  for (int t = 0; t < T; ++t) {
    ss_path.col(t) = ss.C * z + innov.col(t);
    z = ss.A * z + ss.K * innov.col(t);
  }
  CHECK((var_path - ss_path).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("scalar DARE fixed point solved by hand") {
  // a = 0.5, c = 1, Q = 1, S = 0, R = 0:  P = 1, V = 1, K = 0.5
  const MatrixXd one = MatrixXd::Identity(1, 1);
  const DareSolution sol =
      solve_dare(0.5 * one, one, one, MatrixXd::Zero(1, 1), MatrixXd::Zero(1, 1));
  CHECK(sol.P(0, 0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(sol.V(0, 0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(sol.K(0, 0) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("pure observation noise gives the zero solution") {
  const MatrixXd A = 0.5 * MatrixXd::Identity(2, 2);
  const MatrixXd C = MatrixXd::Identity(2, 2);
  const DareSolution sol = solve_dare(A, C, MatrixXd::Zero(2, 2), MatrixXd::Zero(2, 2),
                                      MatrixXd::Identity(2, 2));
  CHECK(sol.P.cwiseAbs().maxCoeff() < 1e-12);
  CHECK(sol.K.cwiseAbs().maxCoeff() < 1e-12);
  CHECK((sol.V - MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("accepted DARE solutions satisfy the fixed-point contract post-hoc") {
  for (int k = 0; k < 10; ++k) {
    const VarModel m = random_stable_model(2 + k % 3, 1 + k % 3, 0.4 + 0.05 * k, 600 + k);
    const StateSpaceInnovations ss = var_to_ss(m);
    std::vector<int> keep;
    for (int c = 1; c < ss.r; ++c) keep.push_back(c);
    if (keep.empty()) keep.push_back(0);

    MatrixXd Ck(keep.size(), ss.m), Vsel(ss.r, keep.size()), Rk(keep.size(), keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) {
      Ck.row(i) = ss.C.row(keep[i]);
      Vsel.col(i) = ss.V.col(keep[i]);
      for (std::size_t j = 0; j < keep.size(); ++j) Rk(i, j) = ss.V(keep[i], keep[j]);
    }
    const MatrixXd Q = ss.K * ss.V * ss.K.transpose();
    const MatrixXd S = ss.K * Vsel;
    const DareSolution sol = solve_dare(ss.A, Ck, Q, S, Rk);

    const MatrixXd innov = Ck * sol.P * Ck.transpose() + Rk;
    const MatrixXd gain_num = ss.A * sol.P * Ck.transpose() + S;
    const MatrixXd fP = ss.A * sol.P * ss.A.transpose() + Q -
                        gain_num * innov.ldlt().solve(gain_num.transpose());
    const double tol_scale = std::max(1.0, sol.P.norm());
    CHECK((fP - sol.P).norm() < kDareTol * tol_scale);
    CHECK(sol.residual < kDareTol * tol_scale);
  }
}

TEST_CASE("DARE error paths: indefinite innovations and no convergence") {
  const MatrixXd one = MatrixXd::Identity(1, 1);
  // Q = R = 0 makes C P C' + R singular at the start
  CHECK_THROWS_AS(solve_dare(0.5 * one, one, MatrixXd::Zero(1, 1), MatrixXd::Zero(1, 1),
                             MatrixXd::Zero(1, 1)),
                  IndefiniteInnovations);
  try {
    solve_dare(0.9 * one, one, one, MatrixXd::Zero(1, 1), one, 1e-12, 2);
    FAIL("expected NoConvergence");
  } catch (const NoConvergence& e) {
    CHECK(e.residual > 0.0);
  }
}

TEST_CASE("keeping every observation row is the identity reduction") {
  const VarModel m = random_stable_model(3, 2, 0.8, 9);
  const StateSpaceInnovations ss = var_to_ss(m);
  const StateSpaceInnovations same = subprocess_innovations(ss, {0, 1, 2});
  CHECK((same.V - ss.V).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("dropping the driver of a two-channel model whitens the target") {
  MatrixXd a1(2, 2);
  a1 << 0, 0.5, 0, 0;
  const VarModel m = validate_and_build_model({a1}, MatrixXd::Identity(2, 2));
  const StateSpaceInnovations red = subprocess_innovations(var_to_ss(m), {0});
  CHECK(red.V(0, 0) == doctest::Approx(1.25).epsilon(1e-10));
}

TEST_CASE("independent channels reduce to their own innovations") {
  MatrixXd a1 = MatrixXd::Zero(2, 2);
  a1(0, 0) = 0.6;
  a1(1, 1) = -0.4;
  MatrixXd sigma = MatrixXd::Zero(2, 2);
  sigma.diagonal() << 2.0, 0.5;
  const VarModel m = validate_and_build_model({a1}, sigma);
  const StateSpaceInnovations red = subprocess_innovations(var_to_ss(m), {0});
  CHECK(red.V(0, 0) == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("subset validation") {
  const StateSpaceInnovations ss = var_to_ss(random_stable_model(3, 1, 0.5, 10));
  CHECK_THROWS_AS(subprocess_innovations(ss, {}), EmptySubset);
  CHECK_THROWS_AS(subprocess_innovations(ss, {0, 3}), IndexError);
  CHECK_THROWS_AS(subprocess_innovations(ss, {1, 1}), IndexError);
}

TEST_CASE("reduced systems are minimum phase") {
  for (int k = 0; k < 8; ++k) {
    const VarModel m = random_stable_model(3, 2, 0.5 + 0.05 * k, 700 + k);
    const StateSpaceInnovations ss = var_to_ss(m);
    for (int drop = 0; drop < 3; ++drop) {
      std::vector<int> keep;
      for (int c = 0; c < 3; ++c)
        if (c != drop) keep.push_back(c);
      const StateSpaceInnovations red = subprocess_innovations(ss, keep);
      CHECK(radius(red.A - red.K * red.C) < 1.0 + 1e-10);
    }
  }
}

TEST_CASE("reduced innovations model reproduces the subprocess spectrum") {
  CounterRng freq_rng(2718);
  for (int k = 0; k < 6; ++k) {
    const VarModel m = random_stable_model(3, 2, 0.45 + 0.07 * k, 800 + k);
    const StateSpaceInnovations ss = var_to_ss(m);
    std::vector<int> keep{0, 2};
    const StateSpaceInnovations red = subprocess_innovations(ss, keep);
    for (int j = 0; j < 64; ++j) {
      const double w = 3.14159265358979323846 * freq_rng.uniform();
      const MatrixXcd S_full = [&] {
        const MatrixXcd g = ss_transfer(ss, w);
        return MatrixXcd(g * ss.V * g.adjoint());
      }();
      MatrixXcd S_keep(2, 2);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) S_keep(a, b) = S_full(keep[a], keep[b]);
      const MatrixXcd g = ss_transfer(red, w);
      const MatrixXcd S_red = g * red.V * g.adjoint();
      CHECK((S_red - S_keep).cwiseAbs().maxCoeff() < 1e-8);
    }
  }
}

TEST_CASE("embedded spectrum equals the VAR spectrum") {
  const VarModel m = random_stable_model(3, 3, 0.9, 12);
  const SpectralMatrix a = var_spectrum(m, 256);
  const SpectralMatrix b = ss_spectrum(var_to_ss(m), 256);
  double dev = 0;
  for (std::size_t i = 0; i < a.values.size(); ++i)
    dev = std::max(dev, (a.values[i] - b.values[i]).cwiseAbs().maxCoeff());
  CHECK(dev < 1e-10);
}

TEST_CASE("zero gain means a flat spectrum at V") {
  StateSpaceInnovations ss;
  ss.m = 2;
  ss.r = 2;
  ss.A = 0.5 * MatrixXd::Identity(2, 2);
  ss.C = MatrixXd::Identity(2, 2);
  ss.K = MatrixXd::Zero(2, 2);
  ss.V = (MatrixXd(2, 2) << 2, 0.3, 0.3, 1).finished();
  const SpectralMatrix s = ss_spectrum(ss, 32);
  for (const auto& v : s.values) CHECK((v - ss.V).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("transfer and inverse transfer are mutual inverses") {
  const VarModel m = random_stable_model(3, 2, 0.8, 13);
  const StateSpaceInnovations red = subprocess_innovations(var_to_ss(m), {0, 1});
  for (const double w : {0.0, 0.3, 1.1, 3.14159265358979}) {
    const MatrixXcd prod = ss_transfer(red, w) * ss_inverse_transfer(red, w);
    CHECK((prod - MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
  }
}
