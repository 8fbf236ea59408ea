#include "ggc/state_space.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "ggc/errors.hpp"

namespace ggc {

namespace {

double spectral_radius(const MatrixXd& a) {
  Eigen::EigenSolver<MatrixXd> eig(a, /*computeEigenvectors=*/false);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

StateSpaceInnovations var_to_ss(const VarModel& model) {
  if (!model.stable()) throw Unstable(model.spectral_radius, "var_to_ss requires a stable model");
  const int n = model.n;
  const int p = model.p;
  const int m = n * p;

  StateSpaceInnovations ss;
  ss.m = m;
  ss.r = n;
  ss.A = companion_matrix(model.coeffs);
  ss.C = MatrixXd::Zero(n, m);
  ss.C.leftCols(n).setIdentity();
  ss.K = MatrixXd::Zero(m, n);
  ss.K.topRows(n) = model.coeffs[0];
  if (p > 1) ss.K.block(n, 0, n, n).setIdentity();
  ss.V = model.sigma;
  return ss;
}

DareSolution solve_dare(const MatrixXd& A, const MatrixXd& C, const MatrixXd& Q,
                        const MatrixXd& S, const MatrixXd& R, double tol, int max_iter) {
  const auto m = A.rows();
  const auto r = C.rows();
  if (A.cols() != m || C.cols() != m || Q.rows() != m || Q.cols() != m || S.rows() != m ||
      S.cols() != r || R.rows() != r || R.cols() != r)
    throw ShapeMismatch("solve_dare: inconsistent matrix dimensions");

  MatrixXd P = (Q + Q.transpose()) / 2.0;
  double last_residual = std::numeric_limits<double>::quiet_NaN();
  for (int it = 1; it <= max_iter; ++it) {
    const MatrixXd innov = C * P * C.transpose() + R;
    Eigen::LLT<MatrixXd> llt((innov + innov.transpose()) / 2.0);
    if (llt.info() != Eigen::Success)
      throw IndefiniteInnovations("solve_dare: C P C' + R lost positive-definiteness at iteration " +
                                  std::to_string(it));
    const MatrixXd gain_num = A * P * C.transpose() + S;
    const MatrixXd gain = llt.solve(gain_num.transpose()).transpose();
    MatrixXd next = A * P * A.transpose() + Q - gain * gain_num.transpose();
    next = (next + next.transpose()) / 2.0;

    const double residual = (next - P).norm();
    if (residual < tol * std::max(1.0, P.norm())) {
      // P itself satisfies ||P - f(P)|| = residual < tol; report it.
      DareSolution sol;
      sol.P = P;
      sol.K = gain;
      sol.V = (innov + innov.transpose()) / 2.0;
      sol.iterations = it;
      sol.residual = residual;
      return sol;
    }
    last_residual = residual;
    P = std::move(next);
  }
  throw NoConvergence(last_residual, "solve_dare");
}

StateSpaceInnovations subprocess_innovations(const StateSpaceInnovations& ss,
                                             const std::vector<int>& keep, double tol,
                                             int max_iter) {
  if (keep.empty()) throw EmptySubset("subprocess_innovations: keep set is empty");
  std::vector<int> idx = keep;
  std::sort(idx.begin(), idx.end());
  if (std::adjacent_find(idx.begin(), idx.end()) != idx.end())
    throw IndexError("subprocess_innovations: duplicate index in keep set");
  if (idx.front() < 0 || idx.back() >= ss.r)
    throw IndexError("subprocess_innovations: keep index out of range");

  const int rk = static_cast<int>(idx.size());
  MatrixXd Ck(rk, ss.m);
  MatrixXd Vsel(ss.r, rk);  // V(:, keep)
  MatrixXd Rk(rk, rk);
  for (int i = 0; i < rk; ++i) {
    Ck.row(i) = ss.C.row(idx[i]);
    Vsel.col(i) = ss.V.col(idx[i]);
  }
  for (int i = 0; i < rk; ++i)
    for (int j = 0; j < rk; ++j) Rk(i, j) = ss.V(idx[i], idx[j]);

  const MatrixXd Q = ss.K * ss.V * ss.K.transpose();
  const MatrixXd S = ss.K * Vsel;
  const DareSolution sol = solve_dare(ss.A, Ck, Q, S, Rk, tol, max_iter);

  StateSpaceInnovations out;
  out.m = ss.m;
  out.r = rk;
  out.A = ss.A;
  out.C = Ck;
  out.K = sol.K;
  out.V = sol.V;
  return out;
}

MatrixXcd ss_transfer(const StateSpaceInnovations& ss, double w) {
  const std::complex<double> z = std::polar(1.0, w);
  MatrixXcd zia = -ss.A.cast<std::complex<double>>();
  zia.diagonal().array() += z;
  Eigen::PartialPivLU<MatrixXcd> lu(zia);
  const MatrixXcd x = lu.solve(ss.K.cast<std::complex<double>>());
  MatrixXcd g = ss.C.cast<std::complex<double>>() * x;
  g.diagonal().array() += 1.0;
  if (!g.allFinite())
    throw SingularResolvent("ss_transfer: resolvent singular at w = " + std::to_string(w));
  return g;
}

MatrixXcd ss_inverse_transfer(const StateSpaceInnovations& ss, double w) {
  const std::complex<double> z = std::polar(1.0, w);
  MatrixXcd zib = (ss.K * ss.C - ss.A).cast<std::complex<double>>();
  zib.diagonal().array() += z;
  Eigen::PartialPivLU<MatrixXcd> lu(zib);
  const MatrixXcd x = lu.solve(ss.K.cast<std::complex<double>>());
  MatrixXcd g = -(ss.C.cast<std::complex<double>>() * x);
  g.diagonal().array() += 1.0;
  if (!g.allFinite())
    throw SingularResolvent("ss_inverse_transfer: resolvent singular at w = " + std::to_string(w));
  return g;
}

SpectralMatrix ss_spectrum(const StateSpaceInnovations& ss, int n_freq) {
  const std::vector<double> grid = frequency_grid(n_freq);
  std::vector<MatrixXcd> values;
  values.reserve(grid.size());
  for (const double w : grid) {
    const MatrixXcd g = ss_transfer(ss, w);
    values.push_back(g * ss.V * g.adjoint());
  }
  return make_spectral_matrix(grid, std::move(values));
}

}  // namespace ggc
