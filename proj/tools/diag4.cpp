#include <cmath>
#include <Eigen/Eigenvalues>
#include <cstdio>

#include "ggc/errors.hpp"
#include "ggc/gc.hpp"
#include "ggc/rng.hpp"
#include "ggc/types.hpp"

using namespace ggc;

static VarModel random_stable_model(int n, int p, double target_rho, std::uint64_t seed) {
  CounterRng rng(seed);
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<MatrixXd> coeffs(p, MatrixXd(n, n));
    for (auto& a : coeffs)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = rng.normal() / std::sqrt(double(n * p));
    const double rho0 = companion_spectral_radius(coeffs);
    if (rho0 < 1e-8) continue;
    for (int j = 0; j < p; ++j) coeffs[j] *= std::pow(target_rho / rho0, j + 1);
    MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = rng.normal();
    const MatrixXd sigma = m * m.transpose() / n + 0.25 * MatrixXd::Identity(n, n);
    return validate_and_build_model(coeffs, sigma);
  }
  throw Error("gen failed");
}

static double trap(const Eigen::ArrayXd& f) {
  const int K = f.size();
  double s = 0.5 * (f(0) + f(K - 1));
  for (int i = 1; i < K - 1; ++i) s += f(i);
  return s / (K - 1);
}

// min |root| of the intrinsic-factor zero polynomial
// P(L) = Phi_ss(L) - (Sigma_st / Sigma_tt) Phi_ts(L)
static double min_zero_modulus(const VarModel& m, int s, int t) {
  const double beta = m.sigma(s, t) / m.sigma(t, t);
  std::vector<double> c(m.p + 1, 0.0);
  c[0] = 1.0;
  for (int j = 1; j <= m.p; ++j)
    c[j] = -m.coeffs[j - 1](s, s) + beta * m.coeffs[j - 1](t, s);
  int deg = m.p;
  while (deg > 0 && std::abs(c[deg]) < 1e-14) --deg;
  if (deg == 0) return 1e300;
  MatrixXd comp = MatrixXd::Zero(deg, deg);
  for (int j = 0; j < deg; ++j) comp(0, j) = -c[deg - 1 - j] / c[deg];
  if (deg > 1) comp.block(1, 0, deg - 1, deg - 1).setIdentity();
  Eigen::EigenSolver<MatrixXd> eig(comp, false);
  return eig.eigenvalues().cwiseAbs().minCoeff();
}

int main() {
  for (int k = 0; k < 20; ++k) {
    const double rho = 0.30 + 0.60 * k / 19.0;
    const VarModel m = random_stable_model(2, 2 + k % 2, rho, 20000 + k);
    for (int s = 0; s < 2; ++s) {
      const int t = 1 - s;
      const double F = gc_time_exact(m, s, t);
      const auto f4k = gc_spectral_exact(m, s, t, 4096);
      const auto f64k = gc_spectral_exact(m, s, t, 65537);
      const double gap4 = std::abs(trap(f4k) - F) / std::max(F, 1e-6);
      const double gap64 = std::abs(trap(f64k) - F) / std::max(F, 1e-6);
      const double minroot = min_zero_modulus(m, s, t);
      if (gap4 > 1e-5 || minroot < 1.0)
        std::printf("k=%2d rho=%.2f s=%d: F=%.6f gap4k=%.3e gap64k=%.3e min|zero|=%.4f\n", k, rho,
                    s, F, gap4, gap64, minroot);
    }
  }
  return 0;
}
