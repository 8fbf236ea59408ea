// Development scratch checks; replaced by the real CLI once the engine is
// validated.
#include <array>
#include <chrono>
#include <cstdio>
#include <vector>

#include "ggc/errors.hpp"
#include "ggc/gc.hpp"
#include "ggc/rng.hpp"
#include "ggc/state_space.hpp"
#include "ggc/types.hpp"
#include "ggc/var.hpp"
#include "ggc/whittle.hpp"

using namespace ggc;

static VarModel random_stable_model(int n, int p, double target_rho, std::uint64_t seed,
                                    bool correlated_sigma) {
  CounterRng rng(seed);
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<MatrixXd> coeffs(p, MatrixXd(n, n));
    for (auto& a : coeffs)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = rng.normal() / std::sqrt(double(n * p));
    const double rho0 = companion_spectral_radius(coeffs);
    if (rho0 < 1e-8) continue;
    for (int j = 0; j < p; ++j) coeffs[j] *= std::pow(target_rho / rho0, j + 1);
    MatrixXd sigma = MatrixXd::Identity(n, n);
    if (correlated_sigma) {
      MatrixXd m(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = rng.normal();
      sigma = m * m.transpose() / n + 0.25 * MatrixXd::Identity(n, n);
    }
    return validate_and_build_model(coeffs, sigma);
  }
  throw Error("random model generation failed");
}

static double trapezoid_mean(const Eigen::ArrayXd& f) {
  const int K = static_cast<int>(f.size());
  double s = 0.5 * (f(0) + f(K - 1));
  for (int i = 1; i < K - 1; ++i) s += f(i);
  return s / (K - 1);
}

static double logdet_h(const MatrixXcd& m) {
  Eigen::LLT<MatrixXcd> llt(m);
  double s = 0.0;
  const MatrixXcd L = llt.matrixL();
  for (Eigen::Index i = 0; i < L.rows(); ++i) s += std::log(L(i, i).real());
  return 2.0 * s;
}

// Conditional spectral GC variants for candidate intrinsic/causal splits.
// variant A: causal = Q_xy Sigma_{y|x}   Q_xy*
// variant B: causal = Q_xy Sigma_{y|xz}  Q_xy*
// variant C: intrinsic = Qtilde_xx Sigma_xx Qtilde_xx* (target-innovation term
//            after orthogonalizing all other innovations against the target's)
static Eigen::ArrayXd cond_spectral_variant(const VarModel& m, int source, int target,
                                            int n_freq, char variant) {
  const int n = m.n;
  std::vector<int> kept;
  for (int c = 0; c < n; ++c)
    if (c != source) kept.push_back(c);
  const auto ss = var_to_ss(m);
  const auto red = subprocess_innovations(ss, kept);
  int tpos = -1;
  for (std::size_t i = 0; i < kept.size(); ++i)
    if (kept[i] == target) tpos = static_cast<int>(i);
  std::vector<int> rest;  // all full-system indices except the target
  for (int c = 0; c < n; ++c)
    if (c != target) rest.push_back(c);

  const MatrixXd& V = m.sigma;
  const MatrixXcd Vc = V.cast<std::complex<double>>();
  // partial covariances
  MatrixXd Vyx = MatrixXd::Zero(1, 1), Vyxz = MatrixXd::Zero(1, 1);
  {
    const double vyy = V(source, source);
    Vyx(0, 0) = vyy - V(source, target) * V(source, target) / V(target, target);
    MatrixXd Vkk(kept.size(), kept.size());
    Eigen::VectorXd Vky(kept.size());
    for (std::size_t i = 0; i < kept.size(); ++i) {
      Vky(i) = V(kept[i], source);
      for (std::size_t j = 0; j < kept.size(); ++j) Vkk(i, j) = V(kept[i], kept[j]);
    }
    Vyxz(0, 0) = vyy - Vky.dot(Vkk.ldlt().solve(Vky));
  }
  // coefficients of the projection of rest-innovations on the target's
  Eigen::VectorXd beta(rest.size());
  for (std::size_t i = 0; i < rest.size(); ++i) beta(i) = V(rest[i], target) / V(target, target);

  const auto grid = frequency_grid(n_freq);
  Eigen::ArrayXd out(grid.size());
  for (std::size_t fi = 0; fi < grid.size(); ++fi) {
    const MatrixXcd H = ss_transfer(ss, grid[fi]);
    const MatrixXcd Ginv = ss_inverse_transfer(red, grid[fi]);
    MatrixXcd Hk(kept.size(), n);
    for (std::size_t i = 0; i < kept.size(); ++i) Hk.row(i) = H.row(kept[i]);
    const MatrixXcd Q = Ginv * Hk;
    const Eigen::RowVectorXcd qx = Q.row(tpos);
    const MatrixXcd N = qx * Vc * qx.adjoint();
    MatrixXcd D;
    if (variant == 'A') {
      D = N;
      D(0, 0) -= qx(source) * Vyx(0, 0) * std::conj(qx(source));
    } else if (variant == 'B') {
      D = N;
      D(0, 0) -= qx(source) * Vyxz(0, 0) * std::conj(qx(source));
    } else {
      std::complex<double> qtilde = qx(target);
      for (std::size_t i = 0; i < rest.size(); ++i) qtilde += qx(rest[i]) * beta(i);
      D = MatrixXcd::Constant(1, 1, qtilde * V(target, target) * std::conj(qtilde));
    }
    out(fi) = logdet_h(N) - logdet_h(D);
  }
  return out;
}

int main() {
  // 1. ln 1.25 closed form, time and spectral.
  {
    std::vector<MatrixXd> coeffs{(MatrixXd(2, 2) << 0, 0.5, 0, 0).finished()};
    VarModel m = validate_and_build_model(coeffs, MatrixXd::Identity(2, 2));
    const double F = gc_time_exact(m, 1, 0);
    const auto f = gc_spectral_exact(m, 1, 0, 256);
    std::printf("ln1.25 check: F = %.12f (want %.12f), spectral dev = %.3e\n", F, std::log(1.25),
                (f - std::log(1.25)).abs().maxCoeff());
    std::printf("reverse direction: F = %.3e, spectral max = %.3e\n", gc_time_exact(m, 0, 1),
                gc_spectral_exact(m, 0, 1, 64).abs().maxCoeff());
  }

  // 2. Bivariate integral identity on random models with correlated sigma.
  {
    double worst = 0.0;
    for (int k = 0; k < 8; ++k) {
      VarModel m = random_stable_model(2, 2 + (k % 2), 0.3 + 0.07 * k, 1000 + k, true);
      for (int s = 0; s < 2; ++s) {
        const int t = 1 - s;
        const double F = gc_time_exact(m, s, t);
        const double mean = trapezoid_mean(gc_spectral_exact(m, s, t, 4096));
        const double rel = std::abs(mean - F) / std::max(F, 1e-6);
        worst = std::max(worst, rel);
      }
    }
    std::printf("bivariate integral identity worst rel err: %.3e\n", worst);
  }

  // 3. Conditional integral identity on random 3- and 4-channel models,
  //    across candidate intrinsic/causal decompositions.
  {
    for (const char variant : {'A', 'B', 'C'}) {
      double worst = 0.0, worst_neg = 0.0;
      for (int k = 0; k < 8; ++k) {
        const int n = 3 + (k % 2);
        VarModel m = random_stable_model(n, 2, 0.4 + 0.06 * k, 2000 + k, true);
        for (int s = 0; s < n; ++s)
          for (int t = 0; t < n; ++t) {
            if (s == t) continue;
            const double F = gc_time_exact(m, s, t);
            const auto f = cond_spectral_variant(m, s, t, 4096, variant);
            const double rel = std::abs(trapezoid_mean(f) - F) / std::max(F, 1e-6);
            worst = std::max(worst, rel);
            worst_neg = std::min(worst_neg, f.minCoeff());
          }
      }
      std::printf("conditional variant %c: worst integral rel err %.3e, most negative value %.3e\n",
                  variant, worst, worst_neg);
    }
  }

  // 3b. Library conditional path vs integral identity + variant C agreement.
  {
    double worst = 0.0, agree = 0.0;
    for (int k = 0; k < 8; ++k) {
      const int n = 3 + (k % 2);
      VarModel m = random_stable_model(n, 2, 0.4 + 0.06 * k, 2000 + k, true);
      for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t) {
          if (s == t) continue;
          const double F = gc_time_exact(m, s, t);
          const auto f = gc_spectral_exact(m, s, t, 4096);
          worst = std::max(worst, std::abs(trapezoid_mean(f) - F) / std::max(F, 1e-6));
          agree = std::max(agree, (f - cond_spectral_variant(m, s, t, 4096, 'C')).abs().maxCoeff());
        }
    }
    std::printf("library conditional: worst integral rel err %.3e, variant-C agreement %.3e\n",
                worst, agree);
  }

  // 3c. Timing of the estimated all-pairs path at Monte Carlo scale.
  {
    std::vector<MatrixXd> coeffs{(MatrixXd(3, 3) << 0.5, 0, 0, 0.4, 0.3, 0, 0, 0.6, 0.2).finished(),
                                 (MatrixXd(3, 3) << 0.1, 0, 0, 0, 0.1, 0, 0, 0, 0.1).finished(),
                                 (MatrixXd(3, 3) << 0.05, 0, 0, 0, 0.05, 0, 0, 0, 0.05).finished()};
    VarModel m = validate_and_build_model(coeffs, MatrixXd::Identity(3, 3));
    const auto t0 = std::chrono::steady_clock::now();
    int reps = 50;
    for (int k = 0; k < reps; ++k) {
      auto ts = simulate_var(m, 500, 1000, 7000 + k);
      auto res = single_regression_gc(ts, 3, 256);
      (void)res;
    }
    const auto t1 = std::chrono::steady_clock::now();
    std::printf("single_regression_gc(T=500, 256 freqs): %.2f ms/realisation\n",
                std::chrono::duration<double, std::milli>(t1 - t0).count() / reps);
  }

  // 4. Whittle oracle vs state-space route.
  {
    double worst = 0.0;
    for (int k = 0; k < 6; ++k) {
      const int n = 2 + (k % 3);
      VarModel m = random_stable_model(n, 2, 0.35 + 0.1 * k, 3000 + k, true);
      for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t) {
          if (s == t) continue;
          worst = std::max(worst, std::abs(gc_time_via_whittle(m, s, t) - gc_time_exact(m, s, t)));
        }
    }
    std::printf("whittle vs exact worst abs err: %.3e\n", worst);
  }

  // 5. Chain model conditional null.
  {
    std::vector<MatrixXd> coeffs{(MatrixXd(3, 3) << 0.5, 0, 0, 0.4, 0.3, 0, 0, 0.6, 0.2).finished()};
    VarModel m = validate_and_build_model(coeffs, MatrixXd::Identity(3, 3));
    std::printf("chain F_{0->2|1} = %.3e (want 0); F_{0->1} = %.4f, F_{1->2} = %.4f\n",
                gc_time_exact(m, 0, 2), gc_time_exact(m, 0, 1), gc_time_exact(m, 1, 2));
    const auto fc = gc_spectral_exact(m, 0, 2, 128);
    std::printf("chain spectral null max = %.3e\n", fc.abs().maxCoeff());
  }

  // 7. Candidate 3-node chain-of-oscillators model: exact values and
  //    estimator comparison at desk scale.
  {
    auto osc = [](double r, double theta, double s) {
      return std::array<double, 3>{2 * r * std::cos(theta) + s,
                                   -(r * r + 2 * r * s * std::cos(theta)), r * r * s};
    };
    const double pi = 3.14159265358979323846;
    const auto n1 = osc(0.9, 2 * pi / 3, 0.3);   // 40 Hz at fs = 120
    const auto n2 = osc(0.7, pi / 6, 0.4);       // 10 Hz
    const auto n3 = osc(0.8, 5 * pi / 6, 0.25);  // 50 Hz
    const double c21 = 0.5, c32 = 0.5;
    MatrixXd A1 = MatrixXd::Zero(3, 3), A2 = MatrixXd::Zero(3, 3), A3 = MatrixXd::Zero(3, 3);
    A1.diagonal() << n1[0], n2[0], n3[0];
    A2.diagonal() << n1[1], n2[1], n3[1];
    A3.diagonal() << n1[2], n2[2], n3[2];
    A2(1, 0) = c21;
    A2(2, 1) = c32;
    VarModel m = validate_and_build_model({A1, A2, A3}, MatrixXd::Identity(3, 3));
    std::printf("example model rho = %.4f\n", m.spectral_radius);
    const auto F = gc_all_pairs_time(m);
    for (int t = 0; t < 3; ++t)
      for (int s = 0; s < 3; ++s)
        if (s != t) std::printf("  F(%d->%d) = %.6f\n", s + 1, t + 1, F.F(t, s));
    // spectral peak locations for the two causal links
    const auto f12 = gc_spectral_exact(m, 0, 1, 256);
    const auto f23 = gc_spectral_exact(m, 1, 2, 256);
    int k12, k23;
    f12.maxCoeff(&k12);
    f23.maxCoeff(&k23);
    std::printf("  peak f(1->2) = %.4f at %.1f Hz; peak f(2->3) = %.4f at %.1f Hz\n",
                f12.maxCoeff(), 60.0 * k12 / 255, f23.maxCoeff(), 60.0 * k23 / 255);

    // desk-scale estimator comparison
    for (int T : {128, 512, 2048}) {
      const int R = 200;
      int unstable = 0;
      std::vector<std::vector<double>> s_samp(9), d_samp(9);
      for (int k = 0; k < R; ++k) {
        auto ts = simulate_var(m, T, 1000, derive_seed(99, k));
        try {
          auto st = single_regression_gc_time(ts, 3);
          auto dt = dual_regression_all_pairs(ts, 3, 3);
          for (int t = 0; t < 3; ++t)
            for (int s = 0; s < 3; ++s) {
              if (s == t) continue;
              s_samp[t * 3 + s].push_back(st.F(t, s));
              d_samp[t * 3 + s].push_back(dt.F(t, s));
            }
        } catch (const Error&) {
          ++unstable;
        }
      }
      auto med = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        const std::size_t h = v.size() / 2;
        return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
      };
      auto mad = [&](const std::vector<double>& v) {
        const double c = med(v);
        double s = 0;
        for (double x : v) s += std::abs(x - c);
        return s / v.size();
      };
      int win_both = 0, cells = 0;
      for (int t = 0; t < 3; ++t)
        for (int s = 0; s < 3; ++s) {
          if (s == t) continue;
          const double ex = F.F(t, s);
          const double bs = std::abs(med(s_samp[t * 3 + s]) - ex);
          const double bd = std::abs(med(d_samp[t * 3 + s]) - ex);
          const double ms = mad(s_samp[t * 3 + s]), md = mad(d_samp[t * 3 + s]);
          ++cells;
          if (bs <= bd && ms <= md) ++win_both;
          std::printf("  T=%d pair %d->%d%s: |bias| single %.5f dual %.5f; mad single %.5f dual %.5f\n",
                      T, s + 1, t + 1, ex > 0 ? "*" : " ", bs, bd, ms, md);
        }
      std::printf("  T=%d: unstable %d/%d, single wins both metrics in %d/%d cells\n", T, unstable,
                  R, win_both, cells);
    }
  }

  // 6. Reduction identity and subprocess white-noise value.
  {
    VarModel m = random_stable_model(3, 2, 0.7, 4242, true);
    auto ss = var_to_ss(m);
    auto same = subprocess_innovations(ss, {0, 1, 2});
    std::printf("keep-all identity dev: %.3e\n", (same.V - ss.V).cwiseAbs().maxCoeff());
    auto spec_var = var_spectrum(m, 64);
    auto spec_ss = ss_spectrum(ss, 64);
    double dev = 0.0;
    for (int i = 0; i < 64; ++i)
      dev = std::max(dev, (spec_var.values[i] - spec_ss.values[i]).cwiseAbs().maxCoeff());
    std::printf("var vs ss spectrum dev: %.3e\n", dev);
  }
  return 0;
}
