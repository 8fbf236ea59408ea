#ifndef GGC_TYPES_HPP
#define GGC_TYPES_HPP

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace ggc {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;

/// VAR(p) process x_t = sum_j A_j x_{t-j} + e_t with e_t ~ N(0, sigma).
///
/// Models built through validate_and_build_model are guaranteed stable
/// (companion spectral radius < 1) with symmetric positive-definite sigma.
/// Fitted models carry whatever radius the data produced; callers that need
/// stability must check `stable()`.
struct VarModel {
  int n = 0;                        // channel count
  int p = 0;                        // model order
  std::vector<MatrixXd> coeffs;     // A_1 .. A_p, each n x n
  MatrixXd sigma;                   // innovations covariance, n x n
  double spectral_radius = 0.0;     // companion radius; NaN if not assessed

  bool stable() const { return spectral_radius < 1.0; }
};

/// Multichannel observation matrix, one row per channel, one column per step.
struct TimeSeries {
  int n = 0;
  int T = 0;
  MatrixXd data;        // n x T
  bool demeaned = false;
};

/// Autocovariance sequence Gamma_k = E[x_t x_{t-k}'] for k = 0..q.
struct AutocovSequence {
  int n = 0;
  int q = 0;
  std::vector<MatrixXd> gammas;  // q+1 entries
};

/// Cross-power spectral density sampled on a uniform grid over [0, pi].
struct SpectralMatrix {
  int n = 0;
  std::vector<double> grid;        // normalized angular frequencies
  std::vector<MatrixXcd> values;   // Hermitian PSD n x n per grid point
};

/// Companion-matrix spectral radius of a coefficient stack.
double companion_spectral_radius(const std::vector<MatrixXd>& coeffs);

/// Builds the np x np companion matrix of a coefficient stack.
MatrixXd companion_matrix(const std::vector<MatrixXd>& coeffs);

/// Validates shapes, sigma positive-definiteness and stability, and returns
/// the model with its companion spectral radius recorded.
///
/// Throws ShapeMismatch, NotPositiveDefinite, or Unstable(rho).
VarModel validate_and_build_model(const std::vector<MatrixXd>& coeffs, const MatrixXd& sigma);

/// Wraps raw observations; rejects non-finite entries and empty dimensions.
TimeSeries make_time_series(const MatrixXd& data, bool demeaned = false);

/// Per-channel sample-mean removal.
TimeSeries demean(const TimeSeries& ts);

/// Validates Gamma_0 symmetry/PSD-ness and entry shapes.
AutocovSequence make_autocov_sequence(const std::vector<MatrixXd>& gammas);

/// Hermitianizes each grid value and validates Hermitian/PSD invariants.
SpectralMatrix make_spectral_matrix(std::vector<double> grid, std::vector<MatrixXcd> values);

/// log det of a symmetric positive-definite matrix via Cholesky.
/// Throws NotPositiveDefinite if the factorization fails.
double logdet_spd(const MatrixXd& m);

/// Uniform grid of n_freq points spanning [0, pi] inclusive.
std::vector<double> frequency_grid(int n_freq);

}  // namespace ggc

#endif  // GGC_TYPES_HPP
