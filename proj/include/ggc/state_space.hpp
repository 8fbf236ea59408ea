#ifndef GGC_STATE_SPACE_HPP
#define GGC_STATE_SPACE_HPP

#include <vector>

#include "ggc/types.hpp"

namespace ggc {

/// Innovations-form state-space system
///
///   z_{t+1} = A z_t + K e_t
///   x_t     = C z_t + e_t,   cov(e_t) = V
///
/// with A stable and A - K C stable (minimum phase), so the filter is
/// causally invertible and V is the one-step prediction-error covariance.
struct StateSpaceInnovations {
  int m = 0;    // state dimension
  int r = 0;    // observation dimension
  MatrixXd A;   // m x m
  MatrixXd C;   // r x m
  MatrixXd K;   // m x r
  MatrixXd V;   // r x r
};

/// Steady-state Riccati solution for a filtering problem.
struct DareSolution {
  MatrixXd P;       // m x m, symmetric PSD
  MatrixXd K;       // m x r gain
  MatrixXd V;       // r x r innovations covariance
  int iterations = 0;
  double residual = 0.0;  // ||P - f(P)||_F of the accepted iterate
};

inline constexpr double kDareTol = 1e-12;
inline constexpr int kDareMaxIter = 100000;

/// Embeds a stable VAR(p) as an innovations-form state space on the
/// one-step predictor stack z_t = [x̂_{t|t-1}; x_{t-1}; ...; x_{t-p+1}]:
/// A is the companion matrix, C picks the top n state coordinates and
/// K = [A_1; I; 0; ...; 0] (K = A_1 when p = 1), V = sigma. The observation
/// process is distributionally identical to the VAR.
StateSpaceInnovations var_to_ss(const VarModel& model);

/// Solves the filtering DARE
///
///   P = A P A' + Q - (A P C' + S)(C P C' + R)^{-1}(A P C' + S)'
///
/// by the fixed-point Kalman recursion from P_0 = Q, returning the iterate
/// whose fixed-point residual ||P - f(P)||_F falls below
/// tol * max(1, ||P||_F), together with K = (A P C' + S)(C P C' + R)^{-1}
/// and V = C P C' + R.
///
/// Positive-definiteness of C P C' + R is checked by Cholesky at every
/// iterate; losing it raises IndefiniteInnovations rather than regularizing.
/// Throws NoConvergence(residual) after max_iter iterations.
DareSolution solve_dare(const MatrixXd& A, const MatrixXd& C, const MatrixXd& Q,
                        const MatrixXd& S, const MatrixXd& R, double tol = kDareTol,
                        int max_iter = kDareMaxIter);

/// Innovations model of the subprocess formed by the kept observation rows.
/// The state equation is unchanged; the induced filtering problem has state
/// noise Q = K V K', cross-covariance S = K V(:,keep) and observation noise
/// R = V(keep,keep). The returned V is the reduced prediction-error
/// covariance that enters GGC numerators.
///
/// Throws EmptySubset, IndexError, and propagates DARE errors.
StateSpaceInnovations subprocess_innovations(const StateSpaceInnovations& ss,
                                             const std::vector<int>& keep,
                                             double tol = kDareTol, int max_iter = kDareMaxIter);

/// Spectral density S(w) = G(w) V G(w)* with G(w) = I + C (e^{iw} I - A)^{-1} K
/// on the uniform [0, pi] grid.
SpectralMatrix ss_spectrum(const StateSpaceInnovations& ss, int n_freq);

/// Transfer function G(w) = I + C (e^{iw} I - A)^{-1} K at one frequency.
MatrixXcd ss_transfer(const StateSpaceInnovations& ss, double w);

/// Inverse transfer G(w)^{-1} = I - C (e^{iw} I - (A - K C))^{-1} K,
/// valid because A - K C is stable for a minimum-phase innovations model.
MatrixXcd ss_inverse_transfer(const StateSpaceInnovations& ss, double w);

}  // namespace ggc

#endif  // GGC_STATE_SPACE_HPP
