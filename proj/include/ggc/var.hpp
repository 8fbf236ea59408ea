#ifndef GGC_VAR_HPP
#define GGC_VAR_HPP

#include <cstdint>

#include "ggc/types.hpp"

namespace ggc {

/// Simulates T observations of the VAR recursion driven by Gaussian
/// innovations with covariance sigma. The first burn_in samples are
/// discarded; the recursion starts from zero history. Identical
/// (model, T, burn_in, seed) give bit-identical output.
TimeSeries simulate_var(const VarModel& model, int T, int burn_in, std::uint64_t seed);

/// Ordinary least squares VAR(p) fit, regressing x_t on its p lags over
/// t = p+1..T. The series is demeaned first unless already flagged.
/// Residual covariance uses the degrees-of-freedom divisor (T-p) - n*p.
///
/// The returned model may be unstable; its spectral radius is recorded and
/// stability is the caller's concern.
///
/// Throws InsufficientData when (T-p) < n*p + 1, SingularRegressors when the
/// lag Gram matrix has reciprocal condition below 1e-12.
VarModel fit_var_ols(const TimeSeries& ts, int p);

/// Default relative decay tolerance and lag cap for var_autocov.
inline constexpr double kAutocovTol = 1e-12;
inline constexpr int kAutocovMaxLag = 10000;

/// Autocovariance sequence of a stable model. Gamma_0 comes from the
/// companion-form discrete Lyapunov equation (solved by doubling); higher
/// lags follow the Yule-Walker recursion. The sequence stops at the last
/// lag q for which ||Gamma_{q+1}||_F >= tol * ||Gamma_0||_F fails to hold,
/// i.e. the first negligible lag is excluded.
///
/// Throws TruncationCapReached if the decay target is not met by q_max.
AutocovSequence var_autocov(const VarModel& model, double tol = kAutocovTol,
                            int q_max = kAutocovMaxLag);

/// Spectral density S(w) = H(w) sigma H(w)* with H(w) = (I - sum_j A_j e^{-ijw})^{-1}
/// on the uniform [0, pi] grid of n_freq points.
///
/// Throws SingularTransfer if the inverse fails at a grid point (possible
/// only for boundary-unstable fitted models).
SpectralMatrix var_spectrum(const VarModel& model, int n_freq);

}  // namespace ggc

#endif  // GGC_VAR_HPP
