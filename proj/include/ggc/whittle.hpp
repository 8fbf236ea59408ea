#ifndef GGC_WHITTLE_HPP
#define GGC_WHITTLE_HPP

#include <vector>

#include "ggc/types.hpp"
#include "ggc/var.hpp"

namespace ggc {

/// Result of the multichannel Levinson-Whittle recursion: the VAR(q) factor
/// of an autocovariance sequence and the forward prediction-error covariance
/// after each recursion step (step_covs[k] is the order-k error covariance;
/// the sequence is non-increasing in the Loewner order).
struct WhittleResult {
  VarModel model;
  std::vector<MatrixXd> step_covs;  // q+1 entries, Sigma^f_0 .. Sigma^f_q
};

/// Whittle-Wiggins-Robinson recursion factorizing Gamma_0..Gamma_q into
/// forward VAR(q) coefficients plus prediction-error covariance. Exact up to
/// roundoff when the sequence comes from a true VAR of order <= q.
///
/// The fitted model's spectral radius is computed only when n*q <= 600
/// (companion eigenvalues get expensive for the high orders the oracle
/// uses); otherwise it is recorded as NaN.
///
/// Throws DegenerateStep if a step's error covariance loses
/// positive-definiteness, Error when order exceeds the available lags.
WhittleResult whittle_factorize(const AutocovSequence& acov, int order);

/// Time-domain GGC via the autocovariance route: computes the model
/// autocovariance to the decay tolerance, restricts it to the source-omitted
/// channels, factorizes at the decay-chosen order and returns
/// ln(det V'_tt / det Sigma_tt). Serves as the independent oracle for
/// gc_time_exact.
double gc_time_via_whittle(const VarModel& model, int source, int target,
                           const std::vector<int>& conditioning, double tol = kAutocovTol);

/// Same, with the default "all other channels" conditioning set.
double gc_time_via_whittle(const VarModel& model, int source, int target,
                           double tol = kAutocovTol);

}  // namespace ggc

#endif  // GGC_WHITTLE_HPP
