#ifndef GGC_CSV_HPP
#define GGC_CSV_HPP

#include <string>

#include "ggc/mc.hpp"
#include "ggc/types.hpp"

namespace ggc {

/// Spectral experiment table. Columns:
///   source,target,freq,exact,median,ci_lo,ci_hi,threshold
/// one row per (pair, frequency), channels 1-based, frequencies in
/// normalized radians, every float printed with 17 significant digits,
/// rows sorted by (source, target, freq).
void write_spectral_csv(const SpectralSummary& summary, const std::string& path);

/// Sweep table. Columns:
///   source,target,T,estimator,exact,median,bias,mad
/// sorted by (source, target, T, estimator).
void write_sweep_csv(const SweepSummary& summary, const std::string& path);

/// Headerless CSV of observations: one row per time step, one column per
/// channel. Returns the n x T series (not demeaned).
TimeSeries read_time_series_csv(const std::string& path);

}  // namespace ggc

#endif  // GGC_CSV_HPP
