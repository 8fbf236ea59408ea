#include "ggc/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ggc/errors.hpp"

namespace ggc {

namespace {

// 17 significant decimal digits round-trip a double exactly.
std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_spectral_csv(const SpectralSummary& summary, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << "source,target,freq,exact,median,ci_lo,ci_hi,threshold\n";
  // pairs are already ordered by (source, target)
  for (const PairSpectralSummary& p : summary.pairs) {
    for (std::size_t f = 0; f < summary.grid.size(); ++f) {
      out << (p.source + 1) << ',' << (p.target + 1) << ',' << fmt(summary.grid[f]) << ','
          << fmt(p.exact(f)) << ',' << fmt(p.median(f)) << ',' << fmt(p.lower(f)) << ','
          << fmt(p.upper(f)) << ',' << fmt(p.threshold) << '\n';
    }
  }
  if (!out) throw Error("write failed: " + path);
}

void write_sweep_csv(const SweepSummary& summary, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << "source,target,T,estimator,exact,median,bias,mad\n";
  for (const SweepCell& c : summary.cells) {
    out << (c.source + 1) << ',' << (c.target + 1) << ',' << c.T << ','
        << (c.estimator == Estimator::Single ? "single" : "dual") << ',' << fmt(c.exact) << ','
        << fmt(c.median) << ',' << fmt(c.bias) << ',' << fmt(c.mad) << '\n';
  }
  if (!out) throw Error("write failed: " + path);
}

TimeSeries read_time_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open data file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        row.push_back(v);
      } catch (const std::exception&) {
        throw ParseError(line_no, "not a number: '" + cell + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError(line_no, "inconsistent column count");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error("data file is empty: " + path);

  const int T = static_cast<int>(rows.size());
  const int n = static_cast<int>(rows.front().size());
  MatrixXd data(n, T);
  for (int t = 0; t < T; ++t)
    for (int c = 0; c < n; ++c) data(c, t) = rows[t][c];
  return make_time_series(data);
}

}  // namespace ggc
