#ifndef GGC_ERRORS_HPP
#define GGC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ggc {

// Base class for every error raised by this library. Numerical failures,
// contract violations and I/O problems all derive from it so the CLI can
// map them to a single exit code.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ShapeMismatch : Error {
  explicit ShapeMismatch(const std::string& msg) : Error(msg) {}
};

// Companion spectral radius >= 1.
struct Unstable : Error {
  double rho;
  explicit Unstable(double rho_, const std::string& what_ = "")
      : Error("unstable model: companion spectral radius = " +
              std::to_string(rho_) + (what_.empty() ? "" : " (" + what_ + ")")),
        rho(rho_) {}
};

struct NotPositiveDefinite : Error {
  explicit NotPositiveDefinite(const std::string& msg) : Error(msg) {}
};

struct InsufficientData : Error {
  explicit InsufficientData(const std::string& msg) : Error(msg) {}
};

struct SingularRegressors : Error {
  explicit SingularRegressors(const std::string& msg) : Error(msg) {}
};

struct TruncationCapReached : Error {
  explicit TruncationCapReached(const std::string& msg) : Error(msg) {}
};

struct SingularTransfer : Error {
  explicit SingularTransfer(const std::string& msg) : Error(msg) {}
};

struct SingularResolvent : Error {
  explicit SingularResolvent(const std::string& msg) : Error(msg) {}
};

struct NoConvergence : Error {
  double residual;
  explicit NoConvergence(double residual_, const std::string& what_)
      : Error(what_ + ": no convergence, residual = " + std::to_string(residual_)),
        residual(residual_) {}
};

struct IndefiniteInnovations : Error {
  explicit IndefiniteInnovations(const std::string& msg) : Error(msg) {}
};

struct EmptySubset : Error {
  explicit EmptySubset(const std::string& msg) : Error(msg) {}
};

struct IndexError : Error {
  explicit IndexError(const std::string& msg) : Error(msg) {}
};

// Fitted model fails the stability requirement of the state-space route.
struct UnstableFit : Error {
  double rho;
  explicit UnstableFit(double rho_)
      : Error("fitted VAR is unstable: spectral radius = " + std::to_string(rho_)),
        rho(rho_) {}
};

struct DegenerateStep : Error {
  explicit DegenerateStep(const std::string& msg) : Error(msg) {}
};

struct TooManyFailures : Error {
  explicit TooManyFailures(const std::string& msg) : Error(msg) {}
};

struct UnstableNullModel : Error {
  double rho;
  explicit UnstableNullModel(double rho_)
      : Error("null model is unstable: spectral radius = " + std::to_string(rho_)),
        rho(rho_) {}
};

struct EmptySample : Error {
  explicit EmptySample(const std::string& msg) : Error(msg) {}
};

struct ParseError : Error {
  int line;
  ParseError(int line_, const std::string& msg)
      : Error("parse error at line " + std::to_string(line_) + ": " + msg),
        line(line_) {}
};

struct SchemaError : Error {
  std::string field;
  explicit SchemaError(const std::string& field_, const std::string& msg)
      : Error("config field '" + field_ + "': " + msg), field(field_) {}
};

}  // namespace ggc

#endif  // GGC_ERRORS_HPP
