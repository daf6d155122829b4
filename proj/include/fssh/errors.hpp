#pragma once

#include <stdexcept>
#include <string>

namespace fssh {

/// Error category, used by the CLI to pick an exit code:
/// spec errors exit with 2, numerical-validity errors with 3.
enum class ErrorKind { spec, numeric };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// --- configuration / usage errors (exit code 2) ---

struct SpecError : Error {
  explicit SpecError(const std::string& what) : Error(ErrorKind::spec, what) {}
};

struct GeometryError : Error {
  explicit GeometryError(const std::string& what) : Error(ErrorKind::spec, what) {}
};

struct BoundaryMismatch : Error {
  explicit BoundaryMismatch(const std::string& what) : Error(ErrorKind::spec, what) {}
};

struct PlanError : Error {
  explicit PlanError(const std::string& what) : Error(ErrorKind::spec, what) {}
};

struct StateError : Error {
  explicit StateError(const std::string& what) : Error(ErrorKind::spec, what) {}
};

struct DriveError : Error {
  explicit DriveError(const std::string& what) : Error(ErrorKind::spec, what) {}
};

struct ScenarioError : Error {
  explicit ScenarioError(const std::string& what) : Error(ErrorKind::spec, what) {}
};

// --- numerical-validity errors (exit code 3) ---

struct HermiticityViolation : Error {
  HermiticityViolation(const std::string& what, double max_asymmetry)
      : Error(ErrorKind::numeric, what), max_asymmetry(max_asymmetry) {}
  double max_asymmetry;
};

struct ConvergenceFailure : Error {
  explicit ConvergenceFailure(const std::string& what) : Error(ErrorKind::numeric, what) {}
};

struct UnitarityViolation : Error {
  UnitarityViolation(const std::string& what, double defect)
      : Error(ErrorKind::numeric, what), defect(defect) {}
  double defect;
};

struct BranchAmbiguity : Error {
  explicit BranchAmbiguity(const std::string& what) : Error(ErrorKind::numeric, what) {}
};

struct GapClosedError : Error {
  explicit GapClosedError(const std::string& what) : Error(ErrorKind::numeric, what) {}
};

struct ResolutionError : Error {
  explicit ResolutionError(const std::string& what) : Error(ErrorKind::numeric, what) {}
};

struct ChiralityViolation : Error {
  ChiralityViolation(const std::string& what, double leakage)
      : Error(ErrorKind::numeric, what), leakage(leakage) {}
  double leakage;
};

}  // namespace fssh
