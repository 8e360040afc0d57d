#pragma once

#include <stdexcept>
#include <string>

namespace singmetric {

struct EngineMismatch : std::runtime_error {
  explicit EngineMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct IncomparableError : std::runtime_error {
  explicit IncomparableError(const std::string& what) : std::runtime_error(what) {}
};

struct AmbientMismatch : EngineMismatch {
  explicit AmbientMismatch(const std::string& what) : EngineMismatch(what) {}
};

struct BudgetMismatch : EngineMismatch {
  explicit BudgetMismatch(const std::string& what) : EngineMismatch(what) {}
};

struct MeetNonexistent : std::runtime_error {
  explicit MeetNonexistent(const std::string& what) : std::runtime_error(what) {}
};

struct EnvelopeNonexistent : std::runtime_error {
  explicit EnvelopeNonexistent(const std::string& what) : std::runtime_error(what) {}
};

struct BudgetExceeded : std::runtime_error {
  explicit BudgetExceeded(const std::string& what, int index)
      : std::runtime_error(what), offending_index(index) {}
  int offending_index;
};

struct UnsupportedEngine : std::runtime_error {
  explicit UnsupportedEngine(const std::string& what) : std::runtime_error(what) {}
};

struct NotInCone : std::runtime_error {
  explicit NotInCone(const std::string& what) : std::runtime_error(what) {}
};

struct Divergence : std::runtime_error {
  Divergence(const std::string& what, double residual)
      : std::runtime_error(what), residual(residual) {}
  double residual;
};

struct MonotonicityViolation : std::runtime_error {
  explicit MonotonicityViolation(const std::string& what) : std::runtime_error(what) {}
};

struct IncompatibleData : std::runtime_error {
  explicit IncompatibleData(const std::string& what) : std::runtime_error(what) {}
};

struct SingularBudget : std::runtime_error {
  explicit SingularBudget(const std::string& what) : std::runtime_error(what) {}
};

struct ModelSoundnessFailure : std::logic_error {
  explicit ModelSoundnessFailure(const std::string& what) : std::logic_error(what) {}
};

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

struct UnknownSuite : std::runtime_error {
  explicit UnknownSuite(const std::string& what) : std::runtime_error(what) {}
};

struct UnknownProfile : std::runtime_error {
  explicit UnknownProfile(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace singmetric
