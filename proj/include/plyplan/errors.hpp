#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace plyplan {

// Base of every error raised by the library. kind() is the stable,
// machine-readable name used in reports and CLI output.
class Error : public std::runtime_error {
 public:
  Error(std::string_view kind, const std::string& message)
      : std::runtime_error(std::string(kind) + ": " + message), kind_(kind) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define PLYPLAN_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                        \
   public:                                                           \
    explicit Name(const std::string& message) : Error(#Name, message) {} \
  }

PLYPLAN_DEFINE_ERROR(ParseError);
PLYPLAN_DEFINE_ERROR(InvariantError);
PLYPLAN_DEFINE_ERROR(DegenerateGeometry);
PLYPLAN_DEFINE_ERROR(CyclicDependency);
PLYPLAN_DEFINE_ERROR(IndexOutOfRange);
PLYPLAN_DEFINE_ERROR(UnsupportedCurvature);
PLYPLAN_DEFINE_ERROR(NoFeasibleConfiguration);
PLYPLAN_DEFINE_ERROR(InapplicableAction);
PLYPLAN_DEFINE_ERROR(DeadEnd);
PLYPLAN_DEFINE_ERROR(BudgetExceeded);
PLYPLAN_DEFINE_ERROR(InstanceTooLarge);
PLYPLAN_DEFINE_ERROR(PlanSyntaxError);
PLYPLAN_DEFINE_ERROR(UnknownAction);

#undef PLYPLAN_DEFINE_ERROR

// Carries the validator's violation list alongside the message.
class InvalidExternalPlan : public Error {
 public:
  InvalidExternalPlan(const std::string& message, std::vector<std::string> violations)
      : Error("InvalidExternalPlan", message), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

}  // namespace plyplan
