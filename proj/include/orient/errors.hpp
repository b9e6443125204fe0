#pragma once

#include <stdexcept>
#include <string>

namespace orient {

// Base of every library error. `kind()` names the condition for CLI rendering.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define ORIENT_DEFINE_ERROR(Name)                                    \
  class Name : public Error {                                       \
   public:                                                          \
    explicit Name(const std::string& what) : Error(#Name, what) {}  \
  };

ORIENT_DEFINE_ERROR(InvalidArgument)
ORIENT_DEFINE_ERROR(QuadratureNotConverged)
ORIENT_DEFINE_ERROR(ClusterSizeCapExceeded)
ORIENT_DEFINE_ERROR(ParseError)
ORIENT_DEFINE_ERROR(NonFiniteTime)
ORIENT_DEFINE_ERROR(UnsupportedKernelScaling)
ORIENT_DEFINE_ERROR(NegativeDensity)
ORIENT_DEFINE_ERROR(BranchViolation)
ORIENT_DEFINE_ERROR(RejectionStall)
ORIENT_DEFINE_ERROR(NonMonotoneKernel)
ORIENT_DEFINE_ERROR(HOutOfRange)
ORIENT_DEFINE_ERROR(SupportExceedsGrid)
ORIENT_DEFINE_ERROR(AlphaOutOfRange)
ORIENT_DEFINE_ERROR(ConfigError)

#undef ORIENT_DEFINE_ERROR

}  // namespace orient
