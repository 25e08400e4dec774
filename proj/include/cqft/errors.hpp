#pragma once

#include <stdexcept>
#include <string>

namespace cqft {

/// Broad failure classes. The CLI maps these onto process exit codes.
enum class ErrorCategory {
  Validation,   ///< bad input or violated precondition
  Convergence,  ///< a numerical procedure failed to converge
  ResourceCap,  ///< a configured size or term-count cap would be exceeded
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

#define CQFT_DEFINE_ERROR(Name, Category)                                  \
  class Name : public Error {                                              \
   public:                                                                 \
    explicit Name(const std::string& what)                                 \
        : Error(ErrorCategory::Category, std::string(#Name ": ") + what) {} \
  }

CQFT_DEFINE_ERROR(DomainError, Validation);
CQFT_DEFINE_ERROR(DegenerateDispersion, Validation);
CQFT_DEFINE_ERROR(LatticeTooSmall, Validation);
CQFT_DEFINE_ERROR(OddLattice, Validation);
CQFT_DEFINE_ERROR(UnknownDiagram, Validation);
CQFT_DEFINE_ERROR(IllConditionedFit, Validation);
CQFT_DEFINE_ERROR(ObservableFailure, Validation);
CQFT_DEFINE_ERROR(QuadratureNotConverged, Convergence);
CQFT_DEFINE_ERROR(Diverged, Convergence);
CQFT_DEFINE_ERROR(NonFinite, Convergence);
CQFT_DEFINE_ERROR(DimensionCap, ResourceCap);
CQFT_DEFINE_ERROR(BruteForceCap, ResourceCap);

#undef CQFT_DEFINE_ERROR

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw DomainError(message);
}

}  // namespace detail
}  // namespace cqft
