#pragma once

#include <stdexcept>
#include <string>

namespace assoc {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NegativeWeight : Error { using Error::Error; };
struct NonFiniteWeight : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct InconsistentEvent : Error { using Error::Error; };
struct BudgetExceeded : Error { using Error::Error; };
struct MismatchedZeroPattern : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct NotContracting : Error { using Error::Error; };
struct IterationCap : Error { using Error::Error; };
struct ShapeMismatch : Error { using Error::Error; };
struct SingularInnovation : Error { using Error::Error; };
struct NumericalError : Error { using Error::Error; };
struct DepthBudget : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

}  // namespace assoc
