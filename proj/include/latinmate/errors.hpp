#pragma once

#include <stdexcept>
#include <string>

namespace latinmate {

// Base for every error the library throws. Algorithmic failures that are a
// legal outcome (Γ-exit, no Hall matching, exhausted search) are reported in
// result structs instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define LATINMATE_ERROR(Name)         \
  class Name : public Error {         \
   public:                            \
    using Error::Error;               \
  }

LATINMATE_ERROR(ParseError);
LATINMATE_ERROR(NotLatin);
LATINMATE_ERROR(InvalidShape);
LATINMATE_ERROR(ShapeMismatch);
LATINMATE_ERROR(IndexOutOfRange);
LATINMATE_ERROR(NotOrthogonal);
LATINMATE_ERROR(RowAlreadyColoured);
LATINMATE_ERROR(DegenerateDenominator);
LATINMATE_ERROR(DeadSymbol);
LATINMATE_ERROR(TooLarge);
LATINMATE_ERROR(Infeasible);
LATINMATE_ERROR(NoSupportMatching);
LATINMATE_ERROR(LimitExceeded);
LATINMATE_ERROR(EmptyTrajectory);

#undef LATINMATE_ERROR

}  // namespace latinmate
