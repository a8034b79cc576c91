#pragma once

#include <stdexcept>
#include <string>

namespace quasicomb {

/// Base of every error the library throws on a documented failure path.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define QUASICOMB_ERROR(Name)              \
  class Name : public Error {              \
   public:                                 \
    using Error::Error;                    \
  }

QUASICOMB_ERROR(SingularBasis);
QUASICOMB_ERROR(NotASublattice);
QUASICOMB_ERROR(DimensionMismatch);
QUASICOMB_ERROR(TooFewPoints);
QUASICOMB_ERROR(NumericModeUnsupported);
QUASICOMB_ERROR(IncommensurableLeaves);
QUASICOMB_ERROR(NotDominated);
QUASICOMB_ERROR(DegenerateData);
QUASICOMB_ERROR(UnsupportedTerm);
QUASICOMB_ERROR(NonconvergentTail);
QUASICOMB_ERROR(NoFit);
QUASICOMB_ERROR(ParseError);

#undef QUASICOMB_ERROR

inline void check_dim(int expected, int got, const char* what) {
  if (expected != got)
    throw DimensionMismatch(std::string(what) + ": expected dimension " + std::to_string(expected) +
                            ", got " + std::to_string(got));
}

}  // namespace quasicomb
