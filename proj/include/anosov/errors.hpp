#pragma once

#include <stdexcept>
#include <string>

namespace anosov {

// Base class for every failure raised by the library. The concrete type names
// the failure; what() carries the detail.
class error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

#define ANOSOV_DEFINE_ERROR(name)                                      \
  class name : public error {                                          \
  public:                                                              \
    explicit name(const std::string& what) : error(#name ": " + what) {} \
  }

// torus
ANOSOV_DEFINE_ERROR(NonHyperbolic);
ANOSOV_DEFINE_ERROR(NonUnimodular);
ANOSOV_DEFINE_ERROR(DegeneratePeriod);
// coding
ANOSOV_DEFINE_ERROR(ConstructionFailed);
ANOSOV_DEFINE_ERROR(EmptyCylinder);
// gibbs
ANOSOV_DEFINE_ERROR(NotMixing);
ANOSOV_DEFINE_ERROR(NoConvergence);
ANOSOV_DEFINE_ERROR(ZeroMassCylinder);
// pressure
ANOSOV_DEFINE_ERROR(GridTooCoarse);
ANOSOV_DEFINE_ERROR(NonConvex);
// realization
ANOSOV_DEFINE_ERROR(BoundaryCode);
ANOSOV_DEFINE_ERROR(OutsideA0);
// pipeline
ANOSOV_DEFINE_ERROR(ConditionDegenerate);
ANOSOV_DEFINE_ERROR(IoFailure);

#undef ANOSOV_DEFINE_ERROR

}  // namespace anosov
