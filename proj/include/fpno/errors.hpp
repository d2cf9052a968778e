#pragma once

#include <stdexcept>
#include <string>

namespace fpno {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define FPNO_DEFINE_ERROR(Name)          \
  class Name : public Error {            \
   public:                               \
    using Error::Error;                  \
  }

FPNO_DEFINE_ERROR(InvalidMesh);
FPNO_DEFINE_ERROR(Unsupported);
FPNO_DEFINE_ERROR(TransferError);
FPNO_DEFINE_ERROR(DimensionError);
FPNO_DEFINE_ERROR(IndexError);
FPNO_DEFINE_ERROR(SingularMatrix);
FPNO_DEFINE_ERROR(CovarianceNotPD);
FPNO_DEFINE_ERROR(StateError);
FPNO_DEFINE_ERROR(ModelNaN);
FPNO_DEFINE_ERROR(DataGenFailure);
FPNO_DEFINE_ERROR(OptStepError);
FPNO_DEFINE_ERROR(FormatError);
FPNO_DEFINE_ERROR(ConfigError);

// A trial deformation with det(F) <= 0 at some quadrature point. Solvers
// catch this and treat the trial step as rejected.
FPNO_DEFINE_ERROR(ElementInversion);

#undef FPNO_DEFINE_ERROR

}  // namespace fpno
