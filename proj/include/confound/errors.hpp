#pragma once

#include <stdexcept>
#include <string>

namespace confound {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define CONFOUND_DEFINE_ERROR(Name)             \
  class Name : public Error {                   \
   public:                                      \
    using Error::Error;                         \
  }

CONFOUND_DEFINE_ERROR(InvalidArgument);
CONFOUND_DEFINE_ERROR(ZeroVariance);
CONFOUND_DEFINE_ERROR(TooFewSamples);
CONFOUND_DEFINE_ERROR(IoError);
CONFOUND_DEFINE_ERROR(FormatError);
CONFOUND_DEFINE_ERROR(DegenerateData);
CONFOUND_DEFINE_ERROR(NumericalFailure);
CONFOUND_DEFINE_ERROR(TooFewPoints);
CONFOUND_DEFINE_ERROR(DegenerateSpectrum);
CONFOUND_DEFINE_ERROR(EmbeddingFailure);
CONFOUND_DEFINE_ERROR(NonFinite);
CONFOUND_DEFINE_ERROR(FactorizationFailure);

#undef CONFOUND_DEFINE_ERROR

}  // namespace confound
