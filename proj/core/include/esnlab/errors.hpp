#pragma once

#include <stdexcept>
#include <string>

namespace esnlab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define ESNLAB_DEFINE_ERROR(name)             \
    class name : public Error {               \
    public:                                   \
        using Error::Error;                   \
    }

ESNLAB_DEFINE_ERROR(InvalidConfig);
ESNLAB_DEFINE_ERROR(DegenerateReservoir);
ESNLAB_DEFINE_ERROR(NonFiniteState);
ESNLAB_DEFINE_ERROR(DimensionMismatch);
ESNLAB_DEFINE_ERROR(WashoutTooLarge);
ESNLAB_DEFINE_ERROR(SingularSystem);
ESNLAB_DEFINE_ERROR(FreeRunWithoutFeedback);
ESNLAB_DEFINE_ERROR(EmptyGroup);
ESNLAB_DEFINE_ERROR(LengthTooShort);
ESNLAB_DEFINE_ERROR(MalformedRecord);
ESNLAB_DEFINE_ERROR(UnknownLabel);
ESNLAB_DEFINE_ERROR(InvalidFractions);
ESNLAB_DEFINE_ERROR(EmptyInput);
ESNLAB_DEFINE_ERROR(ZeroVariance);
ESNLAB_DEFINE_ERROR(SingleClassOnly);
ESNLAB_DEFINE_ERROR(AllSeedsFailed);
ESNLAB_DEFINE_ERROR(TooFewValues);
ESNLAB_DEFINE_ERROR(NonPositiveTime);
ESNLAB_DEFINE_ERROR(IoFailure);

#undef ESNLAB_DEFINE_ERROR

}  // namespace esnlab
