#pragma once

#include <stdexcept>
#include <string>

namespace gibbs {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define GIBBS_DEFINE_ERROR(Name)                       \
    class Name : public Error {                        \
    public:                                            \
        explicit Name(const std::string& what)         \
            : Error(std::string(#Name ": ") + what) {} \
    }

GIBBS_DEFINE_ERROR(SupportNotContained);
GIBBS_DEFINE_ERROR(DimensionOverflow);
GIBBS_DEFINE_ERROR(SiteNotInSupport);
GIBBS_DEFINE_ERROR(NotHermitian);
GIBBS_DEFINE_ERROR(SingularOperator);
GIBBS_DEFINE_ERROR(NotAState);
GIBBS_DEFINE_ERROR(SupportMismatch);
GIBBS_DEFINE_ERROR(InvalidOrder);
GIBBS_DEFINE_ERROR(UnknownModel);
GIBBS_DEFINE_ERROR(ConfigInvalid);
GIBBS_DEFINE_ERROR(TooFewSamples);
GIBBS_DEFINE_ERROR(SchemaMismatch);
GIBBS_DEFINE_ERROR(DiagnosticsError);
GIBBS_DEFINE_ERROR(InvalidArgument);

#undef GIBBS_DEFINE_ERROR

}  // namespace gibbs
