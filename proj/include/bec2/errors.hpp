#pragma once

#include <stdexcept>
#include <string>

namespace bec2
{

/// Base for every failure raised by the library. Each subclass corresponds
/// to one distinguishable condition a caller may want to branch on.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

#define BEC2_DEFINE_ERROR(Name)                                                                    \
    class Name : public Error                                                                      \
    {                                                                                              \
    public:                                                                                        \
        using Error::Error;                                                                        \
    }

BEC2_DEFINE_ERROR(InvalidArgument);
BEC2_DEFINE_ERROR(NotSolvable);
BEC2_DEFINE_ERROR(SectorViolation);
BEC2_DEFINE_ERROR(ConvergenceFailure);
BEC2_DEFINE_ERROR(SizeExceeded);
BEC2_DEFINE_ERROR(BasisMismatch);
BEC2_DEFINE_ERROR(ProjectionOutOfRange);
BEC2_DEFINE_ERROR(BadCoefficients);
BEC2_DEFINE_ERROR(NoCollisions);
BEC2_DEFINE_ERROR(AllDegenerate);

#undef BEC2_DEFINE_ERROR

} // namespace bec2
