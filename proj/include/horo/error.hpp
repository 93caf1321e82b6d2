#pragma once

#include <stdexcept>
#include <string>

namespace horo {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define HORO_DEFINE_ERROR(Name)                      \
    class Name : public Error {                      \
    public:                                          \
        explicit Name(const std::string& what)       \
            : Error(std::string(#Name ": ") + what) {} \
    };

HORO_DEFINE_ERROR(PoleError)
HORO_DEFINE_ERROR(DomainError)
HORO_DEFINE_ERROR(ConvergenceError)
HORO_DEFINE_ERROR(GridMismatch)
HORO_DEFINE_ERROR(BranchError)
HORO_DEFINE_ERROR(TubeViolation)
HORO_DEFINE_ERROR(ResolutionError)
HORO_DEFINE_ERROR(FitError)
HORO_DEFINE_ERROR(QuadratureError)
HORO_DEFINE_ERROR(StencilError)
HORO_DEFINE_ERROR(ConditioningError)
HORO_DEFINE_ERROR(ConfigError)

#undef HORO_DEFINE_ERROR

}  // namespace horo
