#pragma once

#include <stdexcept>
#include <string>

namespace ptw {

/// Base of every error raised by the library. `kind()` is a stable
/// identifier used by the CLI when reporting failures.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define PTW_DEFINE_ERROR(Name)                                                 \
    class Name : public Error {                                                \
    public:                                                                    \
        explicit Name(const std::string& what) : Error(#Name, what) {}         \
    }

/// Argument outside its admissible domain (e.g. u_c not in (0,1)).
PTW_DEFINE_ERROR(DomainError);
/// Integration ran past IntegrationControl::max_span without an event.
PTW_DEFINE_ERROR(SpanExceeded);
/// Step-size controller underflowed.
PTW_DEFINE_ERROR(StepFailure);
/// Shooting residual does not change sign on [0, v_upper_bound].
PTW_DEFINE_ERROR(NoSignChange);
/// Bisection iteration cap reached before the residual criterion held.
PTW_DEFINE_ERROR(MaxIterations);
PTW_DEFINE_ERROR(InsufficientTail);
PTW_DEFINE_ERROR(WindowTooNarrow);
PTW_DEFINE_ERROR(ProfileTooShort);

#undef PTW_DEFINE_ERROR

}  // namespace ptw
