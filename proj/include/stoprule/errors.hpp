#pragma once

#include <stdexcept>
#include <string>

namespace stoprule {

enum class ErrorCode {
    InvalidThreshold,
    InvalidCombination,
    InvalidParameters,
    DomainError,
    ConvergenceError,
    SizeLimit,
    NotThreshold,
};

const char* error_code_name(ErrorCode code);

class StopruleError : public std::runtime_error {
public:
    StopruleError(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
          code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

} // namespace stoprule
