#pragma once

#include <stdexcept>
#include <string>

namespace mbv {

// Error taxonomy shared by the C++ core and the C API status codes.
enum class ErrorCode {
    invalid_argument,
    nonpositive_field,
    unsorted_input,
    empty_bucket,
    degenerate_series,
    zero_total_volume,
    unknown_security,
    mismatched_length,
    empty_list,
    zero_weight_sum,
    weight_sum,
    domain,
    infeasible_targets,
    io,
    parse,
    internal,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace mbv
