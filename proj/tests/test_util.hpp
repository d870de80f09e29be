#pragma once

#include <functional>
#include <optional>

#include "core/errors.hpp"

namespace testutil {

// Runs fn and reports the mbv error code it throws, if any.
inline std::optional<mbv::ErrorCode> error_code_of(
    const std::function<void()>& fn) {
    try {
        fn();
    } catch (const mbv::Error& e) {
        return e.code();
    }
    return std::nullopt;
}

}  // namespace testutil

#define CHECK_MBV_ERROR(code, ...)                                   \
    CHECK(testutil::error_code_of([&] { __VA_ARGS__; }) ==           \
          std::optional<mbv::ErrorCode>(code))
