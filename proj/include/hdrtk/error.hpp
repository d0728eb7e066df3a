#pragma once

#include <stdexcept>
#include <string>

namespace hdrtk {

enum class ErrorCode {
    InvalidArgument,
    DimensionMismatch,
    // file formats
    MalformedHeader,
    UnsupportedOrientation,
    TruncatedData,
    CorruptData,
    UnsupportedFormat,
    GrayscalePfm,
    UnsupportedMaxval,
    NonFiniteValue,
    Io,
    // numeric
    Uncalibratable,
    AllZeroImage,
    UnreachableTarget,
    DegenerateAnchor,
};

/// Coarse grouping used by the CLI to pick an exit code.
enum class ErrorCategory { Usage, Io, Numeric };

const char* to_string(ErrorCode code) noexcept;
ErrorCategory category_of(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }
    ErrorCategory category() const noexcept { return category_of(code_); }

private:
    ErrorCode code_;
};

}  // namespace hdrtk
