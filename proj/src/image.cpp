#include "hdrtk/image.hpp"

#include <cmath>

namespace hdrtk {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "invalid_argument";
        case ErrorCode::DimensionMismatch: return "dimension_mismatch";
        case ErrorCode::MalformedHeader: return "malformed_header";
        case ErrorCode::UnsupportedOrientation: return "unsupported_orientation";
        case ErrorCode::TruncatedData: return "truncated_data";
        case ErrorCode::CorruptData: return "corrupt_data";
        case ErrorCode::UnsupportedFormat: return "unsupported_format";
        case ErrorCode::GrayscalePfm: return "grayscale_pfm";
        case ErrorCode::UnsupportedMaxval: return "unsupported_maxval";
        case ErrorCode::NonFiniteValue: return "non_finite_value";
        case ErrorCode::Io: return "io";
        case ErrorCode::Uncalibratable: return "uncalibratable";
        case ErrorCode::AllZeroImage: return "all_zero_image";
        case ErrorCode::UnreachableTarget: return "unreachable_target";
        case ErrorCode::DegenerateAnchor: return "degenerate_anchor";
    }
    return "unknown";
}

ErrorCategory category_of(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument:
        case ErrorCode::DimensionMismatch:
            return ErrorCategory::Usage;
        case ErrorCode::MalformedHeader:
        case ErrorCode::UnsupportedOrientation:
        case ErrorCode::TruncatedData:
        case ErrorCode::CorruptData:
        case ErrorCode::UnsupportedFormat:
        case ErrorCode::GrayscalePfm:
        case ErrorCode::UnsupportedMaxval:
        case ErrorCode::Io:
            return ErrorCategory::Io;
        case ErrorCode::NonFiniteValue:
        case ErrorCode::Uncalibratable:
        case ErrorCode::AllZeroImage:
        case ErrorCode::UnreachableTarget:
        case ErrorCode::DegenerateAnchor:
            return ErrorCategory::Numeric;
    }
    return ErrorCategory::Usage;
}

void validate_hdr(const HdrImage& img) {
    for (double v : img.data()) {
        if (!std::isfinite(v)) {
            throw Error(ErrorCode::NonFiniteValue, "HDR image contains a non-finite value");
        }
        if (v < 0.0) {
            throw Error(ErrorCode::InvalidArgument, "HDR image contains a negative value");
        }
    }
}

}  // namespace hdrtk
