#include "copytrace/error.hpp"

namespace copytrace {

std::string_view error_code_name(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::EmptyDocument: return "empty_document";
    case ErrorCode::EmptyPattern: return "empty_pattern";
    case ErrorCode::EmptyNormalizedSentence: return "empty_normalized_sentence";
    case ErrorCode::InvalidEncoding: return "invalid_encoding";
    case ErrorCode::UnknownDocument: return "unknown_document";
    case ErrorCode::StorageFailure: return "storage_failure";
    case ErrorCode::ZeroTotal: return "zero_total";
    case ErrorCode::OutOfRange: return "out_of_range";
    case ErrorCode::InvalidArgument: return "invalid_argument";
    }
    return "unknown_error";
}

}  // namespace copytrace
