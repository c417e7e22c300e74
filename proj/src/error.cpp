#include "tlsprint/error.hpp"

namespace tlsprint {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::unknown_magic: return "UnknownMagic";
    case ErrorCode::truncated_header: return "TruncatedHeader";
    case ErrorCode::truncated_packet: return "TruncatedPacket";
    case ErrorCode::unsupported_link_type: return "UnsupportedLinkType";
    case ErrorCode::invalid_record_header: return "InvalidRecordHeader";
    case ErrorCode::invalid_content_type: return "InvalidContentType";
    case ErrorCode::oversize_record: return "OversizeRecord";
    case ErrorCode::trailing_partial_record: return "TrailingPartialRecord";
    case ErrorCode::not_client_hello: return "NotClientHello";
    case ErrorCode::not_server_hello: return "NotServerHello";
    case ErrorCode::malformed_handshake: return "MalformedHandshake";
    case ErrorCode::empty_selection: return "EmptySelection";
    case ErrorCode::invalid_vector: return "InvalidVector";
    case ErrorCode::vector_too_short: return "VectorTooShort";
    case ErrorCode::bad_target_length: return "BadTargetLength";
    case ErrorCode::dimension_mismatch: return "DimensionMismatch";
    case ErrorCode::zero_vector: return "ZeroVector";
    case ErrorCode::insufficient_data: return "InsufficientData";
    case ErrorCode::empty_database: return "EmptyDatabase";
    case ErrorCode::io_failure: return "IoFailure";
    case ErrorCode::malformed_record: return "MalformedRecord";
    case ErrorCode::invalid_profile: return "InvalidProfile";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

}  // namespace tlsprint
