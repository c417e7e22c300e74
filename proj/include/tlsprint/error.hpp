#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tlsprint {

enum class ErrorCode {
  // pcap-ingest
  unknown_magic,
  truncated_header,
  truncated_packet,
  unsupported_link_type,
  invalid_record_header,
  // tls-record-parser
  invalid_content_type,
  oversize_record,
  trailing_partial_record,
  not_client_hello,
  not_server_hello,
  malformed_handshake,
  // vectors and metrics
  empty_selection,
  invalid_vector,
  vector_too_short,
  bad_target_length,
  dimension_mismatch,
  zero_vector,
  // fingerprint-db
  insufficient_data,
  empty_database,
  io_failure,
  malformed_record,
  // trace-synth
  invalid_profile,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

// A non-fatal failure reported next to partial results.
struct Issue {
  ErrorCode code;
  std::string message;

  bool operator==(const Issue&) const = default;
};

}  // namespace tlsprint
