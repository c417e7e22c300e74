#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tlsprint/bytes.hpp"
#include "tlsprint/error.hpp"
#include "tlsprint/flow.hpp"
#include "tlsprint/length_vector.hpp"

namespace tlsprint {

enum class ContentType : std::uint8_t {
  change_cipher_spec = 20,
  alert = 21,
  handshake = 22,
  application_data = 23,
};

std::string_view to_string(ContentType type) noexcept;

namespace tls {
inline constexpr std::size_t record_header_size = 5;
inline constexpr std::size_t max_record_payload = (1u << 14) + 256;
inline constexpr std::uint8_t handshake_client_hello = 0x01;
inline constexpr std::uint8_t handshake_server_hello = 0x02;
inline constexpr std::uint16_t ext_server_name = 0x0000;
inline constexpr std::uint16_t ext_alpn = 0x0010;
inline constexpr std::uint16_t ext_supported_versions = 0x002b;
}  // namespace tls

/// Set of record content types, used to pick what goes into a record vector.
class ContentTypeSet {
public:
  constexpr ContentTypeSet() = default;
  constexpr ContentTypeSet(std::initializer_list<ContentType> types) {
    for (ContentType t : types) insert(t);
  }

  static constexpr ContentTypeSet all() {
    return {ContentType::change_cipher_spec, ContentType::alert, ContentType::handshake,
            ContentType::application_data};
  }
  static constexpr ContentTypeSet defaults() {
    return {ContentType::handshake, ContentType::application_data};
  }

  constexpr void insert(ContentType t) { bits_ |= bit(t); }
  constexpr bool contains(ContentType t) const { return (bits_ & bit(t)) != 0; }
  constexpr bool empty() const { return bits_ == 0; }

  /// Short names: hs, app, ccs, alert (comma separated), or all.
  static std::optional<ContentTypeSet> parse(std::string_view text);
  std::string to_string() const;

  constexpr bool operator==(const ContentTypeSet&) const = default;

private:
  static constexpr std::uint8_t bit(ContentType t) {
    return static_cast<std::uint8_t>(1u << (static_cast<unsigned>(t) - 20));
  }
  std::uint8_t bits_ = 0;
};

struct TlsRecord {
  ContentType content_type = ContentType::handshake;
  std::uint16_t legacy_version = 0x0303;
  Bytes payload;

  std::size_t length() const noexcept { return payload.size(); }
  std::size_t wire_size() const noexcept { return tls::record_header_size + payload.size(); }

  bool operator==(const TlsRecord&) const = default;
};

struct RecordParseResult {
  std::vector<TlsRecord> records;
  std::vector<std::size_t> offsets;  // stream offset of each record header
  std::size_t consumed = 0;          // bytes covered by complete records
  std::size_t trailing_bytes = 0;    // partial record left at the end
  std::optional<Issue> issue;

  bool ok() const noexcept { return !issue.has_value(); }
};

/// Parses back-to-back TLS records from a byte stream that starts on a
/// record boundary. Stops at the first desynchronised or oversize header;
/// everything parsed until then is kept.
RecordParseResult parse_records(ByteView stream);

struct ClientHelloSummary {
  std::uint16_t legacy_version = 0;
  std::vector<std::uint16_t> cipher_suites;
  std::vector<std::uint16_t> extensions;
  std::optional<std::string> sni;
  std::optional<std::vector<std::string>> alpn;
  std::vector<std::uint16_t> supported_versions;

  bool operator==(const ClientHelloSummary&) const = default;
};

/// Reads the cleartext ClientHello carried by a handshake record. Throws
/// Error(not_client_hello) or Error(malformed_handshake).
ClientHelloSummary parse_client_hello(const TlsRecord& record);

struct ServerHelloSummary {
  std::uint16_t legacy_version = 0;
  std::uint16_t cipher_suite = 0;
  std::optional<std::uint16_t> selected_version;
};

ServerHelloSummary parse_server_hello(const TlsRecord& record);

/// Sizes (header included) of the records whose type is in `include`.
/// Throws Error(empty_selection) when none match.
LengthVector record_length_vector(const std::vector<TlsRecord>& records,
                                  ContentTypeSet include = ContentTypeSet::defaults());

/// "1301,1302;0000,0010": lowercase 4-digit hex suites, ';', extensions.
std::string suite_list_fingerprint(const ClientHelloSummary& hello);

struct ReassembledStream {
  Bytes bytes;
  // One entry per contributing segment: stream offset of its first new byte
  // and its index in Flow::frames.
  std::vector<std::size_t> segment_starts;
  std::vector<std::size_t> segment_frames;
  std::size_t bytes_recovered = 0;
  std::size_t duplicate_segments = 0;
  bool gap_detected = false;

  /// Index into flow.frames of the segment that supplied stream byte `offset`.
  std::size_t frame_at(std::size_t offset) const;
};

/// Orders one direction's TCP payload by sequence number. Duplicates are
/// dropped (and counted); the stream ends at the first sequence gap.
ReassembledStream reassemble_direction(const Flow& flow, Direction direction);

/// Records of both directions of a flow, interleaved by the capture position
/// of the frame that carried each record's first byte.
struct FlowRecords {
  struct Entry {
    TlsRecord record;
    bool from_client = false;
    std::size_t first_frame = 0;
  };
  std::vector<Entry> records;
  std::optional<ClientHelloSummary> client_hello;
  std::optional<ServerHelloSummary> server_hello;
  std::vector<Issue> issues;
  bool gap_detected = false;
};

FlowRecords flow_records(const Flow& flow);

/// Record vector for a flow honouring a direction filter.
LengthVector flow_record_length_vector(const FlowRecords& records, ContentTypeSet include,
                                       DirectionMode direction = DirectionMode::both);

}  // namespace tlsprint
