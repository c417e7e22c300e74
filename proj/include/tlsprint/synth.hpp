#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tlsprint/bytes.hpp"
#include "tlsprint/flow.hpp"
#include "tlsprint/length_vector.hpp"
#include "tlsprint/pcap.hpp"
#include "tlsprint/tls.hpp"

namespace tlsprint::synth {

enum class Side { client, server };

struct PlannedRecord {
  ContentType type = ContentType::application_data;
  std::size_t payload_len = 0;
  Side sender = Side::server;

  bool operator==(const PlannedRecord&) const = default;
};

/// Scripted browser behaviour for one TLS session.
///
/// The ClientHello is always the first client record and is built from
/// `cipher_suites` and `extension_codes`; `record_plan` follows it. Each
/// record is cut into frames of at most `segmentation` payload bytes.
/// `duplicate_segments` and `swap_segments` name data-frame ordinals in
/// original emission order; a swap exchanges ordinal i with i+1, which must
/// share a sender.
struct BrowserProfile {
  std::string name;
  std::vector<std::uint16_t> cipher_suites;
  std::vector<std::uint16_t> extension_codes;
  std::optional<std::string> sni;
  std::vector<std::string> alpn;
  std::vector<PlannedRecord> record_plan;
  std::size_t segmentation = 1460;
  std::size_t ack_every = 0;  // pure ACK from the peer after every k data frames; 0 disables
  bool tcp_handshake = true;
  std::uint16_t server_port = 443;
  std::vector<std::size_t> duplicate_segments;
  std::vector<std::size_t> swap_segments;

  bool operator==(const BrowserProfile&) const = default;
};

inline constexpr std::size_t ethernet_header = 14;
inline constexpr std::size_t ipv4_header = 20;
inline constexpr std::size_t tcp_header = 20;
inline constexpr std::size_t frame_overhead = ethernet_header + ipv4_header + tcp_header;
inline constexpr std::size_t max_segmentation = 65535 - ipv4_header - tcp_header;

struct ExpectedRecord {
  ContentType type;
  std::size_t wire_size;  // header + payload
  Side sender;
};

/// Ground truth for a synthesized session, derived from the profile alone.
struct SynthPlan {
  BrowserProfile profile;
  std::uint64_t seed = 0;
  std::vector<std::uint32_t> expected_frame_lengths;
  std::vector<Side> frame_senders;  // parallel to expected_frame_lengths
  std::vector<std::uint32_t> expected_record_lengths;  // default include set
  std::vector<ExpectedRecord> expected_records;         // every record, session order
  Bytes client_hello_bytes;  // handshake message carried by the first record

  std::vector<std::uint32_t> frame_lengths_from(Side side) const;
  std::vector<std::uint32_t> record_lengths(ContentTypeSet include) const;
};

struct SynthSession {
  Bytes pcap;
  std::vector<CaptureFrame> frames;
  SynthPlan plan;
};

/// Throws Error(invalid_profile) describing the first problem found.
void validate(const BrowserProfile& profile);

/// ClientHello record size (header included) from the wire layout alone.
std::size_t client_hello_record_size(const BrowserProfile& profile);

/// Handshake message bytes of the profile's ClientHello.
Bytes build_client_hello(const BrowserProfile& profile, std::uint64_t seed);

/// Deterministic Ethernet/IPv4/TCP session to `server_port` carrying the
/// profile's records. Frames are stamped 1 ms apart.
SynthSession synth_session(const BrowserProfile& profile, std::uint64_t seed);

/// Classic little-endian microsecond pcap.
Bytes serialize_pcap(const std::vector<CaptureFrame>& frames);

struct TcpFrameSpec {
  Endpoint source;
  Endpoint destination;
  std::uint32_t seq = 0;
  std::uint32_t ack = 0;
  std::uint8_t flags = tcp_flags::ack;
  Bytes payload;
  std::int64_t ts_micros = 0;
  std::uint16_t ip_id = 0;
};

/// One IPv4 TCP frame with valid checksums, wire_len == cap_len.
CaptureFrame build_tcp_frame(const TcpFrameSpec& spec);

/// Merges captures round-robin and restamps timestamps 1 ms apart.
std::vector<CaptureFrame> interleave(const std::vector<std::vector<CaptureFrame>>& captures);

/// Profile JSON mirrors the BrowserProfile fields; suite and extension
/// codes may be integers or hex strings. Throws Error(invalid_profile).
BrowserProfile profile_from_json(const nlohmann::json& j);
nlohmann::json profile_to_json(const BrowserProfile& profile);
nlohmann::json plan_to_json(const SynthPlan& plan);

}  // namespace tlsprint::synth
