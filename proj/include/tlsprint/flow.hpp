#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tlsprint/length_vector.hpp"
#include "tlsprint/pcap.hpp"

namespace tlsprint {

struct IpAddress {
  std::uint8_t version = 4;  // 4 or 6
  std::array<std::uint8_t, 16> octets{};  // IPv4 uses the first four

  static IpAddress v4(std::uint8_t a, std::uint8_t b, std::uint8_t c, std::uint8_t d);
  std::string to_string() const;

  auto operator<=>(const IpAddress&) const = default;
};

struct Endpoint {
  IpAddress ip;
  std::uint16_t port = 0;

  std::string to_string() const;

  auto operator<=>(const Endpoint&) const = default;
};

/// Canonical bidirectional TCP connection key: endpoint_a <= endpoint_b.
struct FlowKey {
  Endpoint endpoint_a;
  Endpoint endpoint_b;

  static FlowKey canonical(const Endpoint& x, const Endpoint& y);
  std::string to_string() const;

  auto operator<=>(const FlowKey&) const = default;
};

enum class Direction { a_to_b, b_to_a };

constexpr Direction opposite(Direction d) noexcept {
  return d == Direction::a_to_b ? Direction::b_to_a : Direction::a_to_b;
}

namespace tcp_flags {
inline constexpr std::uint8_t fin = 0x01;
inline constexpr std::uint8_t syn = 0x02;
inline constexpr std::uint8_t rst = 0x04;
inline constexpr std::uint8_t psh = 0x08;
inline constexpr std::uint8_t ack = 0x10;
}  // namespace tcp_flags

/// TCP/IP fields decoded from an Ethernet frame.
struct TcpSegment {
  Endpoint source;
  Endpoint destination;
  std::uint32_t seq = 0;
  std::uint32_t ack = 0;
  std::uint8_t flags = 0;
  std::size_t payload_offset = 0;  // into CaptureFrame::payload
  std::size_t payload_len = 0;     // captured payload bytes
  std::size_t claimed_len = 0;     // payload length stated by the IP header

  bool has(std::uint8_t flag) const noexcept { return (flags & flag) != 0; }
};

enum class DecodeStatus { tcp, non_ip, non_tcp, malformed };

struct DecodeResult {
  DecodeStatus status = DecodeStatus::malformed;
  TcpSegment segment;
};

/// Decodes Ethernet + IPv4/IPv6 (fixed header) + TCP. IP fragments are
/// reported as non_tcp since they cannot be attributed without reassembly.
DecodeResult decode_tcp(const CaptureFrame& frame);

struct FlowFrame {
  Direction direction = Direction::a_to_b;
  CaptureFrame frame;
  TcpSegment tcp;
};

struct Flow {
  FlowKey key;
  std::vector<FlowFrame> frames;  // capture order
  Direction client_direction = Direction::a_to_b;

  const Endpoint& client() const;
  const Endpoint& server() const;
};

struct SkipTally {
  std::size_t non_ip = 0;
  std::size_t non_tcp = 0;
  std::size_t malformed = 0;
  std::size_t port_filtered = 0;

  std::size_t total() const noexcept { return non_ip + non_tcp + malformed + port_filtered; }
};

struct FlowTable {
  std::map<FlowKey, Flow> flows;
  SkipTally skipped;
};

inline constexpr std::uint16_t default_https_port = 443;

/// Groups TCP frames into bidirectional flows. With a port filter, only
/// flows with an endpoint on that port are kept.
///
/// The client of each flow is the sender of the first bare SYN; failing that,
/// the endpoint not on the filter port; failing that, the first sender.
FlowTable group_flows(const std::vector<CaptureFrame>& frames,
                      std::optional<std::uint16_t> port_filter = default_https_port);

enum class DirectionMode { both, client_only, server_only };

std::string_view to_string(DirectionMode mode) noexcept;
std::optional<DirectionMode> parse_direction_mode(std::string_view text) noexcept;

struct FrameSelection {
  DirectionMode direction = DirectionMode::both;
  bool tls_only = false;  // keep only frames that carry TCP payload
};

/// wire_len of every selected frame in flow order. Throws
/// Error(empty_selection) when nothing is selected.
LengthVector frame_length_vector(const Flow& flow, FrameSelection selection = {});

/// Concatenates flows sharing a server endpoint, ordered by first-frame
/// timestamp. Merged flows keep the key of their earliest constituent and
/// directions are rewritten so the client side stays consistent.
std::vector<Flow> merge_flows_by_server(const std::map<FlowKey, Flow>& flows);

}  // namespace tlsprint
