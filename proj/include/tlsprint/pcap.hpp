#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "tlsprint/bytes.hpp"
#include "tlsprint/error.hpp"

namespace tlsprint {

enum class LinkType : std::uint32_t {
  ethernet = 1,
};

/// One captured packet record.
///
/// `wire_len` is the original on-wire frame length. It is the per-message
/// length used by frame-mode fingerprints. `payload` holds the `cap_len`
/// captured bytes, starting at the Ethernet header.
struct CaptureFrame {
  std::int64_t ts_micros = 0;
  std::uint32_t wire_len = 0;
  std::uint32_t cap_len = 0;
  LinkType link_type = LinkType::ethernet;
  Bytes payload;

  bool operator==(const CaptureFrame&) const = default;
};

namespace pcap {

inline constexpr std::uint32_t magic_micros = 0xa1b2c3d4;
inline constexpr std::uint32_t magic_micros_swapped = 0xd4c3b2a1;
inline constexpr std::uint32_t magic_nanos = 0xa1b23c4d;
inline constexpr std::uint32_t magic_nanos_swapped = 0x4d3cb2a1;
inline constexpr std::uint32_t magic_pcapng = 0x0a0d0d0a;

inline constexpr std::size_t global_header_size = 24;
inline constexpr std::size_t record_header_size = 16;

}  // namespace pcap

/// Frames decoded from a capture, plus the reason decoding stopped early.
///
/// When `issue` is set, `frames` still holds every record that was read
/// completely before the failure.
struct PcapParseResult {
  std::vector<CaptureFrame> frames;
  std::optional<Issue> issue;

  bool ok() const noexcept { return !issue.has_value(); }
};

/// Decodes a classic libpcap file held in memory.
///
/// Accepts microsecond and nanosecond magics in either byte order; nanosecond
/// timestamps are truncated to microseconds. pcapng and non-Ethernet link
/// types are reported as issues.
PcapParseResult parse_pcap(ByteView data);

/// Reads a file and decodes it with parse_pcap. Throws Error(io_failure).
PcapParseResult read_pcap_file(const std::filesystem::path& path);

Bytes read_file_bytes(const std::filesystem::path& path);

}  // namespace tlsprint
