#include "tlsprint/pcap.hpp"

#include <fstream>
#include <iterator>
#include <sstream>

namespace tlsprint {

namespace {

struct Header {
  bool big_endian = false;
  bool nanos = false;
};

std::uint32_t load32(ByteView b, std::size_t at, bool big_endian) {
  return big_endian ? bytes::load_be32(b, at) : bytes::load_le32(b, at);
}

std::string hex32(std::uint32_t v) {
  std::ostringstream os;
  os << "0x" << std::hex << v;
  return os.str();
}

}  // namespace

PcapParseResult parse_pcap(ByteView data) {
  PcapParseResult result;
  if (data.size() < 4) {
    result.issue = Issue{ErrorCode::truncated_header, "file shorter than pcap magic"};
    return result;
  }

  Header header;
  const std::uint32_t magic = bytes::load_le32(data, 0);
  switch (magic) {
    case pcap::magic_micros: break;
    case pcap::magic_micros_swapped: header.big_endian = true; break;
    case pcap::magic_nanos: header.nanos = true; break;
    case pcap::magic_nanos_swapped:
      header.nanos = true;
      header.big_endian = true;
      break;
    case pcap::magic_pcapng:
      result.issue = Issue{ErrorCode::unknown_magic,
                           "pcapng format is not supported; convert to classic pcap"};
      return result;
    default:
      result.issue = Issue{ErrorCode::unknown_magic, "not a pcap file (magic " + hex32(magic) + ")"};
      return result;
  }

  if (data.size() < pcap::global_header_size) {
    result.issue = Issue{ErrorCode::truncated_header, "pcap global header is incomplete"};
    return result;
  }

  const std::uint32_t network = load32(data, 20, header.big_endian);
  if (network != static_cast<std::uint32_t>(LinkType::ethernet)) {
    result.issue = Issue{ErrorCode::unsupported_link_type,
                         "link type " + std::to_string(network) + " (only Ethernet is supported)"};
    return result;
  }

  std::size_t pos = pcap::global_header_size;
  std::size_t index = 0;
  while (pos < data.size()) {
    if (data.size() - pos < pcap::record_header_size) {
      result.issue = Issue{ErrorCode::truncated_header,
                           "record header " + std::to_string(index) + " is incomplete"};
      return result;
    }
    const std::uint32_t ts_sec = load32(data, pos, header.big_endian);
    const std::uint32_t ts_frac = load32(data, pos + 4, header.big_endian);
    const std::uint32_t incl_len = load32(data, pos + 8, header.big_endian);
    const std::uint32_t orig_len = load32(data, pos + 12, header.big_endian);
    pos += pcap::record_header_size;

    if (orig_len == 0 || incl_len > orig_len) {
      result.issue = Issue{ErrorCode::invalid_record_header,
                           "record " + std::to_string(index) + " has captured length " +
                               std::to_string(incl_len) + " and wire length " +
                               std::to_string(orig_len)};
      return result;
    }
    if (data.size() - pos < incl_len) {
      result.issue = Issue{ErrorCode::truncated_packet,
                           "record " + std::to_string(index) + " needs " + std::to_string(incl_len) +
                               " bytes, " + std::to_string(data.size() - pos) + " remain"};
      return result;
    }

    CaptureFrame frame;
    const std::int64_t micros = header.nanos ? ts_frac / 1000 : ts_frac;
    frame.ts_micros = static_cast<std::int64_t>(ts_sec) * 1'000'000 + micros;
    frame.wire_len = orig_len;
    frame.cap_len = incl_len;
    frame.link_type = LinkType::ethernet;
    frame.payload.assign(data.begin() + static_cast<std::ptrdiff_t>(pos),
                         data.begin() + static_cast<std::ptrdiff_t>(pos + incl_len));
    result.frames.push_back(std::move(frame));
    pos += incl_len;
    ++index;
  }
  return result;
}

Bytes read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::io_failure, "cannot open " + path.string());
  }
  Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw Error(ErrorCode::io_failure, "read failed for " + path.string());
  }
  return data;
}

PcapParseResult read_pcap_file(const std::filesystem::path& path) {
  const Bytes data = read_file_bytes(path);
  return parse_pcap(data);
}

}  // namespace tlsprint
