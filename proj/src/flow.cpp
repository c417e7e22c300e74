#include "tlsprint/flow.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "tlsprint/error.hpp"

namespace tlsprint {

namespace {

constexpr std::size_t ethernet_header = 14;
constexpr std::uint16_t ethertype_ipv4 = 0x0800;
constexpr std::uint16_t ethertype_ipv6 = 0x86dd;
constexpr std::uint8_t protocol_tcp = 6;
constexpr std::size_t ipv6_header = 40;
constexpr std::size_t tcp_min_header = 20;

bool fill_tcp(ByteView p, std::size_t tcp_at, std::size_t ip_payload_end, DecodeResult& out) {
  if (ip_payload_end < tcp_at + tcp_min_header || p.size() < tcp_at + tcp_min_header) {
    return false;
  }
  TcpSegment& seg = out.segment;
  seg.source.port = bytes::load_be16(p, tcp_at);
  seg.destination.port = bytes::load_be16(p, tcp_at + 2);
  seg.seq = bytes::load_be32(p, tcp_at + 4);
  seg.ack = bytes::load_be32(p, tcp_at + 8);
  const std::size_t data_offset = static_cast<std::size_t>(p[tcp_at + 12] >> 4) * 4;
  seg.flags = p[tcp_at + 13];
  if (data_offset < tcp_min_header || tcp_at + data_offset > ip_payload_end) {
    return false;
  }
  seg.payload_offset = tcp_at + data_offset;
  seg.claimed_len = ip_payload_end - seg.payload_offset;
  const std::size_t captured_end = std::min(ip_payload_end, p.size());
  seg.payload_len = captured_end > seg.payload_offset ? captured_end - seg.payload_offset : 0;
  out.status = DecodeStatus::tcp;
  return true;
}

}  // namespace

IpAddress IpAddress::v4(std::uint8_t a, std::uint8_t b, std::uint8_t c, std::uint8_t d) {
  IpAddress ip;
  ip.version = 4;
  ip.octets[0] = a;
  ip.octets[1] = b;
  ip.octets[2] = c;
  ip.octets[3] = d;
  return ip;
}

std::string IpAddress::to_string() const {
  if (version == 4) {
    return std::to_string(octets[0]) + "." + std::to_string(octets[1]) + "." +
           std::to_string(octets[2]) + "." + std::to_string(octets[3]);
  }
  std::string out;
  char buf[8];
  for (std::size_t i = 0; i < 16; i += 2) {
    std::snprintf(buf, sizeof buf, "%x", (octets[i] << 8) | octets[i + 1]);
    if (i != 0) out += ':';
    out += buf;
  }
  return out;
}

std::string Endpoint::to_string() const {
  return ip.version == 6 ? "[" + ip.to_string() + "]:" + std::to_string(port)
                         : ip.to_string() + ":" + std::to_string(port);
}

FlowKey FlowKey::canonical(const Endpoint& x, const Endpoint& y) {
  return x <= y ? FlowKey{x, y} : FlowKey{y, x};
}

std::string FlowKey::to_string() const {
  return endpoint_a.to_string() + " <-> " + endpoint_b.to_string();
}

const Endpoint& Flow::client() const {
  return client_direction == Direction::a_to_b ? key.endpoint_a : key.endpoint_b;
}

const Endpoint& Flow::server() const {
  return client_direction == Direction::a_to_b ? key.endpoint_b : key.endpoint_a;
}

DecodeResult decode_tcp(const CaptureFrame& frame) {
  DecodeResult out;
  const ByteView p = frame.payload;
  if (p.size() < ethernet_header) {
    out.status = DecodeStatus::malformed;
    return out;
  }
  const std::uint16_t ethertype = bytes::load_be16(p, 12);
  const std::size_t ip_at = ethernet_header;

  if (ethertype == ethertype_ipv4) {
    if (p.size() < ip_at + 20 || (p[ip_at] >> 4) != 4) {
      out.status = DecodeStatus::malformed;
      return out;
    }
    const std::size_t ihl = static_cast<std::size_t>(p[ip_at] & 0x0f) * 4;
    const std::size_t total_len = bytes::load_be16(p, ip_at + 2);
    if (ihl < 20 || total_len < ihl || p.size() < ip_at + ihl) {
      out.status = DecodeStatus::malformed;
      return out;
    }
    const std::uint16_t frag = bytes::load_be16(p, ip_at + 6);
    if (p[ip_at + 9] != protocol_tcp || (frag & 0x3fff) != 0) {
      out.status = DecodeStatus::non_tcp;
      return out;
    }
    out.segment.source.ip = IpAddress::v4(p[ip_at + 12], p[ip_at + 13], p[ip_at + 14], p[ip_at + 15]);
    out.segment.destination.ip =
        IpAddress::v4(p[ip_at + 16], p[ip_at + 17], p[ip_at + 18], p[ip_at + 19]);
    if (!fill_tcp(p, ip_at + ihl, ip_at + total_len, out)) {
      out.status = DecodeStatus::malformed;
    }
    return out;
  }

  if (ethertype == ethertype_ipv6) {
    if (p.size() < ip_at + ipv6_header || (p[ip_at] >> 4) != 6) {
      out.status = DecodeStatus::malformed;
      return out;
    }
    if (p[ip_at + 6] != protocol_tcp) {
      out.status = DecodeStatus::non_tcp;
      return out;
    }
    const std::size_t payload_len = bytes::load_be16(p, ip_at + 4);
    out.segment.source.ip.version = 6;
    out.segment.destination.ip.version = 6;
    std::copy_n(p.begin() + ip_at + 8, 16, out.segment.source.ip.octets.begin());
    std::copy_n(p.begin() + ip_at + 24, 16, out.segment.destination.ip.octets.begin());
    if (!fill_tcp(p, ip_at + ipv6_header, ip_at + ipv6_header + payload_len, out)) {
      out.status = DecodeStatus::malformed;
    }
    return out;
  }

  out.status = DecodeStatus::non_ip;
  return out;
}

FlowTable group_flows(const std::vector<CaptureFrame>& frames,
                      std::optional<std::uint16_t> port_filter) {
  FlowTable table;
  for (const CaptureFrame& frame : frames) {
    DecodeResult decoded = decode_tcp(frame);
    switch (decoded.status) {
      case DecodeStatus::non_ip: ++table.skipped.non_ip; continue;
      case DecodeStatus::non_tcp: ++table.skipped.non_tcp; continue;
      case DecodeStatus::malformed: ++table.skipped.malformed; continue;
      case DecodeStatus::tcp: break;
    }
    const TcpSegment& seg = decoded.segment;
    if (port_filter && seg.source.port != *port_filter && seg.destination.port != *port_filter) {
      ++table.skipped.port_filtered;
      continue;
    }
    const FlowKey key = FlowKey::canonical(seg.source, seg.destination);
    const Direction dir = seg.source == key.endpoint_a ? Direction::a_to_b : Direction::b_to_a;
    Flow& flow = table.flows[key];
    flow.key = key;
    flow.frames.push_back(FlowFrame{dir, frame, seg});
  }

  for (auto& [key, flow] : table.flows) {
    const auto syn = std::find_if(flow.frames.begin(), flow.frames.end(), [](const FlowFrame& f) {
      return f.tcp.has(tcp_flags::syn) && !f.tcp.has(tcp_flags::ack);
    });
    if (syn != flow.frames.end()) {
      flow.client_direction = syn->direction;
    } else if (port_filter && key.endpoint_b.port == *port_filter &&
               key.endpoint_a.port != *port_filter) {
      flow.client_direction = Direction::a_to_b;
    } else if (port_filter && key.endpoint_a.port == *port_filter &&
               key.endpoint_b.port != *port_filter) {
      flow.client_direction = Direction::b_to_a;
    } else {
      flow.client_direction = flow.frames.front().direction;
    }
  }
  return table;
}

std::string_view to_string(DirectionMode mode) noexcept {
  switch (mode) {
    case DirectionMode::both: return "both";
    case DirectionMode::client_only: return "client";
    case DirectionMode::server_only: return "server";
  }
  return "both";
}

std::optional<DirectionMode> parse_direction_mode(std::string_view text) noexcept {
  if (text == "both") return DirectionMode::both;
  if (text == "client" || text == "client_only") return DirectionMode::client_only;
  if (text == "server" || text == "server_only") return DirectionMode::server_only;
  return std::nullopt;
}

LengthVector frame_length_vector(const Flow& flow, FrameSelection selection) {
  std::vector<LengthVector::value_type> lengths;
  lengths.reserve(flow.frames.size());
  for (const FlowFrame& f : flow.frames) {
    const bool from_client = f.direction == flow.client_direction;
    if (selection.direction == DirectionMode::client_only && !from_client) continue;
    if (selection.direction == DirectionMode::server_only && from_client) continue;
    if (selection.tls_only && f.tcp.claimed_len == 0) continue;
    lengths.push_back(f.frame.wire_len);
  }
  if (lengths.empty()) {
    throw Error(ErrorCode::empty_selection,
                "no frames selected in flow " + flow.key.to_string() + " (direction " +
                    std::string(to_string(selection.direction)) + ")");
  }
  return LengthVector(std::move(lengths));
}

std::vector<Flow> merge_flows_by_server(const std::map<FlowKey, Flow>& flows) {
  std::vector<const Flow*> ordered;
  ordered.reserve(flows.size());
  for (const auto& [key, flow] : flows) {
    if (!flow.frames.empty()) ordered.push_back(&flow);
  }
  std::stable_sort(ordered.begin(), ordered.end(), [](const Flow* x, const Flow* y) {
    return x->frames.front().frame.ts_micros < y->frames.front().frame.ts_micros;
  });

  std::vector<Flow> merged;
  std::map<Endpoint, std::size_t> by_server;
  for (const Flow* flow : ordered) {
    auto [it, inserted] = by_server.try_emplace(flow->server(), merged.size());
    if (inserted) {
      merged.push_back(*flow);
      continue;
    }
    Flow& target = merged[it->second];
    for (const FlowFrame& f : flow->frames) {
      FlowFrame copy = f;
      const bool from_client = f.direction == flow->client_direction;
      copy.direction = from_client ? target.client_direction : opposite(target.client_direction);
      target.frames.push_back(std::move(copy));
    }
  }
  return merged;
}

}  // namespace tlsprint
