#include "tlsprint/synth.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "tlsprint/error.hpp"

namespace tlsprint::synth {

using nlohmann::json;

namespace {

constexpr std::int64_t base_ts_micros = 1'700'000'000'000'000;
constexpr std::int64_t frame_interval_micros = 1'000;
constexpr std::size_t random_len = 32;
constexpr std::size_t session_id_len = 32;
constexpr std::uint16_t ext_padding = 0x0015;
constexpr std::uint16_t tls13 = 0x0304;
constexpr std::uint16_t tls12 = 0x0303;

// Smallest ServerHello we synthesize: header, version, random, session id,
// suite, compression, extensions block with supported_versions and padding.
constexpr std::size_t server_hello_min_payload = 4 + 2 + 32 + 1 + 32 + 2 + 1 + 2 + 6 + 4;

std::size_t extension_body_size(const BrowserProfile& p, std::uint16_t code) {
  switch (code) {
    case tls::ext_server_name: return p.sni ? 2 + 1 + 2 + p.sni->size() : 0;
    case tls::ext_alpn: {
      if (p.alpn.empty()) return 0;
      std::size_t n = 2;
      for (const auto& proto : p.alpn) n += 1 + proto.size();
      return n;
    }
    case tls::ext_supported_versions: return 1 + 4;
    default: return 0;
  }
}

void put_extension_body(Bytes& out, const BrowserProfile& p, std::uint16_t code) {
  switch (code) {
    case tls::ext_server_name:
      if (p.sni) {
        bytes::put_be16(out, static_cast<std::uint16_t>(1 + 2 + p.sni->size()));
        bytes::put_u8(out, 0);
        bytes::put_be16(out, static_cast<std::uint16_t>(p.sni->size()));
        out.insert(out.end(), p.sni->begin(), p.sni->end());
      }
      break;
    case tls::ext_alpn:
      if (!p.alpn.empty()) {
        std::size_t n = 0;
        for (const auto& proto : p.alpn) n += 1 + proto.size();
        bytes::put_be16(out, static_cast<std::uint16_t>(n));
        for (const auto& proto : p.alpn) {
          bytes::put_u8(out, static_cast<std::uint8_t>(proto.size()));
          out.insert(out.end(), proto.begin(), proto.end());
        }
      }
      break;
    case tls::ext_supported_versions:
      bytes::put_u8(out, 4);
      bytes::put_be16(out, tls13);
      bytes::put_be16(out, tls12);
      break;
    default: break;
  }
}

void fill_random(Bytes& out, std::size_t n, std::mt19937_64& rng) {
  for (std::size_t i = 0; i < n; ++i) out.push_back(static_cast<std::uint8_t>(rng() >> 56));
}

Bytes record_bytes(ContentType type, ByteView payload) {
  Bytes out;
  out.reserve(tls::record_header_size + payload.size());
  bytes::put_u8(out, static_cast<std::uint8_t>(type));
  bytes::put_be16(out, tls12);
  bytes::put_be16(out, static_cast<std::uint16_t>(payload.size()));
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

Bytes build_server_hello(std::size_t payload_len, std::uint16_t suite, std::mt19937_64& rng) {
  Bytes out;
  bytes::put_u8(out, tls::handshake_server_hello);
  bytes::put_be24(out, static_cast<std::uint32_t>(payload_len - 4));
  bytes::put_be16(out, tls12);
  fill_random(out, random_len, rng);
  bytes::put_u8(out, session_id_len);
  fill_random(out, session_id_len, rng);
  bytes::put_be16(out, suite);
  bytes::put_u8(out, 0);
  const std::size_t pad = payload_len - server_hello_min_payload;
  bytes::put_be16(out, static_cast<std::uint16_t>(6 + 4 + pad));
  bytes::put_be16(out, tls::ext_supported_versions);
  bytes::put_be16(out, 2);
  bytes::put_be16(out, tls13);
  bytes::put_be16(out, ext_padding);
  bytes::put_be16(out, static_cast<std::uint16_t>(pad));
  out.insert(out.end(), pad, 0);
  return out;
}

Bytes filler(const PlannedRecord& rec, std::mt19937_64& rng) {
  Bytes out;
  out.reserve(rec.payload_len);
  fill_random(out, rec.payload_len, rng);
  // Keep opaque handshake filler from looking like a Client/ServerHello.
  if (rec.type == ContentType::handshake && !out.empty()) {
    out[0] = rec.sender == Side::client ? 0x14 : 0x0b;
  }
  return out;
}

struct Event {
  Side sender;
  std::uint8_t flags;
  std::uint32_t seq;
  std::uint32_t ack;
  Bytes payload;
  std::optional<std::size_t> data_ordinal;
};

std::uint16_t ones_complement_sum(ByteView data, std::uint32_t sum = 0) {
  for (std::size_t i = 0; i + 1 < data.size(); i += 2) sum += bytes::load_be16(data, i);
  if (data.size() % 2 != 0) sum += static_cast<std::uint32_t>(data.back()) << 8;
  while (sum >> 16) sum = (sum & 0xffff) + (sum >> 16);
  return static_cast<std::uint16_t>(sum);
}

std::uint16_t parse_code(const json& v, const char* field) {
  if (v.is_number_unsigned()) {
    const auto n = v.get<std::uint64_t>();
    if (n <= 0xffff) return static_cast<std::uint16_t>(n);
  } else if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s.rfind("0x", 0) == 0 || s.rfind("0X", 0) == 0) s = s.substr(2);
    if (!s.empty() && s.size() <= 4 && s.find_first_not_of("0123456789abcdefABCDEF") == std::string::npos) {
      return static_cast<std::uint16_t>(std::stoul(s, nullptr, 16));
    }
  }
  throw Error(ErrorCode::invalid_profile, std::string(field) + " entries must be 16-bit codes");
}

std::optional<ContentType> parse_content_type(const json& v) {
  if (v.is_number_unsigned()) {
    const auto n = v.get<std::uint64_t>();
    if (n >= 20 && n <= 23) return static_cast<ContentType>(n);
    return std::nullopt;
  }
  if (!v.is_string()) return std::nullopt;
  const auto set = ContentTypeSet::parse(v.get<std::string>());
  if (!set) return std::nullopt;
  for (ContentType t : {ContentType::change_cipher_spec, ContentType::alert, ContentType::handshake,
                        ContentType::application_data}) {
    if (*set == ContentTypeSet{t}) return t;
  }
  return std::nullopt;
}

std::string hex4(std::uint16_t v) {
  static constexpr char digits[] = "0123456789abcdef";
  return {digits[v >> 12], digits[(v >> 8) & 0xf], digits[(v >> 4) & 0xf], digits[v & 0xf]};
}

const char* side_name(Side s) { return s == Side::client ? "client" : "server"; }

}  // namespace

std::vector<std::uint32_t> SynthPlan::frame_lengths_from(Side side) const {
  std::vector<std::uint32_t> out;
  for (std::size_t i = 0; i < expected_frame_lengths.size(); ++i) {
    if (frame_senders[i] == side) out.push_back(expected_frame_lengths[i]);
  }
  return out;
}

std::vector<std::uint32_t> SynthPlan::record_lengths(ContentTypeSet include) const {
  std::vector<std::uint32_t> out;
  for (const ExpectedRecord& r : expected_records) {
    if (include.contains(r.type)) out.push_back(static_cast<std::uint32_t>(r.wire_size));
  }
  return out;
}

std::size_t client_hello_record_size(const BrowserProfile& p) {
  std::size_t body = 2 + random_len + 1 + session_id_len + 2 + 2 * p.cipher_suites.size() + 1 + 1;
  if (!p.extension_codes.empty()) {
    body += 2;
    for (std::uint16_t code : p.extension_codes) body += 4 + extension_body_size(p, code);
  }
  return tls::record_header_size + 4 + body;
}

void validate(const BrowserProfile& p) {
  const auto fail = [](const std::string& why) { throw Error(ErrorCode::invalid_profile, why); };
  if (p.cipher_suites.empty()) fail("cipher_suites is empty");
  if (p.segmentation == 0 || p.segmentation > max_segmentation) {
    fail("segmentation must be in [1, " + std::to_string(max_segmentation) + "]");
  }
  if (client_hello_record_size(p) - tls::record_header_size > tls::max_record_payload) {
    fail("ClientHello exceeds the record size bound");
  }
  if (p.sni && p.sni->size() > 0xff00) fail("sni too long");
  for (const auto& proto : p.alpn) {
    if (proto.empty() || proto.size() > 255) fail("alpn protocol names must be 1..255 bytes");
  }
  std::vector<Side> data_senders;
  const auto chunks = [&](std::size_t record_size, Side sender) {
    for (std::size_t off = 0; off < record_size; off += p.segmentation) data_senders.push_back(sender);
  };
  chunks(client_hello_record_size(p), Side::client);
  for (std::size_t i = 0; i < p.record_plan.size(); ++i) {
    const PlannedRecord& r = p.record_plan[i];
    if (r.payload_len > tls::max_record_payload) {
      fail("record_plan[" + std::to_string(i) + "] payload exceeds " +
           std::to_string(tls::max_record_payload));
    }
    chunks(tls::record_header_size + r.payload_len, r.sender);
  }
  for (std::size_t d : p.duplicate_segments) {
    if (d >= data_senders.size()) fail("duplicate_segments index " + std::to_string(d) + " out of range");
  }
  for (std::size_t s : p.swap_segments) {
    if (s + 1 >= data_senders.size()) fail("swap_segments index " + std::to_string(s) + " out of range");
    if (data_senders[s] != data_senders[s + 1]) {
      fail("swap_segments index " + std::to_string(s) + " pairs frames from different senders");
    }
  }
}

Bytes build_client_hello(const BrowserProfile& p, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  Bytes out;
  bytes::put_u8(out, tls::handshake_client_hello);
  const std::size_t length_at = out.size();
  bytes::put_be24(out, 0);
  bytes::put_be16(out, tls12);
  fill_random(out, random_len, rng);
  bytes::put_u8(out, session_id_len);
  fill_random(out, session_id_len, rng);
  bytes::put_be16(out, static_cast<std::uint16_t>(2 * p.cipher_suites.size()));
  for (std::uint16_t suite : p.cipher_suites) bytes::put_be16(out, suite);
  bytes::put_u8(out, 1);
  bytes::put_u8(out, 0);
  if (!p.extension_codes.empty()) {
    const std::size_t ext_len_at = out.size();
    bytes::put_be16(out, 0);
    for (std::uint16_t code : p.extension_codes) {
      bytes::put_be16(out, code);
      bytes::put_be16(out, static_cast<std::uint16_t>(extension_body_size(p, code)));
      put_extension_body(out, p, code);
    }
    bytes::patch_be16(out, ext_len_at, static_cast<std::uint16_t>(out.size() - ext_len_at - 2));
  }
  bytes::patch_be24(out, length_at, static_cast<std::uint32_t>(out.size() - 4));
  return out;
}

CaptureFrame build_tcp_frame(const TcpFrameSpec& spec) {
  Bytes f;
  f.reserve(frame_overhead + spec.payload.size());
  // Locally administered MACs derived from the IPv4 addresses.
  const auto put_mac = [&](const Endpoint& e) {
    bytes::put_u8(f, 0x02);
    bytes::put_u8(f, 0x00);
    for (std::size_t i = 0; i < 4; ++i) bytes::put_u8(f, e.ip.octets[i]);
  };
  put_mac(spec.destination);
  put_mac(spec.source);
  bytes::put_be16(f, 0x0800);

  const std::size_t ip_at = f.size();
  bytes::put_u8(f, 0x45);
  bytes::put_u8(f, 0);
  bytes::put_be16(f, static_cast<std::uint16_t>(ipv4_header + tcp_header + spec.payload.size()));
  bytes::put_be16(f, spec.ip_id);
  bytes::put_be16(f, 0x4000);
  bytes::put_u8(f, 64);
  bytes::put_u8(f, 6);
  bytes::put_be16(f, 0);
  for (std::size_t i = 0; i < 4; ++i) bytes::put_u8(f, spec.source.ip.octets[i]);
  for (std::size_t i = 0; i < 4; ++i) bytes::put_u8(f, spec.destination.ip.octets[i]);
  bytes::patch_be16(f, ip_at + 10,
                    static_cast<std::uint16_t>(~ones_complement_sum(ByteView(f).subspan(ip_at, ipv4_header))));

  const std::size_t tcp_at = f.size();
  bytes::put_be16(f, spec.source.port);
  bytes::put_be16(f, spec.destination.port);
  bytes::put_be32(f, spec.seq);
  bytes::put_be32(f, spec.ack);
  bytes::put_u8(f, static_cast<std::uint8_t>((tcp_header / 4) << 4));
  bytes::put_u8(f, spec.flags);
  bytes::put_be16(f, 65535);
  bytes::put_be16(f, 0);
  bytes::put_be16(f, 0);
  f.insert(f.end(), spec.payload.begin(), spec.payload.end());

  Bytes pseudo;
  for (std::size_t i = 0; i < 4; ++i) pseudo.push_back(spec.source.ip.octets[i]);
  for (std::size_t i = 0; i < 4; ++i) pseudo.push_back(spec.destination.ip.octets[i]);
  bytes::put_u8(pseudo, 0);
  bytes::put_u8(pseudo, 6);
  bytes::put_be16(pseudo, static_cast<std::uint16_t>(f.size() - tcp_at));
  const std::uint16_t partial = ones_complement_sum(pseudo);
  bytes::patch_be16(f, tcp_at + 16,
                    static_cast<std::uint16_t>(~ones_complement_sum(ByteView(f).subspan(tcp_at), partial)));

  CaptureFrame frame;
  frame.ts_micros = spec.ts_micros;
  frame.wire_len = static_cast<std::uint32_t>(f.size());
  frame.cap_len = frame.wire_len;
  frame.link_type = LinkType::ethernet;
  frame.payload = std::move(f);
  return frame;
}

SynthSession synth_session(const BrowserProfile& profile, std::uint64_t seed) {
  validate(profile);
  std::mt19937_64 rng(seed);

  Endpoint client;
  client.ip = IpAddress::v4(10, static_cast<std::uint8_t>(rng() >> 56),
                            static_cast<std::uint8_t>(rng() >> 56),
                            static_cast<std::uint8_t>(1 + (rng() >> 57)));
  client.port = static_cast<std::uint16_t>(49152 + (rng() >> 50) % 16384);
  Endpoint server;
  server.ip = IpAddress::v4(192, 168, static_cast<std::uint8_t>(rng() >> 56),
                            static_cast<std::uint8_t>(1 + (rng() >> 57)));
  server.port = profile.server_port;
  const std::uint32_t isn[2] = {static_cast<std::uint32_t>(rng()), static_cast<std::uint32_t>(rng())};

  SynthPlan plan;
  plan.profile = profile;
  plan.seed = seed;
  plan.client_hello_bytes = build_client_hello(profile, seed);

  struct OutRecord {
    Side sender;
    ContentType type;
    Bytes bytes;
  };
  std::vector<OutRecord> records;
  records.push_back({Side::client, ContentType::handshake,
                     record_bytes(ContentType::handshake, plan.client_hello_bytes)});
  plan.expected_records.push_back(
      {ContentType::handshake, client_hello_record_size(profile), Side::client});
  bool server_hello_done = false;
  for (const PlannedRecord& r : profile.record_plan) {
    Bytes payload;
    if (r.sender == Side::server && r.type == ContentType::handshake && !server_hello_done &&
        r.payload_len >= server_hello_min_payload) {
      payload = build_server_hello(r.payload_len, profile.cipher_suites.front(), rng);
      server_hello_done = true;
    } else {
      payload = filler(r, rng);
    }
    records.push_back({r.sender, r.type, record_bytes(r.type, payload)});
    plan.expected_records.push_back({r.type, tls::record_header_size + r.payload_len, r.sender});
  }

  // Build the frame schedule.
  std::vector<Event> events;
  std::uint32_t sent[2] = {0, 0};  // stream bytes sent per side, SYN excluded
  const auto idx = [](Side s) { return s == Side::client ? 0 : 1; };
  const auto next_seq = [&](Side s) { return isn[idx(s)] + 1 + sent[idx(s)]; };
  const auto peer = [](Side s) { return s == Side::client ? Side::server : Side::client; };

  if (profile.tcp_handshake) {
    events.push_back({Side::client, tcp_flags::syn, isn[0], 0, {}, std::nullopt});
    events.push_back({Side::server, tcp_flags::syn | tcp_flags::ack, isn[1], isn[0] + 1, {}, std::nullopt});
    events.push_back({Side::client, tcp_flags::ack, isn[0] + 1, isn[1] + 1, {}, std::nullopt});
  }
  std::size_t ordinal = 0;
  std::size_t since_ack[2] = {0, 0};
  for (const OutRecord& rec : records) {
    for (std::size_t off = 0; off < rec.bytes.size(); off += profile.segmentation) {
      const std::size_t n = std::min(profile.segmentation, rec.bytes.size() - off);
      Event ev{rec.sender, static_cast<std::uint8_t>(tcp_flags::psh | tcp_flags::ack),
               next_seq(rec.sender), next_seq(peer(rec.sender)),
               Bytes(rec.bytes.begin() + static_cast<std::ptrdiff_t>(off),
                     rec.bytes.begin() + static_cast<std::ptrdiff_t>(off + n)),
               ordinal++};
      sent[idx(rec.sender)] += static_cast<std::uint32_t>(n);
      events.push_back(std::move(ev));
      if (profile.ack_every != 0 && ++since_ack[idx(rec.sender)] == profile.ack_every) {
        since_ack[idx(rec.sender)] = 0;
        const Side from = peer(rec.sender);
        events.push_back({from, tcp_flags::ack, next_seq(from), next_seq(rec.sender), {}, std::nullopt});
      }
    }
  }

  const auto position_of = [&](std::size_t data_ordinal) {
    const auto it = std::find_if(events.begin(), events.end(), [&](const Event& e) {
      return e.data_ordinal == data_ordinal;
    });
    return static_cast<std::size_t>(it - events.begin());
  };
  for (std::size_t s : profile.swap_segments) {
    std::swap(events[position_of(s)], events[position_of(s + 1)]);
  }
  std::vector<std::size_t> dups = profile.duplicate_segments;
  for (std::size_t d : dups) {
    const std::size_t at = position_of(d);
    Event copy = events[at];
    copy.data_ordinal.reset();
    events.insert(events.begin() + static_cast<std::ptrdiff_t>(at + 1), std::move(copy));
  }

  SynthSession session;
  session.frames.reserve(events.size());
  std::uint16_t ip_id[2] = {static_cast<std::uint16_t>(rng()), static_cast<std::uint16_t>(rng())};
  for (std::size_t i = 0; i < events.size(); ++i) {
    const Event& ev = events[i];
    const bool from_client = ev.sender == Side::client;
    TcpFrameSpec spec{from_client ? client : server,
                      from_client ? server : client,
                      ev.seq,
                      ev.ack,
                      ev.flags,
                      ev.payload,
                      base_ts_micros + static_cast<std::int64_t>(i) * frame_interval_micros,
                      ip_id[idx(ev.sender)]++};
    session.frames.push_back(build_tcp_frame(spec));
    plan.expected_frame_lengths.push_back(
        static_cast<std::uint32_t>(frame_overhead + ev.payload.size()));
    plan.frame_senders.push_back(ev.sender);
  }
  plan.expected_record_lengths = plan.record_lengths(ContentTypeSet::defaults());
  session.pcap = serialize_pcap(session.frames);
  session.plan = std::move(plan);
  return session;
}

Bytes serialize_pcap(const std::vector<CaptureFrame>& frames) {
  Bytes out;
  std::size_t total = pcap::global_header_size;
  for (const auto& f : frames) total += pcap::record_header_size + f.payload.size();
  out.reserve(total);
  bytes::put_le32(out, pcap::magic_micros);
  bytes::put_le16(out, 2);
  bytes::put_le16(out, 4);
  bytes::put_le32(out, 0);
  bytes::put_le32(out, 0);
  bytes::put_le32(out, 65535);
  bytes::put_le32(out, static_cast<std::uint32_t>(LinkType::ethernet));
  for (const auto& f : frames) {
    bytes::put_le32(out, static_cast<std::uint32_t>(f.ts_micros / 1'000'000));
    bytes::put_le32(out, static_cast<std::uint32_t>(f.ts_micros % 1'000'000));
    bytes::put_le32(out, static_cast<std::uint32_t>(f.payload.size()));
    bytes::put_le32(out, f.wire_len);
    out.insert(out.end(), f.payload.begin(), f.payload.end());
  }
  return out;
}

std::vector<CaptureFrame> interleave(const std::vector<std::vector<CaptureFrame>>& captures) {
  std::vector<CaptureFrame> out;
  std::size_t longest = 0;
  for (const auto& c : captures) longest = std::max(longest, c.size());
  for (std::size_t i = 0; i < longest; ++i) {
    for (const auto& c : captures) {
      if (i < c.size()) out.push_back(c[i]);
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].ts_micros = base_ts_micros + static_cast<std::int64_t>(i) * frame_interval_micros;
  }
  return out;
}

BrowserProfile profile_from_json(const json& j) {
  try {
    if (!j.is_object()) throw Error(ErrorCode::invalid_profile, "profile must be a JSON object");
    BrowserProfile p;
    p.name = j.value("name", std::string{});
    for (const json& v : j.at("cipher_suites")) p.cipher_suites.push_back(parse_code(v, "cipher_suites"));
    if (j.contains("extension_codes")) {
      for (const json& v : j["extension_codes"]) p.extension_codes.push_back(parse_code(v, "extension_codes"));
    }
    if (j.contains("sni") && !j["sni"].is_null()) p.sni = j["sni"].get<std::string>();
    if (j.contains("alpn")) p.alpn = j["alpn"].get<std::vector<std::string>>();
    if (j.contains("record_plan")) {
      for (const json& r : j["record_plan"]) {
        PlannedRecord rec;
        const auto type = parse_content_type(r.at("type"));
        if (!type) throw Error(ErrorCode::invalid_profile, "unknown record type " + r.at("type").dump());
        rec.type = *type;
        rec.payload_len = r.at("payload_len").get<std::size_t>();
        const std::string sender = r.value("sender", std::string("server"));
        if (sender != "client" && sender != "server") {
          throw Error(ErrorCode::invalid_profile, "sender must be client or server");
        }
        rec.sender = sender == "client" ? Side::client : Side::server;
        p.record_plan.push_back(rec);
      }
    }
    p.segmentation = j.value("segmentation", p.segmentation);
    p.ack_every = j.value("ack_every", p.ack_every);
    p.tcp_handshake = j.value("tcp_handshake", p.tcp_handshake);
    p.server_port = j.value("server_port", p.server_port);
    if (j.contains("duplicate_segments")) {
      p.duplicate_segments = j["duplicate_segments"].get<std::vector<std::size_t>>();
    }
    if (j.contains("swap_segments")) p.swap_segments = j["swap_segments"].get<std::vector<std::size_t>>();
    validate(p);
    return p;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::invalid_profile, e.what());
  }
}

json profile_to_json(const BrowserProfile& p) {
  json j;
  j["name"] = p.name;
  j["cipher_suites"] = json::array();
  for (auto s : p.cipher_suites) j["cipher_suites"].push_back(hex4(s));
  j["extension_codes"] = json::array();
  for (auto e : p.extension_codes) j["extension_codes"].push_back(hex4(e));
  if (p.sni) j["sni"] = *p.sni;
  if (!p.alpn.empty()) j["alpn"] = p.alpn;
  j["record_plan"] = json::array();
  for (const auto& r : p.record_plan) {
    j["record_plan"].push_back(
        {{"type", std::string(to_string(r.type))}, {"payload_len", r.payload_len}, {"sender", side_name(r.sender)}});
  }
  j["segmentation"] = p.segmentation;
  j["ack_every"] = p.ack_every;
  j["tcp_handshake"] = p.tcp_handshake;
  j["server_port"] = p.server_port;
  if (!p.duplicate_segments.empty()) j["duplicate_segments"] = p.duplicate_segments;
  if (!p.swap_segments.empty()) j["swap_segments"] = p.swap_segments;
  return j;
}

json plan_to_json(const SynthPlan& plan) {
  json j;
  j["profile"] = profile_to_json(plan.profile);
  j["seed"] = plan.seed;
  j["expected_frame_lengths"] = plan.expected_frame_lengths;
  json senders = json::array();
  for (Side s : plan.frame_senders) senders.push_back(side_name(s));
  j["frame_senders"] = std::move(senders);
  j["expected_record_lengths"] = plan.expected_record_lengths;
  json records = json::array();
  for (const auto& r : plan.expected_records) {
    records.push_back({{"type", std::string(to_string(r.type))}, {"length", r.wire_size}, {"sender", side_name(r.sender)}});
  }
  j["expected_records"] = std::move(records);
  static constexpr char digits[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(plan.client_hello_bytes.size() * 2);
  for (std::uint8_t b : plan.client_hello_bytes) {
    hex += digits[b >> 4];
    hex += digits[b & 0xf];
  }
  j["client_hello_hex"] = std::move(hex);
  return j;
}

}  // namespace tlsprint::synth
