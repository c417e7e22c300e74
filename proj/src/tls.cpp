#include "tlsprint/tls.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace tlsprint {

namespace {

bool valid_content_type(std::uint8_t v) { return v >= 20 && v <= 23; }

std::string hex4(std::uint16_t v) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "%04x", v);
  return buf;
}

// Bounds-checked cursor over a handshake body.
class Reader {
public:
  explicit Reader(ByteView data) : data_(data) {}

  std::size_t remaining() const { return data_.size() - pos_; }

  void need(std::size_t n, const char* what) const {
    if (remaining() < n) {
      throw Error(ErrorCode::malformed_handshake,
                  std::string(what) + " needs " + std::to_string(n) + " bytes, " +
                      std::to_string(remaining()) + " available");
    }
  }
  std::uint8_t u8(const char* what) {
    need(1, what);
    return data_[pos_++];
  }
  std::uint16_t u16(const char* what) {
    need(2, what);
    const auto v = bytes::load_be16(data_, pos_);
    pos_ += 2;
    return v;
  }
  std::uint32_t u24(const char* what) {
    need(3, what);
    const auto v = bytes::load_be24(data_, pos_);
    pos_ += 3;
    return v;
  }
  ByteView take(std::size_t n, const char* what) {
    need(n, what);
    const ByteView v = data_.subspan(pos_, n);
    pos_ += n;
    return v;
  }

private:
  ByteView data_;
  std::size_t pos_ = 0;
};

// Handshake body of the first message in the record, after type and length.
ByteView handshake_body(const TlsRecord& record, std::uint8_t expected, ErrorCode wrong_type) {
  if (record.content_type != ContentType::handshake) {
    throw Error(wrong_type, "record type is " + std::string(to_string(record.content_type)));
  }
  Reader r(record.payload);
  const std::uint8_t msg_type = r.u8("handshake type");
  if (msg_type != expected) {
    throw Error(wrong_type, "handshake message type " + std::to_string(msg_type));
  }
  const std::uint32_t length = r.u24("handshake length");
  return r.take(length, "handshake body");
}

void parse_sni(ByteView body, ClientHelloSummary& out) {
  Reader r(body);
  const std::uint16_t list_len = r.u16("server_name list length");
  Reader list(r.take(list_len, "server_name list"));
  while (list.remaining() > 0) {
    const std::uint8_t name_type = list.u8("server_name type");
    const std::uint16_t name_len = list.u16("server_name length");
    const ByteView name = list.take(name_len, "server_name");
    if (name_type == 0 && !out.sni) {
      out.sni = std::string(name.begin(), name.end());
    }
  }
}

void parse_alpn(ByteView body, ClientHelloSummary& out) {
  Reader r(body);
  const std::uint16_t list_len = r.u16("alpn list length");
  Reader list(r.take(list_len, "alpn list"));
  std::vector<std::string> protocols;
  while (list.remaining() > 0) {
    const std::uint8_t len = list.u8("alpn protocol length");
    const ByteView proto = list.take(len, "alpn protocol");
    protocols.emplace_back(proto.begin(), proto.end());
  }
  out.alpn = std::move(protocols);
}

void parse_client_versions(ByteView body, ClientHelloSummary& out) {
  Reader r(body);
  const std::uint8_t len = r.u8("supported_versions length");
  if (len % 2 != 0) {
    throw Error(ErrorCode::malformed_handshake, "odd supported_versions length");
  }
  Reader list(r.take(len, "supported_versions"));
  while (list.remaining() > 0) {
    out.supported_versions.push_back(list.u16("supported version"));
  }
}

}  // namespace

std::string_view to_string(ContentType type) noexcept {
  switch (type) {
    case ContentType::change_cipher_spec: return "change_cipher_spec";
    case ContentType::alert: return "alert";
    case ContentType::handshake: return "handshake";
    case ContentType::application_data: return "application_data";
  }
  return "unknown";
}

std::optional<ContentTypeSet> ContentTypeSet::parse(std::string_view text) {
  ContentTypeSet set;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string_view item =
        text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    if (item == "hs" || item == "handshake") {
      set.insert(ContentType::handshake);
    } else if (item == "app" || item == "application_data") {
      set.insert(ContentType::application_data);
    } else if (item == "ccs" || item == "change_cipher_spec") {
      set.insert(ContentType::change_cipher_spec);
    } else if (item == "alert") {
      set.insert(ContentType::alert);
    } else if (item == "all") {
      set = all();
    } else {
      return std::nullopt;
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return set;
}

std::string ContentTypeSet::to_string() const {
  std::string out;
  const auto add = [&](ContentType t, const char* name) {
    if (!contains(t)) return;
    if (!out.empty()) out += ',';
    out += name;
  };
  add(ContentType::handshake, "hs");
  add(ContentType::application_data, "app");
  add(ContentType::change_cipher_spec, "ccs");
  add(ContentType::alert, "alert");
  return out;
}

RecordParseResult parse_records(ByteView stream) {
  RecordParseResult result;
  std::size_t pos = 0;
  while (pos < stream.size()) {
    const std::size_t left = stream.size() - pos;
    if (!valid_content_type(stream[pos])) {
      char buf[8];
      std::snprintf(buf, sizeof buf, "0x%02x", stream[pos]);
      result.issue = Issue{ErrorCode::invalid_content_type,
                           std::string("content type ") + buf + " at offset " + std::to_string(pos)};
      break;
    }
    if (left < tls::record_header_size) {
      result.trailing_bytes = left;
      std::string msg = std::to_string(left);
      msg.append(" trailing bytes of an incomplete record header");
      result.issue.emplace(ErrorCode::trailing_partial_record, std::move(msg));
      break;
    }
    const std::size_t length = bytes::load_be16(stream, pos + 3);
    if (length > tls::max_record_payload) {
      result.issue = Issue{ErrorCode::oversize_record, "record length " + std::to_string(length) +
                                                           " at offset " + std::to_string(pos)};
      break;
    }
    if (left < tls::record_header_size + length) {
      result.trailing_bytes = left;
      result.issue = Issue{ErrorCode::trailing_partial_record,
                           std::to_string(left) + " trailing bytes of a " +
                               std::to_string(tls::record_header_size + length) + "-byte record"};
      break;
    }
    TlsRecord record;
    record.content_type = static_cast<ContentType>(stream[pos]);
    record.legacy_version = bytes::load_be16(stream, pos + 1);
    const auto body = stream.subspan(pos + tls::record_header_size, length);
    record.payload.assign(body.begin(), body.end());
    result.records.push_back(std::move(record));
    result.offsets.push_back(pos);
    pos += tls::record_header_size + length;
  }
  result.consumed = pos;
  return result;
}

ClientHelloSummary parse_client_hello(const TlsRecord& record) {
  Reader r(handshake_body(record, tls::handshake_client_hello, ErrorCode::not_client_hello));
  ClientHelloSummary out;
  out.legacy_version = r.u16("client_version");
  r.take(32, "random");
  const std::uint8_t session_len = r.u8("session_id length");
  r.take(session_len, "session_id");

  const std::uint16_t suites_len = r.u16("cipher_suites length");
  if (suites_len % 2 != 0) {
    throw Error(ErrorCode::malformed_handshake, "odd cipher_suites length");
  }
  Reader suites(r.take(suites_len, "cipher_suites"));
  while (suites.remaining() > 0) {
    out.cipher_suites.push_back(suites.u16("cipher suite"));
  }
  if (out.cipher_suites.empty()) {
    throw Error(ErrorCode::malformed_handshake, "empty cipher_suites list");
  }

  const std::uint8_t compression_len = r.u8("compression_methods length");
  r.take(compression_len, "compression_methods");

  if (r.remaining() == 0) {
    return out;
  }
  const std::uint16_t ext_total = r.u16("extensions length");
  Reader exts(r.take(ext_total, "extensions"));
  while (exts.remaining() > 0) {
    const std::uint16_t code = exts.u16("extension type");
    const std::uint16_t len = exts.u16("extension length");
    const ByteView body = exts.take(len, "extension body");
    out.extensions.push_back(code);
    if (body.empty()) continue;  // empty server_name is legal; nothing to read
    switch (code) {
      case tls::ext_server_name: parse_sni(body, out); break;
      case tls::ext_alpn: parse_alpn(body, out); break;
      case tls::ext_supported_versions: parse_client_versions(body, out); break;
      default: break;
    }
  }
  return out;
}

ServerHelloSummary parse_server_hello(const TlsRecord& record) {
  Reader r(handshake_body(record, tls::handshake_server_hello, ErrorCode::not_server_hello));
  ServerHelloSummary out;
  out.legacy_version = r.u16("server_version");
  r.take(32, "random");
  const std::uint8_t session_len = r.u8("session_id length");
  r.take(session_len, "session_id");
  out.cipher_suite = r.u16("cipher_suite");
  r.u8("compression_method");
  if (r.remaining() == 0) {
    return out;
  }
  const std::uint16_t ext_total = r.u16("extensions length");
  Reader exts(r.take(ext_total, "extensions"));
  while (exts.remaining() > 0) {
    const std::uint16_t code = exts.u16("extension type");
    const std::uint16_t len = exts.u16("extension length");
    const ByteView body = exts.take(len, "extension body");
    if (code == tls::ext_supported_versions && len == 2) {
      out.selected_version = bytes::load_be16(body, 0);
    }
  }
  return out;
}

LengthVector record_length_vector(const std::vector<TlsRecord>& records, ContentTypeSet include) {
  std::vector<LengthVector::value_type> lengths;
  for (const TlsRecord& rec : records) {
    if (include.contains(rec.content_type)) {
      lengths.push_back(static_cast<LengthVector::value_type>(rec.wire_size()));
    }
  }
  if (lengths.empty()) {
    throw Error(ErrorCode::empty_selection, "no records of type {" + include.to_string() + "}");
  }
  return LengthVector(std::move(lengths));
}

std::string suite_list_fingerprint(const ClientHelloSummary& hello) {
  std::string out;
  for (std::size_t i = 0; i < hello.cipher_suites.size(); ++i) {
    if (i != 0) out += ',';
    out += hex4(hello.cipher_suites[i]);
  }
  out += ';';
  for (std::size_t i = 0; i < hello.extensions.size(); ++i) {
    if (i != 0) out += ',';
    out += hex4(hello.extensions[i]);
  }
  return out;
}

std::size_t ReassembledStream::frame_at(std::size_t offset) const {
  const auto it = std::upper_bound(segment_starts.begin(), segment_starts.end(), offset);
  if (it == segment_starts.begin()) return segment_frames.empty() ? 0 : segment_frames.front();
  return segment_frames[static_cast<std::size_t>(it - segment_starts.begin()) - 1];
}

ReassembledStream reassemble_direction(const Flow& flow, Direction direction) {
  struct Piece {
    std::int64_t offset;
    std::size_t frame;
  };

  ReassembledStream out;
  std::optional<std::uint32_t> anchor;
  std::optional<std::int64_t> start;
  std::vector<Piece> pieces;

  for (std::size_t i = 0; i < flow.frames.size(); ++i) {
    const FlowFrame& f = flow.frames[i];
    if (f.direction != direction) continue;
    if (!anchor) anchor = f.tcp.seq;
    const std::int64_t rel = static_cast<std::int32_t>(f.tcp.seq - *anchor);
    if (f.tcp.has(tcp_flags::syn) && !start) {
      start = rel + 1;
    }
    if (f.tcp.payload_len > 0) {
      pieces.push_back(Piece{f.tcp.has(tcp_flags::syn) ? rel + 1 : rel, i});
    }
  }
  if (pieces.empty()) {
    return out;
  }
  std::stable_sort(pieces.begin(), pieces.end(),
                   [](const Piece& x, const Piece& y) { return x.offset < y.offset; });
  std::int64_t cursor = start ? *start : pieces.front().offset;
  const std::int64_t base = cursor;

  for (const Piece& piece : pieces) {
    const TcpSegment& seg = flow.frames[piece.frame].tcp;
    const ByteView payload =
        ByteView(flow.frames[piece.frame].frame.payload).subspan(seg.payload_offset, seg.payload_len);
    const std::int64_t end = piece.offset + static_cast<std::int64_t>(payload.size());
    if (end <= cursor) {
      ++out.duplicate_segments;
      continue;
    }
    if (piece.offset > cursor) {
      out.gap_detected = true;
      break;
    }
    const auto skip = static_cast<std::size_t>(cursor - piece.offset);
    out.segment_starts.push_back(static_cast<std::size_t>(cursor - base));
    out.segment_frames.push_back(piece.frame);
    out.bytes.insert(out.bytes.end(), payload.begin() + static_cast<std::ptrdiff_t>(skip),
                     payload.end());
    cursor = end;
    // A segment truncated by the snap length leaves a hole in sequence space.
    if (seg.payload_len < seg.claimed_len) {
      out.gap_detected = true;
      break;
    }
  }
  out.bytes_recovered = out.bytes.size();
  return out;
}

FlowRecords flow_records(const Flow& flow) {
  FlowRecords out;
  std::vector<FlowRecords::Entry> sides[2];
  for (int side = 0; side < 2; ++side) {
    const bool from_client = side == 0;
    const Direction dir = from_client ? flow.client_direction : opposite(flow.client_direction);
    const ReassembledStream stream = reassemble_direction(flow, dir);
    out.gap_detected = out.gap_detected || stream.gap_detected;
    RecordParseResult parsed = parse_records(stream.bytes);
    if (parsed.issue) {
      Issue issue = *parsed.issue;
      issue.message = std::string(from_client ? "client" : "server") + " stream: " + issue.message;
      out.issues.push_back(std::move(issue));
    }
    for (std::size_t i = 0; i < parsed.records.size(); ++i) {
      sides[side].push_back(FlowRecords::Entry{std::move(parsed.records[i]), from_client,
                                               stream.frame_at(parsed.offsets[i])});
    }
  }

  std::size_t c = 0;
  std::size_t s = 0;
  while (c < sides[0].size() || s < sides[1].size()) {
    const bool take_client =
        s >= sides[1].size() ||
        (c < sides[0].size() && sides[0][c].first_frame <= sides[1][s].first_frame);
    out.records.push_back(std::move(take_client ? sides[0][c++] : sides[1][s++]));
  }

  for (const auto& entry : out.records) {
    if (entry.record.content_type != ContentType::handshake || entry.record.payload.empty()) {
      continue;
    }
    const std::uint8_t msg = entry.record.payload[0];
    try {
      if (entry.from_client && !out.client_hello && msg == tls::handshake_client_hello) {
        out.client_hello = parse_client_hello(entry.record);
      } else if (!entry.from_client && !out.server_hello && msg == tls::handshake_server_hello) {
        out.server_hello = parse_server_hello(entry.record);
      }
    } catch (const Error& e) {
      out.issues.push_back(Issue{e.code(), e.what()});
    }
  }
  return out;
}

LengthVector flow_record_length_vector(const FlowRecords& records, ContentTypeSet include,
                                       DirectionMode direction) {
  std::vector<LengthVector::value_type> lengths;
  for (const auto& entry : records.records) {
    if (direction == DirectionMode::client_only && !entry.from_client) continue;
    if (direction == DirectionMode::server_only && entry.from_client) continue;
    if (!include.contains(entry.record.content_type)) continue;
    lengths.push_back(static_cast<LengthVector::value_type>(entry.record.wire_size()));
  }
  if (lengths.empty()) {
    throw Error(ErrorCode::empty_selection, "no records of type {" + include.to_string() + "}");
  }
  return LengthVector(std::move(lengths));
}

}  // namespace tlsprint
