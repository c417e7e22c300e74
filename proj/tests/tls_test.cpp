#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "support/fixtures.hpp"
#include "tlsprint/synth.hpp"
#include "tlsprint/tls.hpp"

namespace tlsprint {
namespace {

TlsRecord handshake_record(Bytes payload) {
  return TlsRecord{ContentType::handshake, 0x0303, std::move(payload)};
}

// ClientHello assembled field by field from the RFC 8446 layout.
Bytes hand_built_client_hello(bool with_extensions) {
  Bytes body = {
      0x03, 0x03,  // legacy_version
  };
  for (int i = 0; i < 32; ++i) body.push_back(static_cast<std::uint8_t>(i));  // random
  body.push_back(0x00);                                                       // session id
  body.insert(body.end(), {0x00, 0x06, 0x13, 0x01, 0x13, 0x02, 0x13, 0x03});  // suites
  body.insert(body.end(), {0x01, 0x00});                                      // compression
  if (with_extensions) {
    const Bytes exts = {
        // server_name "a.io"
        0x00, 0x00, 0x00, 0x09, 0x00, 0x07, 0x00, 0x00, 0x04, 'a', '.', 'i', 'o',
        // ec_point_formats, unknown to the parser
        0x00, 0x0b, 0x00, 0x02, 0x01, 0x00,
        // alpn "h2"
        0x00, 0x10, 0x00, 0x05, 0x00, 0x03, 0x02, 'h', '2',
        // supported_versions 1.3, 1.2
        0x00, 0x2b, 0x00, 0x05, 0x04, 0x03, 0x04, 0x03, 0x03,
        // GREASE-like code with an empty body
        0x0a, 0x0a, 0x00, 0x00,
    };
    bytes::put_be16(body, static_cast<std::uint16_t>(exts.size()));
    body.insert(body.end(), exts.begin(), exts.end());
  }
  Bytes msg = {0x01};
  bytes::put_be24(msg, static_cast<std::uint32_t>(body.size()));
  msg.insert(msg.end(), body.begin(), body.end());
  return msg;
}

TEST(ParseRecords, SingleApplicationDataRecord) {
  Bytes stream = {0x17, 0x03, 0x03, 0x00, 0x10};
  stream.resize(5 + 16, 0xee);
  const RecordParseResult r = parse_records(stream);
  ASSERT_TRUE(r.ok());
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.records[0].content_type, ContentType::application_data);
  EXPECT_EQ(r.records[0].legacy_version, 0x0303);
  EXPECT_EQ(r.records[0].length(), 16u);
}

TEST(ParseRecords, EmptyStream) {
  const RecordParseResult r = parse_records({});
  EXPECT_TRUE(r.ok());
  EXPECT_TRUE(r.records.empty());
}

TEST(ParseRecords, InvalidContentType) {
  const Bytes stream = {0x99, 0x03, 0x03, 0x00, 0x01, 0x00};
  const RecordParseResult r = parse_records(stream);
  ASSERT_TRUE(r.issue.has_value());
  EXPECT_EQ(r.issue->code, ErrorCode::invalid_content_type);
  EXPECT_TRUE(r.records.empty());
}

TEST(ParseRecords, DesyncAfterGoodRecordKeepsPrefix) {
  const Bytes stream = {0x16, 0x03, 0x01, 0x00, 0x01, 0x01, 0x42, 0x00};
  const RecordParseResult r = parse_records(stream);
  ASSERT_EQ(r.records.size(), 1u);
  ASSERT_TRUE(r.issue.has_value());
  EXPECT_EQ(r.issue->code, ErrorCode::invalid_content_type);
}

TEST(ParseRecords, OversizeRecord) {
  const std::size_t too_big = tls::max_record_payload + 1;
  Bytes stream = {0x17, 0x03, 0x03};
  bytes::put_be16(stream, static_cast<std::uint16_t>(too_big));
  stream.resize(5 + too_big);
  const RecordParseResult r = parse_records(stream);
  ASSERT_TRUE(r.issue.has_value());
  EXPECT_EQ(r.issue->code, ErrorCode::oversize_record);
}

TEST(ParseRecords, MaximumRecordAccepted) {
  Bytes stream = {0x17, 0x03, 0x03};
  bytes::put_be16(stream, static_cast<std::uint16_t>(tls::max_record_payload));
  stream.resize(5 + tls::max_record_payload);
  EXPECT_TRUE(parse_records(stream).ok());
}

TEST(ParseRecords, TrailingPartialRecordReported) {
  Bytes stream = {0x17, 0x03, 0x03, 0x00, 0x02, 0xaa, 0xbb, 0x17, 0x03, 0x03, 0x00, 0x08, 0x01};
  const RecordParseResult r = parse_records(stream);
  ASSERT_TRUE(r.issue.has_value());
  EXPECT_EQ(r.issue->code, ErrorCode::trailing_partial_record);
  EXPECT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.trailing_bytes, 6u);
  EXPECT_EQ(r.consumed + r.trailing_bytes, stream.size());
}

TEST(ParseRecords, LengthAccountingProperty) {
  std::mt19937_64 rng(21);
  for (int iter = 0; iter < 300; ++iter) {
    Bytes stream;
    const std::size_t n = rng() % 8;
    for (std::size_t i = 0; i < n; ++i) {
      bytes::put_u8(stream, static_cast<std::uint8_t>(20 + rng() % 4));
      bytes::put_be16(stream, 0x0303);
      const std::size_t len = rng() % 700;
      bytes::put_be16(stream, static_cast<std::uint16_t>(len));
      for (std::size_t k = 0; k < len; ++k) stream.push_back(static_cast<std::uint8_t>(rng()));
    }
    const std::size_t keep = stream.empty() ? 0 : stream.size() - rng() % std::min<std::size_t>(stream.size(), 40);
    stream.resize(keep);
    const RecordParseResult r = parse_records(stream);
    std::size_t total = 0;
    for (const auto& rec : r.records) total += rec.wire_size();
    ASSERT_EQ(total + r.trailing_bytes, stream.size());
    ASSERT_TRUE(r.ok() || r.issue->code == ErrorCode::trailing_partial_record);
  }
}

TEST(ParseClientHello, HandBuiltMessage) {
  const ClientHelloSummary s = parse_client_hello(handshake_record(hand_built_client_hello(true)));
  EXPECT_EQ(s.cipher_suites, (std::vector<std::uint16_t>{0x1301, 0x1302, 0x1303}));
  EXPECT_EQ(s.extensions, (std::vector<std::uint16_t>{0x0000, 0x000b, 0x0010, 0x002b, 0x0a0a}));
  EXPECT_EQ(s.sni, "a.io");
  ASSERT_TRUE(s.alpn.has_value());
  EXPECT_EQ(*s.alpn, std::vector<std::string>{"h2"});
  EXPECT_EQ(s.supported_versions, (std::vector<std::uint16_t>{0x0304, 0x0303}));
  EXPECT_EQ(s.legacy_version, 0x0303);
}

TEST(ParseClientHello, NoExtensions) {
  const ClientHelloSummary s = parse_client_hello(handshake_record(hand_built_client_hello(false)));
  EXPECT_TRUE(s.extensions.empty());
  EXPECT_FALSE(s.sni.has_value());
  EXPECT_FALSE(s.alpn.has_value());
  EXPECT_EQ(s.cipher_suites.size(), 3u);
}

TEST(ParseClientHello, InflatedSuiteLengthIsMalformed) {
  Bytes msg = hand_built_client_hello(false);
  // Suite length sits after type(1) length(3) version(2) random(32) session(1).
  const std::size_t at = 4 + 2 + 32 + 1;
  ASSERT_EQ(bytes::load_be16(msg, at), 6);
  bytes::patch_be16(msg, at, 0x0100);
  try {
    parse_client_hello(handshake_record(msg));
    FAIL() << "expected MalformedHandshake";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::malformed_handshake);
  }
}

TEST(ParseClientHello, HandshakeLengthBeyondRecordIsMalformed) {
  Bytes msg = hand_built_client_hello(true);
  msg.resize(msg.size() - 10);
  try {
    parse_client_hello(handshake_record(msg));
    FAIL() << "expected MalformedHandshake";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::malformed_handshake);
  }
}

TEST(ParseClientHello, WrongMessageOrRecordType) {
  Bytes msg = hand_built_client_hello(false);
  msg[0] = 0x02;
  EXPECT_THROW(
      {
        try {
          parse_client_hello(handshake_record(msg));
        } catch (const Error& e) {
          EXPECT_EQ(e.code(), ErrorCode::not_client_hello);
          throw;
        }
      },
      Error);
  const TlsRecord app{ContentType::application_data, 0x0303, hand_built_client_hello(false)};
  try {
    parse_client_hello(app);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::not_client_hello);
  }
}

TEST(ParseClientHello, MatchesSynthesizedProfileAndPreservesOrder) {
  std::mt19937_64 rng(5);
  synth::BrowserProfile p = testing::demo_profile();
  for (int iter = 0; iter < 20; ++iter) {
    std::shuffle(p.cipher_suites.begin(), p.cipher_suites.end(), rng);
    std::shuffle(p.extension_codes.begin(), p.extension_codes.end(), rng);
    const Bytes msg = synth::build_client_hello(p, static_cast<std::uint64_t>(iter));
    EXPECT_EQ(msg.size() + tls::record_header_size, synth::client_hello_record_size(p));
    const ClientHelloSummary s = parse_client_hello(handshake_record(msg));
    EXPECT_EQ(s.cipher_suites, p.cipher_suites);
    EXPECT_EQ(s.extensions, p.extension_codes);
    EXPECT_EQ(s.sni, p.sni);
  }
}

TEST(ParseServerHello, SynthesizedServerHello) {
  const auto session = synth::synth_session(testing::demo_profile(), 9);
  const FlowTable t = group_flows(session.frames);
  const FlowRecords recs = flow_records(t.flows.begin()->second);
  ASSERT_TRUE(recs.server_hello.has_value());
  EXPECT_EQ(recs.server_hello->cipher_suite, 0x1301);
  EXPECT_EQ(recs.server_hello->selected_version, 0x0304);
  ASSERT_TRUE(recs.client_hello.has_value());
  EXPECT_TRUE(recs.issues.empty());
}

TEST(SuiteListFingerprint, Definition) {
  ClientHelloSummary s;
  s.cipher_suites = {0x1301};
  EXPECT_EQ(suite_list_fingerprint(s), "1301;");
  s.cipher_suites = {0x1301, 0x1302};
  s.extensions = {0x0000, 0x0010};
  EXPECT_EQ(suite_list_fingerprint(s), "1301,1302;0000,0010");
  ClientHelloSummary swapped = s;
  std::swap(swapped.cipher_suites[0], swapped.cipher_suites[1]);
  EXPECT_NE(suite_list_fingerprint(swapped), suite_list_fingerprint(s));
  s.cipher_suites = {0xC02B};
  s.extensions = {};
  EXPECT_EQ(suite_list_fingerprint(s), "c02b;");
}

TEST(RecordLengthVector, AddsHeaderBytes) {
  const std::vector<TlsRecord> records{
      {ContentType::handshake, 0x0303, Bytes(512)},
      {ContentType::application_data, 0x0303, Bytes(64)},
  };
  const LengthVector v = record_length_vector(records);
  EXPECT_EQ(std::vector<std::uint32_t>(v.values().begin(), v.values().end()),
            (std::vector<std::uint32_t>{517, 69}));
}

TEST(RecordLengthVector, EmptySelection) {
  const std::vector<TlsRecord> records{{ContentType::handshake, 0x0303, Bytes(10)}};
  try {
    record_length_vector(records, {ContentType::application_data});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::empty_selection);
  }
}

TEST(RecordLengthVector, AllTypesOnePerRecord) {
  std::mt19937_64 rng(3);
  std::vector<TlsRecord> records;
  for (int i = 0; i < 50; ++i) {
    records.push_back({static_cast<ContentType>(20 + rng() % 4), 0x0303, Bytes(rng() % 100)});
  }
  EXPECT_EQ(record_length_vector(records, ContentTypeSet::all()).size(), records.size());
}

TEST(ContentTypeSetParse, ShortAndLongNames) {
  const auto set = ContentTypeSet::parse("hs,app,ccs,alert");
  ASSERT_TRUE(set.has_value());
  EXPECT_EQ(*set, ContentTypeSet::all());
  EXPECT_EQ(ContentTypeSet::parse("handshake"), (ContentTypeSet{ContentType::handshake}));
  EXPECT_FALSE(ContentTypeSet::parse("hs,bogus").has_value());
  EXPECT_EQ(ContentTypeSet::defaults().to_string(), "hs,app");
}

// Reassembly fixtures: a two-endpoint flow built from raw segments.
Flow flow_of(const std::vector<std::pair<std::uint32_t, std::string>>& segments) {
  const Endpoint c{IpAddress::v4(10, 0, 0, 2), 50000};
  const Endpoint s{IpAddress::v4(10, 0, 0, 1), 443};
  std::vector<CaptureFrame> frames;
  for (const auto& [seq, text] : segments) {
    synth::TcpFrameSpec spec;
    spec.source = c;
    spec.destination = s;
    spec.seq = 1000 + seq;
    spec.payload = Bytes(text.begin(), text.end());
    frames.push_back(synth::build_tcp_frame(spec));
  }
  return group_flows(frames).flows.begin()->second;
}

std::string text_of(const ReassembledStream& s) { return {s.bytes.begin(), s.bytes.end()}; }

TEST(ReassembleDirection, InOrder) {
  const Flow flow = flow_of({{0, "abc"}, {3, "def"}});
  const ReassembledStream s = reassemble_direction(flow, flow.client_direction);
  EXPECT_EQ(text_of(s), "abcdef");
  EXPECT_FALSE(s.gap_detected);
  EXPECT_EQ(s.bytes_recovered, 6u);
}

TEST(ReassembleDirection, OutOfOrderSortedBySequence) {
  const Flow flow = flow_of({{3, "def"}, {0, "abc"}});
  const ReassembledStream s = reassemble_direction(flow, flow.client_direction);
  EXPECT_EQ(text_of(s), "abcdef");
  EXPECT_EQ(s.frame_at(0), 1u);
  EXPECT_EQ(s.frame_at(4), 0u);
}

TEST(ReassembleDirection, DuplicatesDroppedOverlapsTrimmed) {
  const Flow flow = flow_of({{0, "abc"}, {3, "def"}, {3, "def"}, {5, "fgh"}});
  const ReassembledStream s = reassemble_direction(flow, flow.client_direction);
  EXPECT_EQ(text_of(s), "abcdefgh");
  EXPECT_EQ(s.duplicate_segments, 1u);
}

TEST(ReassembleDirection, GapTruncates) {
  const Flow flow = flow_of({{0, "abc"}, {10, "xyz"}});
  const ReassembledStream s = reassemble_direction(flow, flow.client_direction);
  EXPECT_EQ(text_of(s), "abc");
  EXPECT_TRUE(s.gap_detected);
}

TEST(ReassembleDirection, SequenceWraparound) {
  const Endpoint c{IpAddress::v4(10, 0, 0, 2), 50000};
  const Endpoint s{IpAddress::v4(10, 0, 0, 1), 443};
  std::vector<CaptureFrame> frames;
  for (const auto& [seq, text] : std::vector<std::pair<std::uint32_t, std::string>>{
           {0xfffffffe, "ab"}, {0x00000000, "cd"}}) {
    synth::TcpFrameSpec spec;
    spec.source = c;
    spec.destination = s;
    spec.seq = seq;
    spec.payload = Bytes(text.begin(), text.end());
    frames.push_back(synth::build_tcp_frame(spec));
  }
  const Flow flow = group_flows(frames).flows.begin()->second;
  EXPECT_EQ(text_of(reassemble_direction(flow, flow.client_direction)), "abcd");
}

TEST(ReassembleDirection, ScriptedDuplicationLeavesRecordsUnchanged) {
  synth::BrowserProfile p = testing::demo_profile();
  const auto clean = synth::synth_session(p, 4);
  p.duplicate_segments = {1, 3};
  const auto duplicated = synth::synth_session(p, 4);
  ASSERT_EQ(duplicated.frames.size(), clean.frames.size() + 2);

  const Flow a = group_flows(clean.frames).flows.begin()->second;
  const Flow b = group_flows(duplicated.frames).flows.begin()->second;
  for (Direction d : {Direction::a_to_b, Direction::b_to_a}) {
    const ReassembledStream sa = reassemble_direction(a, d);
    const ReassembledStream sb = reassemble_direction(b, d);
    EXPECT_EQ(sa.bytes, sb.bytes);
    EXPECT_EQ(sa.duplicate_segments, 0u);
  }
  EXPECT_EQ(reassemble_direction(b, Direction::a_to_b).duplicate_segments +
                reassemble_direction(b, Direction::b_to_a).duplicate_segments,
            2u);
}

TEST(FlowRecords, RecordVectorMatchesPlan) {
  const auto session = synth::synth_session(testing::demo_profile(), 8);
  const Flow flow = group_flows(session.frames).flows.begin()->second;
  const FlowRecords recs = flow_records(flow);
  const LengthVector v = flow_record_length_vector(recs, ContentTypeSet::defaults());
  EXPECT_EQ(std::vector<std::uint32_t>(v.values().begin(), v.values().end()),
            session.plan.expected_record_lengths);
  const LengthVector all = flow_record_length_vector(recs, ContentTypeSet::all());
  EXPECT_EQ(std::vector<std::uint32_t>(all.values().begin(), all.values().end()),
            session.plan.record_lengths(ContentTypeSet::all()));
}

}  // namespace
}  // namespace tlsprint
