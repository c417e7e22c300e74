#include <gtest/gtest.h>

#include <random>

#include "support/fixtures.hpp"
#include "tlsprint/pcap.hpp"
#include "tlsprint/synth.hpp"

namespace tlsprint {
namespace {

Bytes global_header(std::uint32_t magic, std::uint32_t link, bool big_endian) {
  Bytes out;
  const auto put32 = [&](std::uint32_t v) {
    big_endian ? bytes::put_be32(out, v) : bytes::put_le32(out, v);
  };
  const auto put16 = [&](std::uint16_t v) {
    big_endian ? bytes::put_be16(out, v) : bytes::put_le16(out, v);
  };
  put32(magic);
  put16(2);
  put16(4);
  put32(0);
  put32(0);
  put32(65535);
  put32(link);
  return out;
}

void append_record(Bytes& out, bool big_endian, std::uint32_t sec, std::uint32_t frac,
                   const Bytes& payload, std::uint32_t wire_len) {
  const auto put32 = [&](std::uint32_t v) {
    big_endian ? bytes::put_be32(out, v) : bytes::put_le32(out, v);
  };
  put32(sec);
  put32(frac);
  put32(static_cast<std::uint32_t>(payload.size()));
  put32(wire_len);
  out.insert(out.end(), payload.begin(), payload.end());
}

CaptureFrame sample_frame(std::size_t payload_len) {
  synth::TcpFrameSpec spec;
  spec.source = Endpoint{IpAddress::v4(10, 0, 0, 2), 50000};
  spec.destination = Endpoint{IpAddress::v4(10, 0, 0, 1), 443};
  spec.seq = 1000;
  spec.payload = Bytes(payload_len, 0xab);
  spec.ts_micros = 1'700'000'000'123'456;
  return synth::build_tcp_frame(spec);
}

TEST(ParsePcap, HeaderOnlyFileHasNoFrames) {
  const Bytes data = synth::serialize_pcap({});
  ASSERT_EQ(data.size(), pcap::global_header_size);
  const PcapParseResult r = parse_pcap(data);
  EXPECT_TRUE(r.ok());
  EXPECT_TRUE(r.frames.empty());
}

TEST(ParsePcap, SingleMtuFrameRoundTrips) {
  const CaptureFrame frame = sample_frame(1460);
  ASSERT_EQ(frame.wire_len, 1514u);
  const Bytes data = synth::serialize_pcap({frame});
  EXPECT_EQ(data.size(), pcap::global_header_size + pcap::record_header_size + 1514);

  const PcapParseResult r = parse_pcap(data);
  ASSERT_TRUE(r.ok());
  ASSERT_EQ(r.frames.size(), 1u);
  EXPECT_EQ(r.frames[0], frame);
  EXPECT_EQ(r.frames[0].wire_len, 1514u);
  EXPECT_EQ(synth::serialize_pcap(r.frames), data);
}

TEST(ParsePcap, MissingTailIsTruncatedPacketWithEarlierFramesKept) {
  const Bytes data = synth::serialize_pcap({sample_frame(10), sample_frame(1460)});
  const Bytes cut(data.begin(), data.end() - 4);
  const PcapParseResult r = parse_pcap(cut);
  ASSERT_TRUE(r.issue.has_value());
  EXPECT_EQ(r.issue->code, ErrorCode::truncated_packet);
  ASSERT_EQ(r.frames.size(), 1u);
  EXPECT_EQ(r.frames[0], sample_frame(10));
}

TEST(ParsePcap, PartialRecordHeaderIsTruncatedHeader) {
  Bytes data = synth::serialize_pcap({sample_frame(10)});
  data.insert(data.end(), {1, 2, 3, 4, 5, 6});
  const PcapParseResult r = parse_pcap(data);
  ASSERT_TRUE(r.issue.has_value());
  EXPECT_EQ(r.issue->code, ErrorCode::truncated_header);
  EXPECT_EQ(r.frames.size(), 1u);
}

TEST(ParsePcap, ShortGlobalHeader) {
  Bytes data = synth::serialize_pcap({});
  data.resize(10);
  const PcapParseResult r = parse_pcap(data);
  ASSERT_TRUE(r.issue.has_value());
  EXPECT_EQ(r.issue->code, ErrorCode::truncated_header);
}

TEST(ParsePcap, BigEndianFile) {
  const CaptureFrame frame = sample_frame(32);
  Bytes data = global_header(pcap::magic_micros, 1, true);
  append_record(data, true, 1'700'000'000, 123'456, frame.payload, frame.wire_len);
  const PcapParseResult r = parse_pcap(data);
  ASSERT_TRUE(r.ok());
  ASSERT_EQ(r.frames.size(), 1u);
  EXPECT_EQ(r.frames[0], frame);
}

TEST(ParsePcap, NanosecondTimestampsTruncateToMicros) {
  const CaptureFrame frame = sample_frame(4);
  for (bool big : {false, true}) {
    Bytes data = global_header(pcap::magic_nanos, 1, big);
    append_record(data, big, 1'700'000'000, 123'456'789, frame.payload, frame.wire_len);
    const PcapParseResult r = parse_pcap(data);
    ASSERT_TRUE(r.ok());
    ASSERT_EQ(r.frames.size(), 1u);
    EXPECT_EQ(r.frames[0].ts_micros, 1'700'000'000'123'456);
  }
}

TEST(ParsePcap, SnapLengthTruncatedFrameKeepsWireLength) {
  const CaptureFrame frame = sample_frame(1000);
  Bytes data = global_header(pcap::magic_micros, 1, false);
  const Bytes head(frame.payload.begin(), frame.payload.begin() + 96);
  append_record(data, false, 1, 0, head, frame.wire_len);
  const PcapParseResult r = parse_pcap(data);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.frames[0].cap_len, 96u);
  EXPECT_EQ(r.frames[0].wire_len, frame.wire_len);
}

TEST(ParsePcap, CapturedLongerThanWireIsRejected) {
  Bytes data = global_header(pcap::magic_micros, 1, false);
  append_record(data, false, 1, 0, Bytes(64, 0), 60);
  const PcapParseResult r = parse_pcap(data);
  ASSERT_TRUE(r.issue.has_value());
  EXPECT_EQ(r.issue->code, ErrorCode::invalid_record_header);
}

TEST(ParsePcap, PcapngNamedInError) {
  Bytes data = {0x0a, 0x0d, 0x0d, 0x0a, 0x1c, 0, 0, 0, 0x4d, 0x3c, 0x2b, 0x1a};
  data.resize(64, 0);
  const PcapParseResult r = parse_pcap(data);
  ASSERT_TRUE(r.issue.has_value());
  EXPECT_EQ(r.issue->code, ErrorCode::unknown_magic);
  EXPECT_NE(r.issue->message.find("pcapng"), std::string::npos);
}

TEST(ParsePcap, TextFileIsUnknownMagic) {
  const std::string text = "this is definitely not a capture file\n";
  const PcapParseResult r = parse_pcap(ByteView(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
  ASSERT_TRUE(r.issue.has_value());
  EXPECT_EQ(r.issue->code, ErrorCode::unknown_magic);
}

TEST(ParsePcap, NonEthernetLinkTypeRejected) {
  const Bytes data = global_header(pcap::magic_micros, 101, false);
  const PcapParseResult r = parse_pcap(data);
  ASSERT_TRUE(r.issue.has_value());
  EXPECT_EQ(r.issue->code, ErrorCode::unsupported_link_type);
}

TEST(ParsePcap, RoundTripProperty) {
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 200; ++iter) {
    std::vector<CaptureFrame> frames(rng() % 12);
    for (auto& f : frames) {
      f.ts_micros = static_cast<std::int64_t>(rng() % 4'000'000'000ull) * 1'000'000 +
                    static_cast<std::int64_t>(rng() % 1'000'000);
      f.cap_len = static_cast<std::uint32_t>(rng() % 300);
      f.wire_len = f.cap_len + static_cast<std::uint32_t>(rng() % 3) + (f.cap_len == 0 ? 1 : 0);
      f.payload.resize(f.cap_len);
      for (auto& b : f.payload) b = static_cast<std::uint8_t>(rng());
    }
    const Bytes data = synth::serialize_pcap(frames);
    const PcapParseResult r = parse_pcap(data);
    ASSERT_TRUE(r.ok());
    ASSERT_EQ(r.frames, frames);
    ASSERT_EQ(synth::serialize_pcap(r.frames), data);
  }
}

TEST(ReadPcapFile, MissingFileIsIoFailure) {
  try {
    read_pcap_file("/nonexistent/capture.pcap");
    FAIL() << "expected an exception";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::io_failure);
  }
}

TEST(ReadPcapFile, ReadsFromDisk) {
  testing::TempDir dir;
  const Bytes data = synth::serialize_pcap({sample_frame(100)});
  testing::write_file(dir / "one.pcap", data);
  const PcapParseResult r = read_pcap_file(dir / "one.pcap");
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.frames.size(), 1u);
}

}  // namespace
}  // namespace tlsprint
