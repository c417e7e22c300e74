#include "support/fixtures.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tlsprint::testing {

namespace fs = std::filesystem;
using synth::BrowserProfile;
using synth::PlannedRecord;
using synth::Side;

BrowserProfile demo_profile(std::string name) {
  BrowserProfile p;
  p.name = std::move(name);
  p.cipher_suites = {0x1301, 0x1302, 0x1303, 0xc02b, 0xc02f};
  p.extension_codes = {0x0000, 0x0017, 0x000a, 0x000b, 0x0010, 0x000d, 0x002b, 0x0033};
  p.sni = "url-1.example.test";
  p.alpn = {"h2", "http/1.1"};
  p.record_plan = {
      {ContentType::handshake, 122, Side::server},
      {ContentType::change_cipher_spec, 1, Side::server},
      {ContentType::application_data, 2800, Side::server},
      {ContentType::change_cipher_spec, 1, Side::client},
      {ContentType::application_data, 53, Side::client},
      {ContentType::application_data, 420, Side::client},
      {ContentType::application_data, 5200, Side::server},
      {ContentType::application_data, 24, Side::server},
  };
  p.segmentation = 1460;
  p.ack_every = 2;
  return p;
}

BrowserProfile profile_with_frame_lengths(const std::vector<std::uint32_t>& lengths) {
  if (lengths.empty()) throw std::invalid_argument("no lengths");
  BrowserProfile p;
  p.name = "scripted";
  p.cipher_suites = {0x1301, 0x1302, 0x1303};
  p.extension_codes = {0x0000, 0x002b};
  p.tcp_handshake = false;
  p.ack_every = 0;
  p.segmentation = synth::max_segmentation;
  p.sni = std::string();
  const std::size_t base = synth::frame_overhead + synth::client_hello_record_size(p);
  if (lengths.front() < base) throw std::invalid_argument("first length too small for a ClientHello");
  p.sni = std::string(lengths.front() - base, 'a');
  for (std::size_t i = 1; i < lengths.size(); ++i) {
    const std::size_t overhead = synth::frame_overhead + tls::record_header_size;
    if (lengths[i] < overhead) throw std::invalid_argument("length below frame+record overhead");
    p.record_plan.push_back(PlannedRecord{ContentType::application_data, lengths[i] - overhead,
                                          i % 2 == 1 ? Side::server : Side::client});
  }
  return p;
}

BrowserProfile random_profile(std::mt19937_64& rng) {
  const auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  BrowserProfile p;
  p.name = "random-" + std::to_string(rng() % 100000);
  const std::size_t suites = 1 + pick(30);
  for (std::size_t i = 0; i < suites; ++i) p.cipher_suites.push_back(static_cast<std::uint16_t>(rng()));
  const std::uint16_t known[] = {0x0000, 0x0010, 0x002b, 0x000a, 0x000b, 0x000d, 0x0017, 0x0033, 0xff01};
  for (std::uint16_t code : known) {
    if (pick(3) != 0) p.extension_codes.push_back(code);
  }
  const std::size_t extra = pick(4);
  for (std::size_t i = 0; i < extra; ++i) p.extension_codes.push_back(static_cast<std::uint16_t>(rng()));
  if (pick(2) == 0) p.sni = "host" + std::to_string(pick(1000)) + ".example.test";
  if (pick(2) == 0) p.alpn = {"h2", "http/1.1"};

  const std::size_t records = pick(40);
  const ContentType types[] = {ContentType::handshake, ContentType::application_data,
                               ContentType::change_cipher_spec, ContentType::alert};
  for (std::size_t i = 0; i < records; ++i) {
    PlannedRecord r;
    r.type = types[pick(4)];
    r.payload_len = pick(3) == 0 ? pick(tls::max_record_payload + 1) : pick(1500);
    r.sender = pick(2) == 0 ? Side::client : Side::server;
    p.record_plan.push_back(r);
  }
  p.segmentation = 100 + pick(1361);
  p.ack_every = pick(5);
  p.tcp_handshake = pick(4) != 0;

  // Count data frames to place duplication and swap directives.
  std::size_t data_frames = 0;
  const auto chunks = [&](std::size_t n) { return (n + p.segmentation - 1) / p.segmentation; };
  data_frames += chunks(synth::client_hello_record_size(p));
  for (const auto& r : p.record_plan) data_frames += chunks(tls::record_header_size + r.payload_len);
  const std::size_t dups = pick(3);
  for (std::size_t i = 0; i < dups; ++i) p.duplicate_segments.push_back(pick(data_frames));
  const std::size_t swaps = pick(3);
  for (std::size_t i = 0; i < swaps && data_frames > 1; ++i) {
    BrowserProfile trial = p;
    trial.swap_segments.push_back(pick(data_frames - 1));
    try {
      synth::validate(trial);
      p = std::move(trial);
    } catch (const Error&) {
      // Pair crosses senders; skip it.
    }
  }
  synth::validate(p);
  return p;
}

TempDir::TempDir() {
  static std::mt19937_64 rng(std::random_device{}());
  for (int attempt = 0; attempt < 100; ++attempt) {
    const fs::path candidate = fs::temp_directory_path() / ("tlsprint-test-" + std::to_string(rng()));
    if (fs::create_directory(candidate)) {
      path_ = candidate;
      return;
    }
  }
  throw std::runtime_error("cannot create temp dir");
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

void write_file(const fs::path& path, const Bytes& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  out << text;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace tlsprint::testing
