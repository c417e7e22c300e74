#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "tlsprint/synth.hpp"

namespace tlsprint::testing {

/// A Chrome-like profile: TLS 1.3 suites, common extensions, a short
/// handshake flight and some application data.
synth::BrowserProfile demo_profile(std::string name = "Demo");

/// Profile whose synthesized session has exactly these frame lengths (no TCP
/// handshake, no ACKs, one record per frame). The first length is the
/// ClientHello frame; lengths must be >= 59 and <= 1514, the first >= 200.
synth::BrowserProfile profile_with_frame_lengths(const std::vector<std::uint32_t>& lengths);

/// Valid profile drawn at random, including duplication and swap directives.
synth::BrowserProfile random_profile(std::mt19937_64& rng);

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
  std::filesystem::path path_;
};

void write_file(const std::filesystem::path& path, const Bytes& data);
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace tlsprint::testing
