#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tlsprint {

/// Which observable size a fingerprint is built from.
enum class Mode {
  frame,   // on-wire Ethernet frame lengths
  record,  // TLS record lengths including the 5-byte header
};

std::string_view to_string(Mode mode) noexcept;
std::optional<Mode> parse_mode(std::string_view text) noexcept;

struct VectorLabel {
  std::string browser;
  std::string url;
  Mode mode = Mode::frame;

  bool operator==(const VectorLabel&) const = default;
};

/// Ordered message sizes observed for one session.
///
/// Never empty, every value at least 1. The constructor throws
/// Error(invalid_vector) otherwise.
class LengthVector {
public:
  using value_type = std::uint32_t;

  explicit LengthVector(std::vector<value_type> values, std::optional<VectorLabel> label = {});

  std::span<const value_type> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  value_type operator[](std::size_t i) const { return values_[i]; }

  const std::optional<VectorLabel>& label() const noexcept { return label_; }
  void set_label(VectorLabel label) { label_ = std::move(label); }

  std::vector<double> as_reals() const;

  bool operator==(const LengthVector&) const = default;

private:
  std::vector<value_type> values_;
  std::optional<VectorLabel> label_;
};

}  // namespace tlsprint
