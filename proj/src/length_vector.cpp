#include "tlsprint/length_vector.hpp"

#include <algorithm>

#include "tlsprint/error.hpp"

namespace tlsprint {

std::string_view to_string(Mode mode) noexcept {
  return mode == Mode::frame ? "frame" : "record";
}

std::optional<Mode> parse_mode(std::string_view text) noexcept {
  if (text == "frame") return Mode::frame;
  if (text == "record") return Mode::record;
  return std::nullopt;
}

LengthVector::LengthVector(std::vector<value_type> values, std::optional<VectorLabel> label)
    : values_(std::move(values)), label_(std::move(label)) {
  if (values_.empty()) {
    throw Error(ErrorCode::invalid_vector, "length vector is empty");
  }
  if (std::find(values_.begin(), values_.end(), 0u) != values_.end()) {
    throw Error(ErrorCode::invalid_vector, "length vector contains a zero length");
  }
}

std::vector<double> LengthVector::as_reals() const {
  return {values_.begin(), values_.end()};
}

}  // namespace tlsprint
