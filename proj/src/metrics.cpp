#include "tlsprint/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tlsprint/error.hpp"

namespace tlsprint {

ResampledVector interpolate(std::span<const double> source, std::size_t target_len) {
  const std::size_t n = source.size();
  if (n < 2) {
    throw Error(ErrorCode::vector_too_short,
                "interpolation needs at least 2 samples, got " + std::to_string(n));
  }
  if (target_len < 2) {
    throw Error(ErrorCode::bad_target_length,
                "target length must be at least 2, got " + std::to_string(target_len));
  }

  ResampledVector out;
  out.source_len = n;
  out.target_len = target_len;
  out.values.resize(target_len);

  // Output position j maps to source position j*(n-1)/(m-1); integer
  // arithmetic keeps grid hits (endpoints included) exact.
  const std::size_t span = target_len - 1;
  for (std::size_t j = 0; j < target_len; ++j) {
    const std::size_t scaled = j * (n - 1);
    const std::size_t index = scaled / span;
    const std::size_t rest = scaled % span;
    if (rest == 0) {
      out.values[j] = source[index];
      continue;
    }
    const double t = static_cast<double>(rest) / static_cast<double>(span);
    const double lo = source[index];
    const double hi = source[index + 1];
    out.values[j] = lo + t * (hi - lo);
  }
  return out;
}

ResampledVector interpolate(const LengthVector& source, std::size_t target_len) {
  const std::vector<double> reals = source.as_reals();
  return interpolate(reals, target_len);
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) {
    throw Error(ErrorCode::dimension_mismatch,
                "vectors of length " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
  }
  double dot = 0.0;
  double norm_a = 0.0;
  double norm_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    norm_a += a[i] * a[i];
    norm_b += b[i] * b[i];
  }
  if (norm_a == 0.0 || norm_b == 0.0) {
    throw Error(ErrorCode::zero_vector, "cosine similarity of an all-zero vector");
  }
  const double s = dot / (std::sqrt(norm_a) * std::sqrt(norm_b));
  // Rounding can push parallel vectors a hair past 1.
  return std::clamp(s, -1.0, 1.0);
}

double cosine_dissimilarity(std::span<const double> a, std::span<const double> b) {
  return 1.0 - cosine_similarity(a, b);
}

Comparison compare(const LengthVector& a, const LengthVector& b, ResampleStrategy strategy) {
  if (a.size() < 2 || b.size() < 2) {
    throw Error(ErrorCode::vector_too_short, "compare needs vectors of at least 2 samples");
  }
  const std::size_t target = strategy == ResampleStrategy::shorter_up ? std::max(a.size(), b.size())
                                                                      : std::min(a.size(), b.size());
  std::vector<double> ra = a.as_reals();
  std::vector<double> rb = b.as_reals();
  if (ra.size() != target) ra = interpolate(ra, target).values;
  if (rb.size() != target) rb = interpolate(rb, target).values;

  Comparison out;
  out.common_len = target;
  out.similarity = cosine_similarity(ra, rb);
  out.dissimilarity = 1.0 - out.similarity;
  return out;
}

}  // namespace tlsprint
