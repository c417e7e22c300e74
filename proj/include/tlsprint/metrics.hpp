#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tlsprint/length_vector.hpp"

namespace tlsprint {

struct ResampledVector {
  std::vector<double> values;
  std::size_t source_len = 0;
  std::size_t target_len = 0;
};

/// Piecewise-linear resampling on a normalised index grid: source sample i
/// sits at i/(n-1), output sample j is read at j/(m-1). Both endpoints are
/// reproduced exactly and m == n returns the input unchanged.
///
/// Throws Error(vector_too_short) for fewer than two samples and
/// Error(bad_target_length) for target_len < 2.
ResampledVector interpolate(std::span<const double> source, std::size_t target_len);
ResampledVector interpolate(const LengthVector& source, std::size_t target_len);

/// (a . b) / (|a| |b|). Throws Error(dimension_mismatch) or Error(zero_vector).
double cosine_similarity(std::span<const double> a, std::span<const double> b);

/// 1 - cosine_similarity(a, b).
double cosine_dissimilarity(std::span<const double> a, std::span<const double> b);

enum class ResampleStrategy {
  shorter_up,   // stretch the shorter vector to the longer length
  longer_down,  // shrink the longer vector to the shorter length
};

struct Comparison {
  double similarity = 0.0;
  double dissimilarity = 0.0;
  std::size_t common_len = 0;
};

Comparison compare(const LengthVector& a, const LengthVector& b,
                   ResampleStrategy strategy = ResampleStrategy::shorter_up);

}  // namespace tlsprint
