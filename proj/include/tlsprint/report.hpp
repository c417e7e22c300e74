#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tlsprint/fingerprint_db.hpp"

namespace tlsprint {

/// Per-url comparison figures published for the three desktop browsers over
/// six pages, together with the mean dissimilarity quoted in the summary.
struct PublishedPair {
  std::string_view first;
  std::string_view second;
  std::array<double, 6> similarity;
  std::array<double, 6> dissimilarity;
  double quoted_mean_dissimilarity;
};

inline constexpr std::array<PublishedPair, 3> published_pairs{{
    {"Chrome", "Edge", {0.480, 0.771, 0.957, 0.427, 0.999, 0.601},
     {0.520, 0.229, 0.043, 0.573, 0.001, 0.399}, 0.3094},
    {"Chrome", "Firefox", {0.559, 0.539, 0.950, 0.526, 0.608, 0.801},
     {0.441, 0.461, 0.050, 0.474, 0.392, 0.199}, 0.3357},
    {"Edge", "Firefox", {0.861, 0.620, 0.932, 0.507, 0.601, 0.509},
     {0.139, 0.380, 0.068, 0.493, 0.399, 0.491}, 0.3277},
}};

/// Quoted summary means that differ from the mean of their own per-url row
/// by more than this many percentage points are called out.
inline constexpr double published_mean_flag_points = 0.5;

/// Footnotes comparing the published summary means with the means of the
/// published per-url rows.
std::vector<std::string> published_footnotes();

enum class ReportFormat { table, csv, json };

std::optional<ReportFormat> parse_report_format(std::string_view text) noexcept;

/// Aligned similarity table, dissimilarity table and mean summary; cells at
/// three decimals, footnotes last.
std::string render_table(const std::vector<PairReport>& reports);

/// `pair,url,similarity,dissimilarity` rows, a blank line, then
/// `pair,mean_dissimilarity` rows.
std::string render_csv(const std::vector<PairReport>& reports);

/// Full-precision JSON document including the footnotes.
nlohmann::json render_json(const std::vector<PairReport>& reports, Mode mode,
                           ResampleStrategy strategy = ResampleStrategy::shorter_up);

std::string pair_label(const PairReport& report);

std::string_view to_string(ResampleStrategy strategy) noexcept;
std::optional<ResampleStrategy> parse_resample_strategy(std::string_view text) noexcept;

/// Fixed-point text with `decimals` digits.
std::string format_fixed(double value, int decimals);

}  // namespace tlsprint
