#include "tlsprint/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace tlsprint {

namespace {

std::vector<std::string> all_urls(const std::vector<PairReport>& reports) {
  std::vector<std::string> urls;
  for (const PairReport& r : reports) {
    for (const UrlComparison& row : r.per_url) {
      if (std::find(urls.begin(), urls.end(), row.url) == urls.end()) urls.push_back(row.url);
    }
  }
  std::sort(urls.begin(), urls.end(), natural_less);
  return urls;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string lpad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

void render_grid(std::ostringstream& os, const std::string& title,
                 const std::vector<PairReport>& reports, const std::vector<std::string>& urls,
                 bool similarity) {
  std::size_t first_width = std::string("Browsers").size();
  for (const PairReport& r : reports) first_width = std::max(first_width, pair_label(r).size());
  std::vector<std::size_t> widths;
  for (const std::string& url : urls) widths.push_back(std::max<std::size_t>(url.size(), 5));

  os << title << '\n';
  os << pad("Browsers", first_width);
  for (std::size_t i = 0; i < urls.size(); ++i) os << "  " << lpad(urls[i], widths[i]);
  os << '\n';
  for (const PairReport& r : reports) {
    os << pad(pair_label(r), first_width);
    for (std::size_t i = 0; i < urls.size(); ++i) {
      const auto it = std::find_if(r.per_url.begin(), r.per_url.end(),
                                   [&](const UrlComparison& row) { return row.url == urls[i]; });
      const std::string cell =
          it == r.per_url.end() ? "-" : format_fixed(similarity ? it->similarity : it->dissimilarity, 3);
      os << "  " << lpad(cell, widths[i]);
    }
    os << '\n';
  }
}

}  // namespace

std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

std::string pair_label(const PairReport& report) {
  return report.browser_pair.first + "-" + report.browser_pair.second;
}

std::string_view to_string(ResampleStrategy strategy) noexcept {
  return strategy == ResampleStrategy::shorter_up ? "shorter_up" : "longer_down";
}

std::optional<ResampleStrategy> parse_resample_strategy(std::string_view text) noexcept {
  if (text == "shorter_up") return ResampleStrategy::shorter_up;
  if (text == "longer_down") return ResampleStrategy::longer_down;
  return std::nullopt;
}

std::optional<ReportFormat> parse_report_format(std::string_view text) noexcept {
  if (text == "table") return ReportFormat::table;
  if (text == "csv") return ReportFormat::csv;
  if (text == "json") return ReportFormat::json;
  return std::nullopt;
}

std::vector<std::string> published_footnotes() {
  std::vector<std::string> notes;
  for (const PublishedPair& p : published_pairs) {
    double sum = 0.0;
    for (double d : p.dissimilarity) sum += d;
    const double table_mean = sum / static_cast<double>(p.dissimilarity.size());
    const double diff_points = (p.quoted_mean_dissimilarity - table_mean) * 100.0;
    std::string note = std::string(p.first) + "-" + std::string(p.second) +
                       ": published summary quotes a mean dissimilarity of " +
                       format_fixed(p.quoted_mean_dissimilarity * 100.0, 2) +
                       "%; its per-url table averages to " + format_fixed(table_mean * 100.0, 2) +
                       "%";
    if (std::fabs(diff_points) > published_mean_flag_points) {
      note += " (deviates by " + format_fixed(std::fabs(diff_points), 2) +
              " points; per-url cells are treated as ground truth)";
    }
    notes.push_back(std::move(note));
  }
  return notes;
}

std::string render_table(const std::vector<PairReport>& reports) {
  const std::vector<std::string> urls = all_urls(reports);
  std::ostringstream os;
  render_grid(os, "Similarity between browsers per url", reports, urls, true);
  os << '\n';
  render_grid(os, "Dissimilarity between browsers per url", reports, urls, false);
  os << '\n';

  std::size_t width = std::string("Browsers").size();
  for (const PairReport& r : reports) width = std::max(width, pair_label(r).size());
  os << "Mean dissimilarity\n";
  os << pad("Browsers", width) << "  mean\n";
  for (const PairReport& r : reports) {
    os << pad(pair_label(r), width) << "  " << format_fixed(r.mean_dissimilarity, 3) << "  ("
       << format_fixed(r.mean_dissimilarity * 100.0, 2) << "% over " << r.per_url.size()
       << " url" << (r.per_url.size() == 1 ? "" : "s") << ")\n";
  }
  os << '\n';
  const auto notes = published_footnotes();
  for (std::size_t i = 0; i < notes.size(); ++i) os << "[" << i + 1 << "] " << notes[i] << '\n';
  return os.str();
}

std::string render_csv(const std::vector<PairReport>& reports) {
  std::ostringstream os;
  os << "pair,url,similarity,dissimilarity\n";
  for (const PairReport& r : reports) {
    for (const UrlComparison& row : r.per_url) {
      os << pair_label(r) << ',' << row.url << ',' << format_fixed(row.similarity, 6) << ','
         << format_fixed(row.dissimilarity, 6) << '\n';
    }
  }
  os << '\n' << "pair,mean_dissimilarity\n";
  for (const PairReport& r : reports) {
    os << pair_label(r) << ',' << format_fixed(r.mean_dissimilarity, 6) << '\n';
  }
  return os.str();
}

nlohmann::json render_json(const std::vector<PairReport>& reports, Mode mode,
                           ResampleStrategy strategy) {
  nlohmann::json j;
  j["mode"] = std::string(to_string(mode));
  j["resampling"] = std::string(to_string(strategy));
  j["pairs"] = nlohmann::json::array();
  for (const PairReport& r : reports) {
    nlohmann::json rows = nlohmann::json::array();
    for (const UrlComparison& row : r.per_url) {
      rows.push_back({{"url", row.url}, {"similarity", row.similarity}, {"dissimilarity", row.dissimilarity}});
    }
    j["pairs"].push_back({{"pair", {r.browser_pair.first, r.browser_pair.second}},
                          {"per_url", std::move(rows)},
                          {"mean_dissimilarity", r.mean_dissimilarity}});
  }
  j["notes"] = published_footnotes();
  return j;
}

}  // namespace tlsprint
