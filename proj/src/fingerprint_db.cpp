#include "tlsprint/fingerprint_db.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>

#include <json.hpp>

namespace tlsprint {

using nlohmann::json;

bool FingerprintDb::add(FingerprintRecord record) {
  RecordKey key{record.browser, record.url, record.mode};
  auto [it, inserted] = records_.insert_or_assign(std::move(key), std::move(record));
  return !inserted;
}

const FingerprintRecord* FingerprintDb::find(const RecordKey& key) const {
  const auto it = records_.find(key);
  return it == records_.end() ? nullptr : &it->second;
}

std::vector<const FingerprintRecord*> FingerprintDb::records(std::optional<Mode> mode) const {
  std::vector<const FingerprintRecord*> out;
  out.reserve(records_.size());
  for (const auto& [key, record] : records_) {
    if (!mode || key.mode == *mode) out.push_back(&record);
  }
  return out;
}

std::vector<std::string> FingerprintDb::browsers(Mode mode) const {
  std::set<std::string> names;
  for (const auto& [key, record] : records_) {
    if (key.mode == mode) names.insert(key.browser);
  }
  return {names.begin(), names.end()};
}

bool natural_less(const std::string& x, const std::string& y) {
  std::size_t i = 0;
  std::size_t j = 0;
  const auto digit = [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; };
  while (i < x.size() && j < y.size()) {
    if (digit(x[i]) && digit(y[j])) {
      std::size_t ie = i;
      std::size_t je = j;
      while (ie < x.size() && digit(x[ie])) ++ie;
      while (je < y.size() && digit(y[je])) ++je;
      // Compare numerically by stripping leading zeros then by width.
      std::size_t is = i;
      std::size_t js = j;
      while (is + 1 < ie && x[is] == '0') ++is;
      while (js + 1 < je && y[js] == '0') ++js;
      const std::size_t xl = ie - is;
      const std::size_t yl = je - js;
      if (xl != yl) return xl < yl;
      const int c = x.compare(is, xl, y, js, yl);
      if (c != 0) return c < 0;
      i = ie;
      j = je;
      continue;
    }
    if (x[i] != y[j]) return x[i] < y[j];
    ++i;
    ++j;
  }
  if ((x.size() - i) != (y.size() - j)) return (x.size() - i) < (y.size() - j);
  return x < y;
}

PairReport summarize_pair(std::string first, std::string second, std::vector<UrlComparison> rows) {
  PairReport report;
  report.browser_pair = {std::move(first), std::move(second)};
  double total = 0.0;
  for (const UrlComparison& row : rows) total += row.dissimilarity;
  report.mean_dissimilarity = rows.empty() ? 0.0 : total / static_cast<double>(rows.size());
  report.per_url = std::move(rows);
  return report;
}

std::vector<PairReport> pairwise_report(const FingerprintDb& db, Mode mode,
                                        ResampleStrategy strategy) {
  const std::vector<std::string> browsers = db.browsers(mode);
  if (browsers.size() < 2) {
    throw Error(ErrorCode::insufficient_data,
                std::to_string(browsers.size()) + " browser(s) in " + std::string(to_string(mode)) +
                    " mode; at least 2 are needed");
  }

  std::map<std::string, std::map<std::string, const FingerprintRecord*>> by_browser;
  for (const FingerprintRecord* rec : db.records(mode)) {
    by_browser[rec->browser][rec->url] = rec;
  }

  std::vector<PairReport> reports;
  for (std::size_t i = 0; i < browsers.size(); ++i) {
    for (std::size_t k = i + 1; k < browsers.size(); ++k) {
      const auto& left = by_browser[browsers[i]];
      const auto& right = by_browser[browsers[k]];
      std::vector<std::string> shared;
      for (const auto& [url, rec] : left) {
        if (right.count(url) != 0) shared.push_back(url);
      }
      if (shared.empty()) continue;
      std::sort(shared.begin(), shared.end(), natural_less);

      std::vector<UrlComparison> rows;
      rows.reserve(shared.size());
      for (const std::string& url : shared) {
        const Comparison c = compare(left.at(url)->vector, right.at(url)->vector, strategy);
        rows.push_back(UrlComparison{url, c.similarity, c.dissimilarity});
      }
      reports.push_back(summarize_pair(browsers[i], browsers[k], std::move(rows)));
    }
  }
  if (reports.empty()) {
    throw Error(ErrorCode::insufficient_data, "no two browsers share a url");
  }
  return reports;
}

ClassificationResult classify(const FingerprintDb& db, const LengthVector& unknown, Mode mode,
                              ResampleStrategy strategy) {
  const auto stored = db.records(mode);
  if (stored.empty()) {
    throw Error(ErrorCode::empty_database, "no " + std::string(to_string(mode)) + " fingerprints");
  }

  std::map<std::string, Candidate> best;
  std::vector<const FingerprintRecord*> ordered(stored.begin(), stored.end());
  std::sort(ordered.begin(), ordered.end(), [](const auto* x, const auto* y) {
    if (x->browser != y->browser) return x->browser < y->browser;
    return natural_less(x->url, y->url);
  });
  for (const FingerprintRecord* rec : ordered) {
    if (rec->vector.size() < 2) continue;
    const double s = compare(unknown, rec->vector, strategy).similarity;
    auto [it, inserted] = best.try_emplace(rec->browser, Candidate{rec->browser, s, rec->url});
    if (!inserted && s > it->second.best_similarity) {
      it->second.best_similarity = s;
      it->second.matched_url = rec->url;
    }
  }
  if (best.empty()) {
    throw Error(ErrorCode::empty_database, "no comparable fingerprints (all shorter than 2)");
  }

  ClassificationResult result;
  for (auto& [name, candidate] : best) result.ranked.push_back(std::move(candidate));
  std::stable_sort(result.ranked.begin(), result.ranked.end(),
                   [](const Candidate& x, const Candidate& y) {
                     if (x.best_similarity != y.best_similarity) {
                       return x.best_similarity > y.best_similarity;
                     }
                     return x.browser < y.browser;
                   });
  result.decision = result.ranked.front().browser;
  result.margin = result.ranked.size() > 1
                      ? result.ranked[0].best_similarity - result.ranked[1].best_similarity
                      : result.ranked[0].best_similarity;
  return result;
}

std::string to_json_line(const FingerprintRecord& record) {
  json j;
  j["browser"] = record.browser;
  j["url"] = record.url;
  j["mode"] = std::string(to_string(record.mode));
  j["lengths"] = std::vector<std::uint32_t>(record.vector.values().begin(),
                                            record.vector.values().end());
  if (record.suite_fingerprint) j["suite_fingerprint"] = *record.suite_fingerprint;
  return j.dump();
}

FingerprintRecord record_from_json_line(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::malformed_record, std::string("invalid JSON: ") + e.what());
  }
  try {
    if (!j.is_object()) throw Error(ErrorCode::malformed_record, "line is not a JSON object");
    const auto mode = parse_mode(j.at("mode").get<std::string>());
    if (!mode) throw Error(ErrorCode::malformed_record, "unknown mode");
    std::vector<std::uint32_t> lengths;
    for (const json& v : j.at("lengths")) {
      if (!v.is_number_unsigned()) {
        throw Error(ErrorCode::malformed_record, "lengths must be positive integers");
      }
      lengths.push_back(v.get<std::uint32_t>());
    }
    std::optional<std::string> suite;
    if (j.contains("suite_fingerprint") && !j["suite_fingerprint"].is_null()) {
      suite = j["suite_fingerprint"].get<std::string>();
    }
    return FingerprintRecord{j.at("browser").get<std::string>(), j.at("url").get<std::string>(),
                             *mode, LengthVector(std::move(lengths)), std::move(suite)};
  } catch (const json::exception& e) {
    throw Error(ErrorCode::malformed_record, e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::malformed_record) throw;
    throw Error(ErrorCode::malformed_record, e.what());
  }
}

void save(const FingerprintDb& db, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::io_failure, "cannot write " + path.string());
  for (const FingerprintRecord* rec : db.records()) {
    out << to_json_line(*rec) << '\n';
  }
  out.flush();
  if (!out) throw Error(ErrorCode::io_failure, "write failed for " + path.string());
}

LoadResult load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_failure, "cannot open " + path.string());
  LoadResult result;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      result.db.add(record_from_json_line(line));
    } catch (const Error& e) {
      result.issues.push_back(Issue{ErrorCode::malformed_record,
                                    path.string() + ":" + std::to_string(number) + ": " + e.what()});
    }
  }
  if (in.bad()) throw Error(ErrorCode::io_failure, "read failed for " + path.string());
  return result;
}

}  // namespace tlsprint
