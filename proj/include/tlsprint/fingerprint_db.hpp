#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "tlsprint/error.hpp"
#include "tlsprint/length_vector.hpp"
#include "tlsprint/metrics.hpp"

namespace tlsprint {

struct FingerprintRecord {
  std::string browser;
  std::string url;
  Mode mode = Mode::frame;
  LengthVector vector;
  std::optional<std::string> suite_fingerprint;

  bool operator==(const FingerprintRecord&) const = default;
};

struct RecordKey {
  std::string browser;
  std::string url;
  Mode mode = Mode::frame;

  auto operator<=>(const RecordKey&) const = default;
};

/// Labelled length vectors, unique per (browser, url, mode).
class FingerprintDb {
public:
  /// Inserts or replaces. Returns true when an existing record was replaced.
  bool add(FingerprintRecord record);

  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }

  const FingerprintRecord* find(const RecordKey& key) const;

  /// Records in key order.
  std::vector<const FingerprintRecord*> records(std::optional<Mode> mode = std::nullopt) const;

  /// Sorted distinct browser labels present in `mode`.
  std::vector<std::string> browsers(Mode mode) const;

  bool operator==(const FingerprintDb&) const = default;

private:
  std::map<RecordKey, FingerprintRecord> records_;
};

struct UrlComparison {
  std::string url;
  double similarity = 0.0;
  double dissimilarity = 0.0;
};

struct PairReport {
  std::pair<std::string, std::string> browser_pair;
  std::vector<UrlComparison> per_url;
  double mean_dissimilarity = 0.0;
};

/// Builds a report from precomputed rows; the mean is taken over all rows.
PairReport summarize_pair(std::string first, std::string second, std::vector<UrlComparison> rows);

/// One report per unordered pair of browsers that share at least one url in
/// `mode`. Rows follow natural url order. Throws Error(insufficient_data)
/// when fewer than two browsers exist or no pair shares a url.
std::vector<PairReport> pairwise_report(const FingerprintDb& db, Mode mode,
                                        ResampleStrategy strategy = ResampleStrategy::shorter_up);

struct Candidate {
  std::string browser;
  double best_similarity = 0.0;
  std::string matched_url;
};

struct ClassificationResult {
  std::vector<Candidate> ranked;  // similarity descending, ties by browser label
  std::string decision;
  double margin = 0.0;  // rank 1 minus rank 2; rank 1 similarity when alone
};

/// Nearest stored vector per browser by cosine similarity. Throws
/// Error(empty_database) when the db holds nothing in `mode`.
ClassificationResult classify(const FingerprintDb& db, const LengthVector& unknown, Mode mode,
                              ResampleStrategy strategy = ResampleStrategy::shorter_up);

struct LoadResult {
  FingerprintDb db;
  std::vector<Issue> issues;  // one per rejected line, naming its line number

  bool ok() const noexcept { return issues.empty(); }
};

/// JSON lines, one record per line. Throws Error(io_failure).
void save(const FingerprintDb& db, const std::filesystem::path& path);
LoadResult load(const std::filesystem::path& path);

std::string to_json_line(const FingerprintRecord& record);
/// Throws Error(malformed_record).
FingerprintRecord record_from_json_line(const std::string& line);

/// "url-2" sorts before "url-10".
bool natural_less(const std::string& x, const std::string& y);

}  // namespace tlsprint
