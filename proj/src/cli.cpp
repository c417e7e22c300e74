#include "tlsprint/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tlsprint/fingerprint_db.hpp"
#include "tlsprint/pipeline.hpp"
#include "tlsprint/report.hpp"
#include "tlsprint/synth.hpp"

namespace tlsprint::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum class Level { error = 0, warn = 1, info = 2, debug = 3 };

// Diagnostics sink; verbosity comes from TLSPRINT_LOG.
class Log {
public:
  explicit Log(std::ostream& err) : err_(err) {
    if (const char* env = std::getenv("TLSPRINT_LOG")) {
      const std::string v = env;
      if (v == "error" || v == "quiet") level_ = Level::error;
      else if (v == "warn") level_ = Level::warn;
      else if (v == "info") level_ = Level::info;
      else if (v == "debug") level_ = Level::debug;
    }
  }

  void error(const std::string& m) { emit(Level::error, "error", m); }
  void warn(const std::string& m) { emit(Level::warn, "warning", m); }
  void info(const std::string& m) { emit(Level::info, "info", m); }
  void debug(const std::string& m) { emit(Level::debug, "debug", m); }

private:
  void emit(Level l, const char* tag, const std::string& m) {
    if (static_cast<int>(l) <= static_cast<int>(level_)) err_ << "tlsprint: " << tag << ": " << m << '\n';
  }

  std::ostream& err_;
  Level level_ = Level::info;
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string joined_lengths(const LengthVector& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i != 0) out += ' ';
    out += std::to_string(v[i]);
  }
  return out;
}

struct ExtractArgs {
  std::vector<std::string> pcaps;
  std::string browser;
  std::string url;
  std::string mode = "frame";
  int port = default_https_port;
  std::string direction = "both";
  std::string include = "hs,app";
  bool merge_flows = false;
  bool tls_only = false;
  std::string format = "csv";
  std::string output;
};

struct ReportArgs {
  std::string db;
  std::string mode = "frame";
  std::string format = "table";
  std::string resample = "shorter_up";
};

struct ClassifyArgs {
  std::string db;
  std::string pcap;
  std::string vector;
  double margin = 0.05;
  std::string mode = "frame";
  std::string resample = "shorter_up";
  int port = default_https_port;
  bool merge_flows = false;
};

struct SynthArgs {
  std::string profile;
  std::uint64_t seed = 0;
  std::string output;
  std::string plan;
};

std::optional<ExtractOptions> build_options(const std::string& mode, int port,
                                            const std::string& direction, const std::string& include,
                                            bool merge, bool tls_only, Log& log) {
  ExtractOptions opts;
  const auto m = parse_mode(mode);
  const auto d = parse_direction_mode(direction);
  const auto inc = ContentTypeSet::parse(include);
  if (!m) log.error("unknown mode '" + mode + "' (frame|record)");
  if (!d) log.error("unknown direction '" + direction + "' (both|client|server)");
  if (!inc || inc->empty()) log.error("bad --include '" + include + "' (hs,app,ccs,alert)");
  if (port < 0 || port > 65535) log.error("port out of range");
  if (!m || !d || !inc || inc->empty() || port < 0 || port > 65535) return std::nullopt;
  opts.mode = *m;
  opts.direction = *d;
  opts.include = *inc;
  opts.merge_flows = merge;
  opts.tls_only = tls_only;
  opts.port_filter = port == 0 ? std::nullopt : std::optional<std::uint16_t>(static_cast<std::uint16_t>(port));
  return opts;
}

struct FileResult {
  std::string path;
  std::optional<ExtractResult> result;
  std::string io_error;
};

std::vector<FileResult> extract_files(const std::vector<std::string>& paths, const ExtractOptions& opts) {
  std::vector<std::future<FileResult>> jobs;
  jobs.reserve(paths.size());
  for (const std::string& path : paths) {
    jobs.push_back(std::async(std::launch::async, [path, &opts] {
      FileResult fr{path, std::nullopt, {}};
      try {
        const Bytes data = read_file_bytes(path);
        fr.result = extract_vectors(ByteView(data), opts);
      } catch (const Error& e) {
        fr.io_error = e.what();
      }
      return fr;
    }));
  }
  std::vector<FileResult> out;
  for (auto& job : jobs) out.push_back(job.get());
  return out;
}

void report_file(const FileResult& fr, Log& log) {
  const ExtractResult& r = *fr.result;
  if (r.capture_issue) {
    log.error(fr.path + ": " + std::string(to_string(r.capture_issue->code)) + ": " +
              r.capture_issue->message);
  }
  log.info(fr.path + ": " + std::to_string(r.flow_count) + " flow(s), " +
           std::to_string(r.vectors.size()) + " vector(s); skipped frames: non-ip " +
           std::to_string(r.skipped.non_ip) + ", non-tcp " + std::to_string(r.skipped.non_tcp) +
           ", malformed " + std::to_string(r.skipped.malformed) + ", other port " +
           std::to_string(r.skipped.port_filtered));
  for (const Issue& issue : r.flow_issues) log.debug(fr.path + ": " + issue.message);
}

int cmd_extract(const ExtractArgs& a, std::ostream& out, Log& log) {
  const auto opts = build_options(a.mode, a.port, a.direction, a.include, a.merge_flows, a.tls_only, log);
  if (!opts) return usage;
  if (a.format != "csv" && a.format != "json") {
    log.error("unknown format '" + a.format + "' (csv|json)");
    return usage;
  }
  if (!a.output.empty() && (a.browser.empty() || a.url.empty())) {
    log.error("--browser and --url are required when writing to a database");
    return usage;
  }
  if (opts->mode == Mode::record) log.info("record types included: " + opts->include.to_string());

  bool parse_failed = false;
  std::vector<FingerprintRecord> rows;
  std::vector<std::size_t> row_frames;
  for (const FileResult& fr : extract_files(a.pcaps, *opts)) {
    if (!fr.result) {
      log.error(fr.io_error);
      parse_failed = true;
      continue;
    }
    report_file(fr, log);
    if (fr.result->capture_issue) parse_failed = true;
    const std::string url = a.url.empty() ? fs::path(fr.path).stem().string() : a.url;
    const std::string browser = a.browser.empty() ? "unknown" : a.browser;
    for (const ExtractedVector& v : fr.result->vectors) {
      rows.push_back(FingerprintRecord{browser, url, opts->mode, v.vector, v.suite_fingerprint});
      row_frames.push_back(v.frame_count);
    }
  }

  if (rows.empty()) {
    log.error("no vectors extracted");
    return parse_failed ? malformed_input : insufficient_data;
  }
  if (parse_failed) log.warn("some inputs failed to parse; writing partial results");

  if (a.output.empty()) {
    if (a.format == "csv") out << "browser,url,mode,lengths\n";
    for (const FingerprintRecord& r : rows) {
      if (a.format == "csv") {
        out << csv_field(r.browser) << ',' << csv_field(r.url) << ',' << to_string(r.mode) << ",\""
            << joined_lengths(r.vector) << "\"\n";
      } else {
        json j = json::parse(to_json_line(r));
        if (r.mode == Mode::record) j["include"] = opts->include.to_string();
        out << j.dump() << '\n';
      }
    }
    return parse_failed ? malformed_input : ok;
  }

  FingerprintDb db;
  if (fs::exists(a.output)) {
    LoadResult loaded = load(a.output);
    for (const Issue& issue : loaded.issues) log.warn(issue.message);
    db = std::move(loaded.db);
  }
  // One record per label: keep the flow with the most frames.
  std::map<RecordKey, std::size_t> chosen;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const RecordKey key{rows[i].browser, rows[i].url, rows[i].mode};
    auto [it, inserted] = chosen.try_emplace(key, i);
    if (!inserted && row_frames[i] > row_frames[it->second]) it->second = i;
  }
  if (chosen.size() < rows.size()) {
    log.warn(std::to_string(rows.size()) + " flows share " + std::to_string(chosen.size()) +
             " label(s); keeping the largest flow per label (see --merge-flows)");
  }
  for (const auto& [key, index] : chosen) {
    if (db.add(rows[index])) log.info("replaced " + key.browser + "/" + key.url + "/" + std::string(to_string(key.mode)));
  }
  try {
    save(db, a.output);
  } catch (const Error& e) {
    log.error(e.what());
    return malformed_input;
  }
  log.info("wrote " + std::to_string(db.size()) + " record(s) to " + a.output);
  return parse_failed ? malformed_input : ok;
}

std::optional<FingerprintDb> load_db(const std::string& path, Log& log) {
  try {
    LoadResult loaded = load(path);
    for (const Issue& issue : loaded.issues) log.warn(issue.message);
    return std::move(loaded.db);
  } catch (const Error& e) {
    log.error(e.what());
    return std::nullopt;
  }
}

int cmd_report(const ReportArgs& a, std::ostream& out, Log& log) {
  const auto mode = parse_mode(a.mode);
  const auto format = parse_report_format(a.format);
  const auto strategy = parse_resample_strategy(a.resample);
  if (!mode || !format || !strategy) {
    log.error("bad --mode, --format or --resample value");
    return usage;
  }
  const auto db = load_db(a.db, log);
  if (!db) return malformed_input;
  std::vector<PairReport> reports;
  try {
    reports = pairwise_report(*db, *mode, *strategy);
  } catch (const Error& e) {
    log.error(e.what());
    return e.code() == ErrorCode::insufficient_data ? insufficient_data : malformed_input;
  }
  switch (*format) {
    case ReportFormat::table: out << render_table(reports); break;
    case ReportFormat::csv: out << render_csv(reports); break;
    case ReportFormat::json: out << render_json(reports, *mode, *strategy).dump(2) << '\n'; break;
  }
  return ok;
}

std::optional<LengthVector> read_vector_file(const std::string& path, Log& log) {
  std::ifstream in(path);
  if (!in) {
    log.error("cannot open " + path);
    return std::nullopt;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  try {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
      const std::string line = text.substr(first, text.find('\n', first) - first);
      return record_from_json_line(line).vector;
    }
    std::vector<LengthVector::value_type> values;
    std::string token;
    for (char c : text + " ") {
      if (std::isdigit(static_cast<unsigned char>(c))) {
        token += c;
      } else if (c == ' ' || c == ',' || c == '\n' || c == '\t' || c == '\r') {
        if (!token.empty()) values.push_back(static_cast<LengthVector::value_type>(std::stoul(token)));
        token.clear();
      } else {
        throw Error(ErrorCode::invalid_vector, std::string("unexpected character '") + c + "'");
      }
    }
    return LengthVector(std::move(values));
  } catch (const std::exception& e) {
    log.error(path + ": " + e.what());
    return std::nullopt;
  }
}

int cmd_classify(const ClassifyArgs& a, std::ostream& out, Log& log) {
  const auto mode = parse_mode(a.mode);
  const auto strategy = parse_resample_strategy(a.resample);
  if (!mode || !strategy) {
    log.error("bad --mode or --resample value");
    return usage;
  }
  const auto db = load_db(a.db, log);
  if (!db) return malformed_input;

  std::optional<LengthVector> unknown;
  if (!a.vector.empty()) {
    unknown = read_vector_file(a.vector, log);
    if (!unknown) return malformed_input;
  } else {
    const auto opts = build_options(a.mode, a.port, "both", "hs,app", a.merge_flows, false, log);
    if (!opts) return usage;
    const auto files = extract_files({a.pcap}, *opts);
    const FileResult& fr = files.front();
    if (!fr.result) {
      log.error(fr.io_error);
      return malformed_input;
    }
    report_file(fr, log);
    if (fr.result->capture_issue && fr.result->vectors.empty()) return malformed_input;
    const auto& vs = fr.result->vectors;
    if (vs.empty()) {
      log.error("no flows selected in " + a.pcap);
      return insufficient_data;
    }
    const auto largest = std::max_element(vs.begin(), vs.end(), [](const auto& x, const auto& y) {
      return x.frame_count < y.frame_count;
    });
    if (vs.size() > 1) log.info("classifying the largest of " + std::to_string(vs.size()) + " flows");
    unknown = largest->vector;
  }

  ClassificationResult result;
  try {
    result = classify(*db, *unknown, *mode, *strategy);
  } catch (const Error& e) {
    log.error(e.what());
    return e.code() == ErrorCode::empty_database ? insufficient_data : malformed_input;
  }
  out << "rank,browser,similarity,matched_url\n";
  for (std::size_t i = 0; i < result.ranked.size(); ++i) {
    const Candidate& c = result.ranked[i];
    out << i + 1 << ',' << csv_field(c.browser) << ',' << format_fixed(c.best_similarity, 3) << ','
        << csv_field(c.matched_url) << '\n';
  }
  out << "decision: " << result.decision << " (margin " << format_fixed(result.margin, 3) << ")\n";
  if (result.margin < a.margin) {
    log.warn("ambiguous classification: margin " + format_fixed(result.margin, 6) + " < " +
             format_fixed(a.margin, 6));
    return ambiguous;
  }
  return ok;
}

int cmd_synth(const SynthArgs& a, Log& log) {
  synth::BrowserProfile profile;
  try {
    std::ifstream in(a.profile);
    if (!in) throw Error(ErrorCode::io_failure, "cannot open " + a.profile);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::invalid_profile, e.what());
    }
    profile = synth::profile_from_json(j);
  } catch (const Error& e) {
    log.error(e.what());
    return malformed_input;
  }
  const synth::SynthSession session = synth::synth_session(profile, a.seed);
  const std::string plan_path =
      a.plan.empty() ? fs::path(a.output).replace_extension(".plan.json").string() : a.plan;
  std::ofstream pcap_out(a.output, std::ios::binary | std::ios::trunc);
  pcap_out.write(reinterpret_cast<const char*>(session.pcap.data()),
                 static_cast<std::streamsize>(session.pcap.size()));
  std::ofstream plan_out(plan_path, std::ios::trunc);
  plan_out << synth::plan_to_json(session.plan).dump(2) << '\n';
  pcap_out.flush();
  plan_out.flush();
  if (!pcap_out || !plan_out) {
    log.error("failed writing " + a.output + " or " + plan_path);
    return malformed_input;
  }
  log.info("wrote " + std::to_string(session.frames.size()) + " frames to " + a.output + ", plan to " +
           plan_path);
  return ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Log log(err);
  CLI::App app{"Browser fingerprinting from encrypted TLS traffic lengths", "tlsprint"};
  app.require_subcommand(1);

  ExtractArgs ea;
  auto* extract = app.add_subcommand("extract", "Extract length vectors from pcap files");
  extract->add_option("pcaps", ea.pcaps, "Capture files")->required();
  extract->add_option("--browser", ea.browser, "Browser label");
  extract->add_option("--url", ea.url, "Page label (default: capture file stem)");
  extract->add_option("--mode", ea.mode, "frame|record");
  extract->add_option("--port", ea.port, "Server port filter (0 disables)");
  extract->add_option("--direction", ea.direction, "both|client|server");
  extract->add_option("--include", ea.include, "Record types for record mode: hs,app,ccs,alert or all");
  extract->add_flag("--merge-flows", ea.merge_flows, "Merge flows that share a server endpoint");
  extract->add_flag("--tls-only", ea.tls_only, "Frame mode: skip frames without TCP payload");
  extract->add_option("--format", ea.format, "csv|json (when printing to stdout)");
  extract->add_option("-o,--output", ea.output, "Fingerprint database (JSON lines) to update");

  ReportArgs ra;
  auto* report = app.add_subcommand("report", "Pairwise browser similarity report");
  report->add_option("--db", ra.db, "Fingerprint database")->required();
  report->add_option("--mode", ra.mode, "frame|record");
  report->add_option("--format", ra.format, "table|csv|json");
  report->add_option("--resample", ra.resample, "shorter_up|longer_down");

  ClassifyArgs ca;
  auto* classify_cmd = app.add_subcommand("classify", "Classify an unknown trace");
  classify_cmd->add_option("--db", ca.db, "Fingerprint database")->required();
  auto* pcap_opt = classify_cmd->add_option("--pcap", ca.pcap, "Unknown capture");
  auto* vec_opt = classify_cmd->add_option("--vector", ca.vector, "Unknown vector file");
  pcap_opt->excludes(vec_opt);
  classify_cmd->add_option("--margin", ca.margin, "Minimum rank-1/rank-2 gap");
  classify_cmd->add_option("--mode", ca.mode, "frame|record");
  classify_cmd->add_option("--resample", ca.resample, "shorter_up|longer_down");
  classify_cmd->add_option("--port", ca.port, "Server port filter for --pcap (0 disables)");
  classify_cmd->add_flag("--merge-flows", ca.merge_flows, "Merge flows that share a server endpoint");

  SynthArgs sa;
  auto* synth_cmd = app.add_subcommand("synth", "Synthesize a TLS session capture from a profile");
  synth_cmd->add_option("--profile", sa.profile, "Browser profile JSON")->required();
  synth_cmd->add_option("--seed", sa.seed, "Seed");
  synth_cmd->add_option("-o,--output", sa.output, "Output pcap")->required();
  synth_cmd->add_option("--plan", sa.plan, "Output plan JSON (default: <output>.plan.json)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "tlsprint: " << e.what() << '\n';
    return usage;
  }

  if (*extract) return cmd_extract(ea, out, log);
  if (*report) return cmd_report(ra, out, log);
  if (*classify_cmd) {
    if (ca.pcap.empty() == ca.vector.empty()) {
      log.error("classify needs exactly one of --pcap or --vector");
      return usage;
    }
    return cmd_classify(ca, out, log);
  }
  if (*synth_cmd) return cmd_synth(sa, log);
  return usage;
}

}  // namespace tlsprint::cli
