#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tlsprint/flow.hpp"
#include "tlsprint/length_vector.hpp"
#include "tlsprint/pcap.hpp"
#include "tlsprint/tls.hpp"

namespace tlsprint {

struct ExtractOptions {
  Mode mode = Mode::frame;
  std::optional<std::uint16_t> port_filter = default_https_port;
  DirectionMode direction = DirectionMode::both;
  bool tls_only = false;  // frame mode: drop frames without TCP payload
  ContentTypeSet include = ContentTypeSet::defaults();  // record mode
  bool merge_flows = false;
};

struct ExtractedVector {
  FlowKey key;
  LengthVector vector;
  std::size_t frame_count = 0;
  std::optional<std::string> suite_fingerprint;
  std::optional<ClientHelloSummary> client_hello;
};

struct ExtractResult {
  std::vector<ExtractedVector> vectors;  // flow key order, or merge order
  std::size_t flow_count = 0;
  SkipTally skipped;
  std::optional<Issue> capture_issue;  // from parse_pcap
  std::vector<Issue> flow_issues;      // flows that produced no vector, parser warnings
};

/// Turns captured frames into one length vector per selected flow (or per
/// merged server session).
ExtractResult extract_vectors(const std::vector<CaptureFrame>& frames, const ExtractOptions& options);

/// parse_pcap followed by extract_vectors over whatever frames were read.
ExtractResult extract_vectors(ByteView pcap_bytes, const ExtractOptions& options);

}  // namespace tlsprint
