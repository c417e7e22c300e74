#include "tlsprint/pipeline.hpp"

namespace tlsprint {

ExtractResult extract_vectors(const std::vector<CaptureFrame>& frames, const ExtractOptions& options) {
  ExtractResult result;
  FlowTable table = group_flows(frames, options.port_filter);
  result.skipped = table.skipped;
  result.flow_count = table.flows.size();

  std::vector<Flow> flows;
  if (options.merge_flows) {
    flows = merge_flows_by_server(table.flows);
  } else {
    flows.reserve(table.flows.size());
    for (auto& [key, flow] : table.flows) flows.push_back(std::move(flow));
  }

  for (const Flow& flow : flows) {
    const FlowRecords records = flow_records(flow);
    for (const Issue& issue : records.issues) {
      result.flow_issues.push_back(Issue{issue.code, flow.key.to_string() + ": " + issue.message});
    }
    try {
      LengthVector vector =
          options.mode == Mode::frame
              ? frame_length_vector(flow, FrameSelection{options.direction, options.tls_only})
              : flow_record_length_vector(records, options.include, options.direction);
      ExtractedVector out{flow.key, std::move(vector), flow.frames.size(), std::nullopt,
                          records.client_hello};
      if (records.client_hello) out.suite_fingerprint = suite_list_fingerprint(*records.client_hello);
      result.vectors.push_back(std::move(out));
    } catch (const Error& e) {
      result.flow_issues.push_back(Issue{e.code(), flow.key.to_string() + ": " + e.what()});
    }
  }
  return result;
}

ExtractResult extract_vectors(ByteView pcap_bytes, const ExtractOptions& options) {
  PcapParseResult parsed = parse_pcap(pcap_bytes);
  ExtractResult result = extract_vectors(parsed.frames, options);
  result.capture_issue = std::move(parsed.issue);
  return result;
}

}  // namespace tlsprint
