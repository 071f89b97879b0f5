#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "nge/graph.hpp"
#include "nge/traces.hpp"

namespace nge::io {

inline constexpr std::uint32_t kDatasetVersion = 1;

// First line of a dataset file: format marker, version, record count and
// free-form generation metadata (seed, backbone, scale, ...).
struct DatasetHeader {
  std::uint32_t version = kDatasetVersion;
  std::uint64_t count = 0;
  std::map<std::string, std::string> meta;
};

// One generated graph with its planted truth and any number of
// teacher-forcing traces.
struct DatasetRecord {
  AssemblyGraph graph;  // carries the truth as annotations
  GroundTruth truth;
  std::vector<traces::ExecutionTrace> traces;
};

// Line-delimited JSON: one header line, then one record per line. Step
// states are stored as newly-reached node indices (delta encoding); the
// initial step doubles as the source indicator and the final step carries
// continue_flag = 0. Writes go to a temp file renamed into place.
void save_dataset(const std::string& path, const DatasetHeader& header,
                  const std::vector<DatasetRecord>& records);

// Throws std::runtime_error on unreadable files, malformed lines (with the
// line number), a format/version mismatch (naming both versions), or a
// record count that disagrees with the header (truncation).
std::pair<DatasetHeader, std::vector<DatasetRecord>> load_dataset(
    const std::string& path);

}  // namespace nge::io
