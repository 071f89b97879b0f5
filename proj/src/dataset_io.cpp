#include "nge/dataset_io.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "json.hpp"
#include "nge/simplify.hpp"

namespace nge::io {

namespace {

using nlohmann::json;

json edge_set_to_json(const EdgeSet& edges) {
  json arr = json::array();
  for (const auto& [src, dst] : edges) {
    arr.push_back(json::array({src, dst}));
  }
  return arr;
}

EdgeSet edge_set_from_json(const json& arr) {
  EdgeSet out;
  for (const auto& e : arr) {
    out.emplace(e.at(0).get<NodeId>(), e.at(1).get<NodeId>());
  }
  return out;
}

json reached_indices(const std::vector<std::uint8_t>& now,
                     const std::vector<std::uint8_t>* before) {
  json arr = json::array();
  for (std::size_t i = 0; i < now.size(); ++i) {
    if (now[i] && (before == nullptr || !(*before)[i])) {
      arr.push_back(i);
    }
  }
  return arr;
}

json record_to_json(const DatasetRecord& rec) {
  json j;
  j["nodes"] = rec.graph.node_count();
  json edges = json::array();
  for (const Edge& e : rec.graph.edges()) {
    edges.push_back(json::array({e.src, e.dst, e.feature}));
  }
  j["edges"] = std::move(edges);

  json truth;
  truth["transitive_edges"] = edge_set_to_json(rec.truth.transitive_edges);
  truth["tip_nodes"] = rec.truth.tip_nodes;
  truth["tip_edges"] = edge_set_to_json(rec.truth.tip_edges);
  truth["bubble_edges"] = edge_set_to_json(rec.truth.bubble_removable_edges);
  truth["backbone"] = rec.truth.backbone_nodes;
  j["truth"] = std::move(truth);

  json traces = json::array();
  for (const auto& trace : rec.traces) {
    json t;
    t["algorithm"] = algorithm_name(trace.algorithm);
    json steps = json::array();
    for (std::size_t s = 0; s < trace.steps.size(); ++s) {
      const auto* before = s == 0 ? nullptr : &trace.steps[s - 1].reached;
      steps.push_back(reached_indices(trace.steps[s].reached, before));
    }
    t["steps"] = std::move(steps);
    traces.push_back(std::move(t));
  }
  j["traces"] = std::move(traces);
  return j;
}

DatasetRecord record_from_json(const json& j) {
  DatasetRecord rec;
  const auto nodes = j.at("nodes").get<NodeId>();
  std::vector<Edge> edges;
  for (const auto& e : j.at("edges")) {
    edges.push_back(
        {e.at(0).get<NodeId>(), e.at(1).get<NodeId>(), e.at(2).get<double>()});
  }

  const json& truth = j.at("truth");
  rec.truth.transitive_edges = edge_set_from_json(truth.at("transitive_edges"));
  for (const auto& v : truth.at("tip_nodes")) {
    rec.truth.tip_nodes.insert(v.get<NodeId>());
  }
  rec.truth.tip_edges = edge_set_from_json(truth.at("tip_edges"));
  rec.truth.bubble_removable_edges =
      edge_set_from_json(truth.at("bubble_edges"));
  rec.truth.backbone_nodes =
      truth.at("backbone").get<std::vector<NodeId>>();

  rec.graph = AssemblyGraph::build(nodes, std::move(edges));
  rec.graph.set_annotations(rec.truth);

  for (const auto& t : j.at("traces")) {
    traces::ExecutionTrace trace;
    trace.algorithm = algorithm_from_name(t.at("algorithm").get<std::string>());
    std::vector<std::uint8_t> reached(nodes, 0);
    for (const auto& step : t.at("steps")) {
      for (const auto& idx : step) {
        const auto v = idx.get<NodeId>();
        if (v >= nodes) {
          throw std::runtime_error("trace step index " + std::to_string(v) +
                                   " out of range");
        }
        reached[v] = 1;
      }
      trace.steps.push_back({reached, 1});
    }
    if (trace.steps.empty()) {
      throw std::runtime_error("trace with no steps");
    }
    trace.steps.back().continue_flag = 0;
    trace.is_source = trace.steps.front().reached;
    rec.traces.push_back(std::move(trace));
  }
  return rec;
}

}  // namespace

void save_dataset(const std::string& path, const DatasetHeader& header,
                  const std::vector<DatasetRecord>& records) {
  if (header.count != records.size()) {
    throw std::invalid_argument("dataset header count " +
                                std::to_string(header.count) +
                                " does not match " +
                                std::to_string(records.size()) + " records");
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) {
      throw std::runtime_error("cannot write dataset: " + tmp);
    }
    json head;
    head["format"] = "nge-dataset";
    head["version"] = header.version;
    head["count"] = header.count;
    head["meta"] = header.meta;
    out << head.dump() << "\n";
    for (const DatasetRecord& rec : records) {
      out << record_to_json(rec).dump() << "\n";
    }
    out.flush();
    if (!out) {
      throw std::runtime_error("failed writing dataset: " + tmp);
    }
  }
  std::filesystem::rename(tmp, path);
}

std::pair<DatasetHeader, std::vector<DatasetRecord>> load_dataset(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open dataset: " + path);
  }
  std::string line;
  std::size_t line_no = 0;
  auto next_json = [&](const char* what) {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty()) {
        try {
          return json::parse(line);
        } catch (const json::parse_error& e) {
          throw std::runtime_error("dataset line " + std::to_string(line_no) +
                                   ": " + e.what());
        }
      }
    }
    throw std::runtime_error("dataset truncated: expected " +
                             std::string(what) + " after line " +
                             std::to_string(line_no));
  };

  json head = next_json("header");
  if (head.value("format", "") != "nge-dataset") {
    throw std::runtime_error("not an nge-dataset file: " + path);
  }
  DatasetHeader header;
  header.version = head.at("version").get<std::uint32_t>();
  if (header.version != kDatasetVersion) {
    throw std::runtime_error(
        "dataset version " + std::to_string(header.version) +
        " is not readable by this build (version " +
        std::to_string(kDatasetVersion) + ")");
  }
  header.count = head.at("count").get<std::uint64_t>();
  if (head.contains("meta")) {
    header.meta =
        head.at("meta").get<std::map<std::string, std::string>>();
  }

  std::vector<DatasetRecord> records;
  records.reserve(header.count);
  for (std::uint64_t i = 0; i < header.count; ++i) {
    json j = next_json("record");
    try {
      records.push_back(record_from_json(j));
    } catch (const json::exception& e) {
      throw std::runtime_error("dataset line " + std::to_string(line_no) +
                               ": " + e.what());
    }
  }
  return {std::move(header), std::move(records)};
}

}  // namespace nge::io
