#include "nge/gfa.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace nge::gfa {

namespace {

[[noreturn]] void fail(std::size_t line_no, const std::string& message) {
  throw std::runtime_error("gfa parse error at line " +
                           std::to_string(line_no) + ": " + message);
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

// Match length of a CIGAR-style overlap: the summed lengths of M, = and X
// runs. "*" or an empty field reads as 0 (unknown overlap).
std::uint64_t match_length(const std::string& overlap, std::size_t line_no) {
  if (overlap.empty() || overlap == "*") {
    return 0;
  }
  std::uint64_t total = 0;
  std::size_t i = 0;
  while (i < overlap.size()) {
    if (!std::isdigit(static_cast<unsigned char>(overlap[i]))) {
      fail(line_no, "malformed overlap '" + overlap + "'");
    }
    std::uint64_t run = 0;
    while (i < overlap.size() &&
           std::isdigit(static_cast<unsigned char>(overlap[i]))) {
      run = run * 10 + static_cast<std::uint64_t>(overlap[i] - '0');
      ++i;
    }
    if (i == overlap.size()) {
      fail(line_no, "overlap '" + overlap + "' ends without an operation");
    }
    switch (overlap[i]) {
      case 'M':
      case '=':
      case 'X':
        total += run;
        break;
      case 'I':
      case 'D':
      case 'N':
      case 'S':
      case 'H':
      case 'P':
        break;
      default:
        fail(line_no, std::string("unknown CIGAR operation '") + overlap[i] +
                          "' in '" + overlap + "'");
    }
    ++i;
  }
  return total;
}

struct PendingEdge {
  NodeId src;
  NodeId dst;
  std::uint64_t match_len;
  std::string raw_overlap;
  std::size_t line_no;
};

}  // namespace

ParsedGfa parse_gfa(std::istream& in) {
  ParsedGfa result;
  std::unordered_map<std::string, std::uint64_t> segment_lengths;
  std::unordered_map<std::string, NodeId> variant_ids;
  std::vector<std::string> names;
  std::vector<std::uint64_t> lengths;
  std::vector<PendingEdge> pending;

  auto variant_node = [&](const std::string& segment, char orient,
                          std::size_t line_no) -> NodeId {
    auto seg = segment_lengths.find(segment);
    if (seg == segment_lengths.end()) {
      fail(line_no, "link references unknown segment '" + segment + "'");
    }
    const std::string key = segment + orient;
    auto it = variant_ids.find(key);
    if (it != variant_ids.end()) {
      return it->second;
    }
    const NodeId id = static_cast<NodeId>(names.size());
    variant_ids.emplace(key, id);
    names.push_back(key);
    lengths.push_back(seg->second);
    return id;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty() || line[0] == '#' || line == "H" ||
        line.rfind("H\t", 0) == 0) {
      continue;
    }
    std::vector<std::string> f = split_tabs(line);
    if (f[0] == "S") {
      if (f.size() < 3 || f[1].empty()) {
        fail(line_no, "segment line needs a name and a sequence");
      }
      const std::string& name = f[1];
      if (segment_lengths.count(name)) {
        fail(line_no, "duplicate segment name '" + name + "'");
      }
      std::uint64_t len = (f[2] == "*") ? 0 : f[2].size();
      for (std::size_t i = 3; i < f.size(); ++i) {
        if (f[i].rfind("LN:i:", 0) == 0) {
          try {
            len = std::stoull(f[i].substr(5));
          } catch (const std::exception&) {
            fail(line_no, "malformed length tag '" + f[i] + "'");
          }
        }
      }
      segment_lengths.emplace(name, len);
      const std::string key = name + '+';
      variant_ids.emplace(key, static_cast<NodeId>(names.size()));
      names.push_back(key);
      lengths.push_back(len);
    } else if (f[0] == "L") {
      if (f.size() < 5) {
        fail(line_no, "link line needs from/orientation/to/orientation");
      }
      if ((f[2] != "+" && f[2] != "-") || (f[4] != "+" && f[4] != "-")) {
        fail(line_no, "orientation must be '+' or '-'");
      }
      const std::string raw = f.size() >= 6 ? f[5] : std::string("*");
      const NodeId src = variant_node(f[1], f[2][0], line_no);
      const NodeId dst = variant_node(f[3], f[4][0], line_no);
      if (src == dst) {
        fail(line_no, "self-link on '" + names[src] + "'");
      }
      pending.push_back({src, dst, match_length(raw, line_no), raw, line_no});
    } else {
      ++result.warning_count;
    }
  }

  std::uint64_t max_match = 0;
  std::map<EdgePair, std::size_t> seen;
  for (const PendingEdge& e : pending) {
    auto [it, inserted] = seen.emplace(EdgePair{e.src, e.dst}, e.line_no);
    if (!inserted) {
      fail(e.line_no, "duplicate link " + names[e.src] + " -> " +
                          names[e.dst] + " (first at line " +
                          std::to_string(it->second) + ")");
    }
    max_match = std::max(max_match, e.match_len);
  }

  std::vector<Edge> edges;
  edges.reserve(pending.size());
  for (const PendingEdge& e : pending) {
    const double feature =
        max_match > 0
            ? static_cast<double>(e.match_len) / static_cast<double>(max_match)
            : 0.0;
    edges.push_back({e.src, e.dst, feature});
    result.doc.edge_overlaps[{e.src, e.dst}] = e.raw_overlap;
  }

  result.graph =
      AssemblyGraph::build(static_cast<NodeId>(names.size()), std::move(edges));
  result.doc.node_names = std::move(names);
  result.doc.node_lengths = std::move(lengths);
  return result;
}

ParsedGfa parse_gfa_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open GFA file: " + path);
  }
  return parse_gfa(in);
}

void write_gfa(const AssemblyGraph& g, const GfaDocument& doc,
               std::ostream& out) {
  if (doc.node_names.size() != g.node_count() ||
      doc.node_lengths.size() != g.node_count()) {
    throw std::invalid_argument("GFA document does not match the graph");
  }
  out << "H\tVN:Z:1.0\n";
  for (NodeId v = 0; v < g.node_count(); ++v) {
    out << "S\t" << doc.node_names[v] << "\t*";
    if (doc.node_lengths[v] > 0) {
      out << "\tLN:i:" << doc.node_lengths[v];
    }
    out << "\n";
  }
  for (const Edge& e : g.edges()) {
    auto it = doc.edge_overlaps.find({e.src, e.dst});
    if (it == doc.edge_overlaps.end()) {
      throw std::invalid_argument("no overlap recorded for edge " +
                                  edge_to_string(e.src, e.dst));
    }
    out << "L\t" << doc.node_names[e.src] << "\t+\t" << doc.node_names[e.dst]
        << "\t+\t" << it->second << "\n";
  }
}

void write_gfa_file(const AssemblyGraph& g, const GfaDocument& doc,
                    const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write GFA file: " + path);
  }
  write_gfa(g, doc, out);
  out.flush();
  if (!out) {
    throw std::runtime_error("failed writing GFA file: " + path);
  }
}

GfaDocument default_document(const AssemblyGraph& g) {
  GfaDocument doc;
  doc.node_names.reserve(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) {
    doc.node_names.push_back("v" + std::to_string(v));
  }
  doc.node_lengths.assign(g.node_count(), 0);
  for (const Edge& e : g.edges()) {
    const auto scaled = static_cast<long long>(std::llround(e.feature * 10000.0));
    doc.edge_overlaps[{e.src, e.dst}] =
        std::to_string(std::max(1LL, scaled)) + "M";
  }
  return doc;
}

}  // namespace nge::gfa
