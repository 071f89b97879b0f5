#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "nge/graph.hpp"

namespace nge::gfa {

// Sidecar metadata that keeps a parsed GFA file re-emittable: display names
// and declared lengths per node id, and the raw overlap field per edge.
struct GfaDocument {
  std::vector<std::string> node_names;
  std::vector<std::uint64_t> node_lengths;  // 0 when unknown
  std::map<EdgePair, std::string> edge_overlaps;
};

struct ParsedGfa {
  AssemblyGraph graph;
  GfaDocument doc;
  std::uint32_t warning_count = 0;  // unrecognized line types skipped
};

// GFA v1 subset reader.
//   S <name> <seq|*> [tags]   declares a segment; its forward variant
//                             "<name>+" becomes a node immediately; length
//                             comes from an LN:i: tag, else the sequence.
//   L <from> <+|-> <to> <+|-> [overlap]  adds one directed edge between the
//                             referenced variants; a "-" variant of a
//                             declared segment is created on first use.
// Edge features are the overlap's match length (sum of CIGAR M/=/X runs)
// normalized by the file's maximum match length; 0 when absent ("*").
// Header (H) and comment (#) lines are skipped silently; any other record
// type is skipped with a warning count. Malformed lines, duplicate segment
// names, links to undeclared segments, duplicate links, and self-links
// throw std::runtime_error naming the line number.
ParsedGfa parse_gfa(std::istream& in);
ParsedGfa parse_gfa_file(const std::string& path);

// Emits the graph as S lines in node-id order followed by L lines in edge
// order. Every edge must have an overlap entry in the document. A graph
// written with its own parse document and re-parsed yields an identical
// AssemblyGraph (names gain an orientation suffix; structure and features
// are preserved bit-exactly).
void write_gfa(const AssemblyGraph& g, const GfaDocument& doc,
               std::ostream& out);
void write_gfa_file(const AssemblyGraph& g, const GfaDocument& doc,
                    const std::string& path);

// Plain document for graphs that did not come from a file: names "v<i>",
// unknown lengths, overlaps "<round(feature * 10000)>M".
GfaDocument default_document(const AssemblyGraph& g);

}  // namespace nge::gfa
