#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "netrank/graph.hpp"
#include "netrank/simulation.hpp"

namespace netrank {

/**
 * Edge list parsed from disk.  Node ids are arbitrary strings mapped to
 * dense indices in order of first appearance; edges are deduplicated
 * (undirected pairs are stored with the smaller index first).
 */
struct ParsedNetwork {
  bool directed = false;
  std::vector<std::string> node_ids;       // dense index -> original id
  std::vector<std::pair<int, int>> edges;  // arcs, or i < j pairs
  int self_loops_dropped = 0;

  int n() const { return static_cast<int>(node_ids.size()); }
};

/**
 * Reads lines "src<sep>dst" where the separator is a comma or whitespace;
 * '#' starts a comment, blank lines are skipped.  Undirected mode
 * symmetrizes and deduplicates; directed mode preserves arc direction.
 * Self-loops are dropped and counted.  Raises ParseError with the file name
 * and line number on malformed lines, and when no data line is present.
 */
ParsedNetwork parse_edge_list(const std::string& path, bool directed);

/// Group assignment aligned to a ParsedNetwork's node id map.
struct LabelAssignment {
  std::vector<std::uint8_t> labels;   // entries in {1, 2}
  bool group1_not_minority = false;   // group 1 outnumbers group 2
  int appended_isolated_nodes = 0;    // ids seen only in the label file
};

/**
 * Reads lines "node_id<sep>group" with group in {1, 2} (same separator and
 * comment rules as edge lists).  Ids absent from `net` are appended, in
 * file order, as isolated nodes — the resulting node set is the union of
 * the two files.  Raises ParseError on malformed lines, duplicate ids, and
 * when any network node is left unlabelled (the message names the ids).
 * Sets group1_not_minority when group 1 is the strict majority, since the
 * minority-group convention expects group 1 to be the smaller one.
 */
LabelAssignment parse_labels(const std::string& path, ParsedNetwork& net);

/// Assembles the adjacency structure from parsed edges and aligned labels.
LabeledNetwork build_labeled_network(const ParsedNetwork& parsed,
                                     const std::vector<std::uint8_t>& labels);
DirectedNetwork build_directed_network(const ParsedNetwork& parsed,
                                       const std::vector<std::uint8_t>& labels);

/// Ingestion summary for the composite readers below.
struct IngestReport {
  std::vector<std::string> node_ids;
  int self_loops_dropped = 0;
  bool group1_not_minority = false;
};

/**
 * Composite readers: the label file is read first and its ids, in file
 * order, establish the index order; edge-list ids not in the label file
 * would be unlabelled, so they raise ParseError.  Reading files produced by
 * write_edge_list + write_labels therefore reconstructs the network with
 * identical indices, adjacency, and labels.
 */
LabeledNetwork read_labeled_network(const std::string& edge_path,
                                    const std::string& labels_path,
                                    IngestReport* report = nullptr);
DirectedNetwork read_directed_network(const std::string& edge_path,
                                      const std::string& labels_path,
                                      IngestReport* report = nullptr);

/**
 * Writers for the formats above.  When node_ids is null, indices are used
 * as ids.  Undirected edges are written once (smaller index first) in
 * row-major order; arcs in row-major order; labels one node per line in
 * index order, so the label file doubles as the node manifest.
 */
void write_edge_list(const std::string& path, const LabeledNetwork& net,
                     const std::vector<std::string>* node_ids = nullptr);
void write_edge_list(const std::string& path, const DirectedNetwork& net,
                     const std::vector<std::string>* node_ids = nullptr);
void write_labels(const std::string& path,
                  const std::vector<std::uint8_t>& labels,
                  const std::vector<std::string>* node_ids = nullptr);

/// Number formatted with six significant digits, for human-facing CSV.
std::string format_csv_number(double value);

/// RFC-4180 style quoting: wraps fields containing commas, quotes, or
/// newlines in double quotes and doubles any embedded quote.
std::string csv_escape(const std::string& field);

/// Writes "scenario,point,method,metric,mean,se,reps,seed" rows; means and
/// ses carry six significant digits.
void write_result_csv(std::ostream& out, const ExperimentResult& result);

}  // namespace netrank
