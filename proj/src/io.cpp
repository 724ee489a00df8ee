#include "netrank/io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <utility>

#include "netrank/errors.hpp"

namespace netrank {

namespace {

// Strips a trailing '\r' (CRLF files) and anything from the first '#'.
std::string strip_comment(std::string line) {
  const std::size_t hash = line.find('#');
  if (hash != std::string::npos) line.erase(hash);
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) {
    line.pop_back();
  }
  return line;
}

// Splits on commas and whitespace, both accepted as separators.
std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : line) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::string location(const std::string& path, int line_no) {
  return path + ":" + std::to_string(line_no);
}

// Visits the (line_no, tokens) of every data line; returns the data-line
// count.  Raises ParseError when the file cannot be opened or a data line
// does not have exactly two fields.
template <typename Fn>
int for_each_record(const std::string& path, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::string line;
  int line_no = 0;
  int records = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = strip_comment(line);
    const std::vector<std::string> tokens = tokenize(body);
    if (tokens.empty()) continue;
    if (tokens.size() != 2) {
      throw ParseError(location(path, line_no) + ": expected 2 fields, got " +
                       std::to_string(tokens.size()));
    }
    ++records;
    fn(line_no, tokens);
  }
  return records;
}

// Dense index of id, appending it to the map on first appearance.
int intern_id(const std::string& id, ParsedNetwork& net,
              std::unordered_map<std::string, int>& index) {
  const auto [it, inserted] =
      index.emplace(id, static_cast<int>(net.node_ids.size()));
  if (inserted) net.node_ids.push_back(id);
  return it->second;
}

std::unordered_map<std::string, int> index_of(const ParsedNetwork& net) {
  std::unordered_map<std::string, int> index;
  index.reserve(net.node_ids.size());
  for (int i = 0; i < net.n(); ++i) index.emplace(net.node_ids[i], i);
  return index;
}

// Parses an edge list into an existing id map (new ids append).
void parse_edge_list_into(const std::string& path, ParsedNetwork& net) {
  auto index = index_of(net);
  std::set<std::pair<int, int>> seen(net.edges.begin(), net.edges.end());
  const int records =
      for_each_record(path, [&](int, const std::vector<std::string>& tokens) {
        const int src = intern_id(tokens[0], net, index);
        const int dst = intern_id(tokens[1], net, index);
        if (src == dst) {
          ++net.self_loops_dropped;
          return;
        }
        const std::pair<int, int> edge =
            net.directed ? std::pair{src, dst}
                         : std::pair{std::min(src, dst), std::max(src, dst)};
        if (seen.insert(edge).second) net.edges.push_back(edge);
      });
  if (records == 0) throw ParseError(path + " contains no data lines");
}

std::string list_ids(const std::vector<std::string>& ids) {
  std::string out;
  const std::size_t shown = std::min<std::size_t>(ids.size(), 10);
  for (std::size_t i = 0; i < shown; ++i) {
    if (i > 0) out += ", ";
    out += ids[i];
  }
  if (ids.size() > shown) {
    out += ", and " + std::to_string(ids.size() - shown) + " more";
  }
  return out;
}

}  // namespace

ParsedNetwork parse_edge_list(const std::string& path, bool directed) {
  ParsedNetwork net;
  net.directed = directed;
  parse_edge_list_into(path, net);
  return net;
}

LabelAssignment parse_labels(const std::string& path, ParsedNetwork& net) {
  std::unordered_map<std::string, std::uint8_t> groups;
  std::vector<std::string> file_order;
  const int records = for_each_record(
      path, [&](int line_no, const std::vector<std::string>& tokens) {
        std::uint8_t group = 0;
        if (tokens[1] == "1") {
          group = 1;
        } else if (tokens[1] == "2") {
          group = 2;
        } else {
          throw ParseError(location(path, line_no) + ": group must be 1 or 2, got '" +
                           tokens[1] + "'");
        }
        if (!groups.emplace(tokens[0], group).second) {
          throw ParseError(location(path, line_no) + ": duplicate label for id '" +
                           tokens[0] + "'");
        }
        file_order.push_back(tokens[0]);
      });
  if (records == 0) throw ParseError(path + " contains no data lines");

  LabelAssignment out;
  out.labels.assign(static_cast<std::size_t>(net.n()), 0);
  auto index = index_of(net);
  for (const std::string& id : file_order) {
    const auto it = index.find(id);
    if (it == index.end()) {
      // A node mentioned only in the label file joins as an isolated node.
      net.node_ids.push_back(id);
      out.labels.push_back(groups[id]);
      ++out.appended_isolated_nodes;
    } else {
      out.labels[static_cast<std::size_t>(it->second)] = groups[id];
    }
  }
  std::vector<std::string> missing;
  for (std::size_t i = 0; i < out.labels.size(); ++i) {
    if (out.labels[i] == 0) missing.push_back(net.node_ids[i]);
  }
  if (!missing.empty()) {
    throw ParseError(path + ": missing labels for " + list_ids(missing));
  }
  int minority = 0;
  for (std::uint8_t g : out.labels) minority += g == 1 ? 1 : 0;
  out.group1_not_minority =
      2 * minority > static_cast<int>(out.labels.size());
  return out;
}

LabeledNetwork build_labeled_network(const ParsedNetwork& parsed,
                                     const std::vector<std::uint8_t>& labels) {
  if (parsed.directed) {
    throw DomainError("edge list was parsed as directed");
  }
  LabeledNetwork net(parsed.n(), labels);
  for (const auto& [i, j] : parsed.edges) net.add_edge(i, j);
  return net;
}

DirectedNetwork build_directed_network(
    const ParsedNetwork& parsed, const std::vector<std::uint8_t>& labels) {
  if (!parsed.directed) {
    throw DomainError("edge list was parsed as undirected");
  }
  DirectedNetwork net(parsed.n(), labels);
  for (const auto& [i, j] : parsed.edges) net.add_arc(i, j);
  return net;
}

namespace {

// Shared flow of the composite readers: label ids (file order) fix the
// index order, then the edge list may only reference labelled nodes.
std::pair<ParsedNetwork, LabelAssignment> read_files(
    const std::string& edge_path, const std::string& labels_path,
    bool directed, IngestReport* report) {
  ParsedNetwork net;
  net.directed = directed;
  LabelAssignment assignment = parse_labels(labels_path, net);
  const int labelled = net.n();
  parse_edge_list_into(edge_path, net);
  if (net.n() > labelled) {
    std::vector<std::string> unlabelled(net.node_ids.begin() + labelled,
                                        net.node_ids.end());
    throw ParseError(labels_path + ": missing labels for " +
                     list_ids(unlabelled));
  }
  if (report != nullptr) {
    report->node_ids = net.node_ids;
    report->self_loops_dropped = net.self_loops_dropped;
    report->group1_not_minority = assignment.group1_not_minority;
  }
  return {std::move(net), std::move(assignment)};
}

}  // namespace

LabeledNetwork read_labeled_network(const std::string& edge_path,
                                    const std::string& labels_path,
                                    IngestReport* report) {
  const auto [net, assignment] =
      read_files(edge_path, labels_path, false, report);
  return build_labeled_network(net, assignment.labels);
}

DirectedNetwork read_directed_network(const std::string& edge_path,
                                      const std::string& labels_path,
                                      IngestReport* report) {
  const auto [net, assignment] =
      read_files(edge_path, labels_path, true, report);
  return build_directed_network(net, assignment.labels);
}

namespace {

std::string id_of(int i, const std::vector<std::string>* node_ids) {
  return node_ids != nullptr ? (*node_ids)[static_cast<std::size_t>(i)]
                             : std::to_string(i);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open " + path + " for writing");
  return out;
}

void check_id_count(int n, const std::vector<std::string>* node_ids) {
  if (node_ids != nullptr && static_cast<int>(node_ids->size()) != n) {
    throw DimensionError("node id list does not match the node count");
  }
}

}  // namespace

void write_edge_list(const std::string& path, const LabeledNetwork& net,
                     const std::vector<std::string>* node_ids) {
  check_id_count(net.n(), node_ids);
  std::ofstream out = open_out(path);
  for (int i = 0; i < net.n(); ++i) {
    for (int j = i + 1; j < net.n(); ++j) {
      if (net.edge(i, j)) {
        out << id_of(i, node_ids) << ' ' << id_of(j, node_ids) << '\n';
      }
    }
  }
}

void write_edge_list(const std::string& path, const DirectedNetwork& net,
                     const std::vector<std::string>* node_ids) {
  check_id_count(net.n(), node_ids);
  std::ofstream out = open_out(path);
  for (int i = 0; i < net.n(); ++i) {
    for (int j = 0; j < net.n(); ++j) {
      if (net.arc(i, j)) {
        out << id_of(i, node_ids) << ' ' << id_of(j, node_ids) << '\n';
      }
    }
  }
}

void write_labels(const std::string& path,
                  const std::vector<std::uint8_t>& labels,
                  const std::vector<std::string>* node_ids) {
  check_id_count(static_cast<int>(labels.size()), node_ids);
  std::ofstream out = open_out(path);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out << id_of(static_cast<int>(i), node_ids) << ' '
        << static_cast<int>(labels[i]) << '\n';
  }
}

std::string format_csv_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_result_csv(std::ostream& out, const ExperimentResult& result) {
  out << "scenario,point,method,metric,mean,se,reps,seed\n";
  for (const ResultRow& row : result.rows) {
    out << csv_escape(row.scenario) << ',' << csv_escape(row.point) << ','
        << csv_escape(row.method) << ',' << csv_escape(row.metric) << ','
        << format_csv_number(row.mean) << ',' << format_csv_number(row.se)
        << ',' << row.reps << ',' << row.seed << '\n';
  }
}

}  // namespace netrank
