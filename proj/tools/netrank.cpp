// Command-line surface: ingestion, generation, estimation, testing,
// correction, and simulation subcommands wired into reproducible runs.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "netrank/asymptotics.hpp"
#include "netrank/bias_test.hpp"
#include "netrank/correction.hpp"
#include "netrank/errors.hpp"
#include "netrank/estimation.hpp"
#include "netrank/graph.hpp"
#include "netrank/io.hpp"
#include "netrank/models.hpp"
#include "netrank/rng.hpp"
#include "netrank/simulation.hpp"
#include "netrank/version.hpp"

namespace {

using nlohmann::json;
using namespace netrank;

// ---------------------------------------------------------------------------
// Output plumbing.  Every artifact embeds the tool version, the resolved
// configuration, and the seed; JSON carries them in an envelope, CSV in
// leading '#' comment lines.  No timestamps, so identical runs produce
// identical bytes.
// ---------------------------------------------------------------------------

void write_text(const std::string& path, const std::string& bytes) {
  if (path == "-") {
    std::cout << bytes;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open " + path + " for writing");
  out << bytes;
}

std::string dump_envelope(const char* command, std::uint64_t seed,
                          const json& config, json result) {
  const json doc{{"command", command},
                 {"config", config},
                 {"result", std::move(result)},
                 {"seed", seed},
                 {"version", kVersion}};
  return doc.dump(2) + "\n";
}

std::string csv_preamble(const char* command, std::uint64_t seed,
                         const json& config) {
  std::string s;
  s += "# version=" + std::string(kVersion) + '\n';
  s += "# command=" + std::string(command) + '\n';
  s += "# seed=" + std::to_string(seed) + '\n';
  s += "# config=" + config.dump() + '\n';
  return s;
}

// "parameter,value" table used by the CSV form of estimate/test reports.
std::string parameter_csv(const std::vector<std::pair<std::string, std::string>>& rows) {
  std::string s = "parameter,value\n";
  for (const auto& [name, value] : rows) {
    s += csv_escape(name) + ',' + csv_escape(value) + '\n';
  }
  return s;
}

// ---------------------------------------------------------------------------
// JSON views of library types.
// ---------------------------------------------------------------------------

json ingest_json(const IngestReport& report, int minority_count) {
  return {{"group1_not_minority", report.group1_not_minority},
          {"minority_count", minority_count},
          {"n", static_cast<int>(report.node_ids.size())},
          {"self_loops_dropped", report.self_loops_dropped}};
}

json stats_json(const MomentStats& s) {
  return {{"N1", s.N1},     {"N2", s.N2},     {"Nb", s.Nb},
          {"n", s.n},       {"n1", s.n1},     {"n2", s.n2},
          {"u1_1", s.u1_1}, {"u1_2", s.u1_2}, {"u1_b", s.u1_b},
          {"u2_1", s.u2_1}, {"u2_2", s.u2_2}, {"u2_b", s.u2_b}};
}

json estimates_json(const UndirectedEstimates& e) {
  return {{"beta1_hat", e.beta1_hat},   {"beta2_hat", e.beta2_hat},
          {"beta_b_hat", e.beta_b_hat}, {"gamma1_hat", e.gamma1_hat},
          {"gamma2_hat", e.gamma2_hat}, {"kappa_hat", e.kappa_hat},
          {"mu1_hat", e.mu1_hat},       {"mu2_hat", e.mu2_hat},
          {"q_hat", e.q_hat}};
}

json stats_json(const DirectedStats& s) {
  return {{"n", s.n},           {"n1", s.n1},         {"n2", s.n2},
          {"u11_a", s.u11_a},   {"u11_d", s.u11_d},   {"u12_a", s.u12_a},
          {"u12_d", s.u12_d},   {"u21_d", s.u21_d},   {"u22_a", s.u22_a},
          {"u22_d", s.u22_d}};
}

json estimates_json(const DirectedEstimates& e) {
  return {{"beta11_hat", e.beta11_hat}, {"beta12_hat", e.beta12_hat},
          {"beta21_hat", e.beta21_hat}, {"beta22_hat", e.beta22_hat},
          {"p11_hat", e.p11_hat},       {"p12_hat", e.p12_hat},
          {"p22_hat", e.p22_hat}};
}

json optional_json(const std::optional<double>& value) {
  return value.has_value() ? json(*value) : json(nullptr);
}

json report_json(const TestReport& r) {
  return {{"alpha", r.alpha},
          {"argmin_beta", optional_json(r.argmin_beta)},
          {"beta_bar", r.beta_bar},
          {"outcome", outcome_name(r.outcome)},
          {"q_beta_min", optional_json(r.q_beta_min)},
          {"q_mu", optional_json(r.q_mu)},
          {"reject", r.reject},
          {"threshold3", r.threshold3},
          {"threshold4", r.threshold4},
          {"y_equal", r.y_equal}};
}

const char* alternative_name(DirectedAlternative alt) {
  return alt == DirectedAlternative::beta12_less ? "beta12-less" : "two-sided";
}

json report_json(const DirectedTestReport& r) {
  return {{"alpha", r.alpha},
          {"alternative", alternative_name(r.alternative)},
          {"p_value", r.p_value},
          {"reject", r.reject},
          {"sigma_d_hat", r.sigma_d_hat},
          {"z", r.z}};
}

json clamp_events_json(const std::vector<ClampEvent>& events) {
  json arr = json::array();
  for (const ClampEvent& e : events) {
    arr.push_back({{"clamped_value", e.clamped_value},
                   {"parameter", e.parameter},
                   {"raw_value", e.raw_value}});
  }
  return arr;
}

json ranking_table_json(const std::vector<int>& order,
                        const std::vector<std::uint8_t>& labels,
                        const std::vector<int>& scores,
                        const std::vector<std::string>& node_ids,
                        std::size_t limit) {
  json arr = json::array();
  const std::size_t count = std::min(limit, order.size());
  for (std::size_t k = 0; k < count; ++k) {
    const int node = order[k];
    arr.push_back({{"group", static_cast<int>(labels[node])},
                   {"node_id", node_ids[node]},
                   {"rank", static_cast<int>(k) + 1},
                   {"score", scores[node]}});
  }
  return arr;
}

json rows_json(const ExperimentResult& result) {
  json arr = json::array();
  for (const ResultRow& row : result.rows) {
    arr.push_back({{"mean", row.mean},
                   {"method", row.method},
                   {"metric", row.metric},
                   {"point", row.point},
                   {"reps", row.reps},
                   {"scenario", row.scenario},
                   {"se", row.se},
                   {"seed", row.seed}});
  }
  return arr;
}

int minority_in_prefix(const std::vector<int>& order,
                       const std::vector<std::uint8_t>& labels, int k) {
  int count = 0;
  for (int i = 0; i < k && i < static_cast<int>(order.size()); ++i) {
    count += labels[order[i]] == 1 ? 1 : 0;
  }
  return count;
}

long edge_count(const LabeledNetwork& net) {
  long total = 0;
  for (int d : degrees(net)) total += d;
  return total / 2;
}

long arc_count(const DirectedNetwork& net) {
  long total = 0;
  for (int d : in_degrees(net)) total += d;
  return total;
}

GraphonSpec::Family parse_family(const std::string& name) {
  if (name == "block-constant") return GraphonSpec::Family::block_constant;
  if (name == "linear") return GraphonSpec::Family::linear;
  if (name == "bilinear") return GraphonSpec::Family::bilinear;
  throw DomainError("unknown graphon family '" + name + "'");
}

// ---------------------------------------------------------------------------
// generate: sample labels + network (+ optional observation channel) to files.
// ---------------------------------------------------------------------------

struct GenerateOptions {
  int n = 0;
  double kappa = 0.0;
  double q = 0.0;
  double mu1 = 0.0;
  double mu2 = 0.0;
  bool fixed_minority_count = false;
  std::string model = "sbm";
  std::string family = "block-constant";
  std::vector<double> coefficients;
  double beta = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  int replicates = 0;
  bool directed = false;
  double beta11 = 0.0, beta12 = 0.0, beta21 = 0.0, beta22 = 0.0;
  std::uint64_t seed = 0;
  std::string prefix;
};

json generate_config(const GenerateOptions& o) {
  return {{"beta", o.beta},
          {"beta11", o.beta11},
          {"beta12", o.beta12},
          {"beta21", o.beta21},
          {"beta22", o.beta22},
          {"coefficients", o.coefficients},
          {"directed", o.directed},
          {"family", o.family},
          {"fixed-minority-count", o.fixed_minority_count},
          {"gamma1", o.gamma1},
          {"gamma2", o.gamma2},
          {"kappa", o.kappa},
          {"model", o.model},
          {"mu1", o.mu1},
          {"mu2", o.mu2},
          {"n", o.n},
          {"out-prefix", o.prefix},
          {"q", o.q},
          {"replicates", o.replicates},
          {"seed", o.seed}};
}

void run_generate(const GenerateOptions& o) {
  RngStream rng(o.seed);
  const std::vector<std::uint8_t> labels =
      sample_labels(o.n, o.kappa, rng, o.fixed_minority_count);
  LabeledNetwork truth;
  if (o.model == "sbm") {
    truth = sample_sbm(o.n, SbmParams{o.kappa, o.q, o.mu1, o.mu2}, labels, rng);
  } else {
    GraphonSpec spec{parse_family(o.family), o.q, o.kappa, o.coefficients};
    truth = sample_graphon(o.n, spec, labels, rng);
  }

  json files;
  json edge_counts;
  const std::string labels_path = o.prefix + "-labels.txt";
  const std::string truth_path = o.prefix + "-truth-edges.txt";
  write_labels(labels_path, truth.labels);
  write_edge_list(truth_path, truth);
  files["labels"] = labels_path;
  files["truth_edges"] = truth_path;
  edge_counts["truth"] = edge_count(truth);

  if (o.directed) {
    const ErrorRatesDirected rates{o.beta11, o.beta12, o.beta21, o.beta22};
    const DirectedNetwork observed = apply_errors_directed(truth, rates, rng);
    const std::string path = o.prefix + "-directed-edges.txt";
    write_edge_list(path, observed);
    files["directed_edges"] = path;
    edge_counts["directed"] = arc_count(observed);
  } else if (o.replicates > 0) {
    const ErrorRatesUndirected rates{o.beta, o.gamma1, o.gamma2};
    const std::vector<LabeledNetwork> observed =
        apply_errors_undirected(truth, rates, o.replicates, rng);
    for (std::size_t r = 0; r < observed.size(); ++r) {
      const std::string key = "y" + std::to_string(r + 1);
      const std::string path = o.prefix + "-" + key + "-edges.txt";
      write_edge_list(path, observed[r]);
      files[key + "_edges"] = path;
      edge_counts[key] = edge_count(observed[r]);
    }
  }

  int minority = 0;
  for (std::uint8_t g : truth.labels) minority += g == 1 ? 1 : 0;
  const json result{{"edge_counts", edge_counts},
                    {"files", files},
                    {"minority_count", minority},
                    {"n", o.n}};
  write_text(o.prefix + "-meta.json",
             dump_envelope("generate", o.seed, generate_config(o), result));
}

// ---------------------------------------------------------------------------
// profile: empirical minority representation and/or the limiting curve.
// ---------------------------------------------------------------------------

struct ProfileOptions {
  std::string edges;
  std::string labels;
  bool directed = false;
  bool limit = false;
  double kappa = 0.0;
  double q = 0.0;
  double mu1 = 0.0;
  double mu2 = 0.0;
  std::string model = "sbm";
  std::string family = "block-constant";
  std::vector<double> coefficients;
  std::vector<double> z_grid;
  std::uint64_t seed = 0;
  std::string out = "-";
  std::string format = "csv";
};

json profile_config(const ProfileOptions& o) {
  return {{"coefficients", o.coefficients},
          {"directed", o.directed},
          {"edges", o.edges},
          {"family", o.family},
          {"format", o.format},
          {"kappa", o.kappa},
          {"labels", o.labels},
          {"limit", o.limit},
          {"model", o.model},
          {"mu1", o.mu1},
          {"mu2", o.mu2},
          {"out", o.out},
          {"q", o.q},
          {"seed", o.seed},
          {"z-grid", o.z_grid}};
}

void run_profile(const ProfileOptions& o) {
  if (o.edges.empty() && !o.limit) {
    throw DomainError(
        "nothing to profile: give --edges/--labels, --limit, or both");
  }
  json result;
  std::string csv_body = "series,x,value\n";

  if (!o.edges.empty()) {
    if (o.labels.empty()) throw DomainError("--edges requires --labels");
    IngestReport report;
    std::vector<std::uint8_t> labels;
    std::vector<int> scores;
    if (o.directed) {
      const DirectedNetwork net =
          read_directed_network(o.edges, o.labels, &report);
      labels = net.labels;
      scores = in_degrees(net);
    } else {
      const LabeledNetwork net =
          read_labeled_network(o.edges, o.labels, &report);
      labels = net.labels;
      scores = degrees(net);
    }
    RngStream rng(o.seed);
    const std::vector<int> order = top_k_ranking(scores, rng);
    const RepresentationProfile profile = minority_profile(labels, order);
    json ks = json::array();
    for (std::size_t k = 1; k <= profile.size(); ++k) {
      ks.push_back(static_cast<int>(k));
      csv_body += "empirical," + std::to_string(k) + ',' +
                  format_csv_number(profile.values[k - 1]) + '\n';
    }
    result["empirical"] = {{"k", ks}, {"share", profile.values}};
    result["ingest"] =
        ingest_json(report, minority_in_prefix(order, labels,
                                               static_cast<int>(order.size())));
  }

  if (o.limit) {
    const std::vector<double> grid =
        o.z_grid.empty() ? default_z_grid() : o.z_grid;
    RhoStarCurve curve;
    if (o.model == "sbm") {
      curve = rho_star_curve(SbmParams{o.kappa, o.q, o.mu1, o.mu2}, grid);
    } else {
      GraphonSpec spec{parse_family(o.family), o.q, o.kappa, o.coefficients};
      curve = rho_star_curve(spec, grid);
    }
    for (std::size_t i = 0; i < curve.grid.size(); ++i) {
      csv_body += "limit," + format_csv_number(curve.grid[i]) + ',' +
                  format_csv_number(curve.values[i]) + '\n';
    }
    result["limit"] = {{"rho_star", curve.values}, {"z", curve.grid}};
  }

  const json config = profile_config(o);
  if (o.format == "json") {
    write_text(o.out, dump_envelope("profile", o.seed, config, result));
  } else {
    write_text(o.out, csv_preamble("profile", o.seed, config) + csv_body);
  }
}

// ---------------------------------------------------------------------------
// estimate: method-of-moments parameter recovery.
// ---------------------------------------------------------------------------

struct EstimateOptions {
  std::string edges1;
  std::string edges2;
  std::string edges;
  std::string labels;
  bool directed = false;
  std::string density_mode = "averaged";
  std::uint64_t seed = 0;
  std::string out = "-";
  std::string format = "json";
};

json estimate_config(const EstimateOptions& o) {
  return {{"density-mode", o.density_mode},
          {"directed", o.directed},
          {"edges", o.edges},
          {"edges1", o.edges1},
          {"edges2", o.edges2},
          {"format", o.format},
          {"labels", o.labels},
          {"out", o.out},
          {"seed", o.seed}};
}

void run_estimate(const EstimateOptions& o) {
  if (o.labels.empty()) throw DomainError("estimate requires --labels");
  json result;
  std::vector<std::pair<std::string, std::string>> rows;
  if (o.directed) {
    if (o.edges.empty()) throw DomainError("--directed requires --edges");
    IngestReport report;
    const DirectedNetwork net =
        read_directed_network(o.edges, o.labels, &report);
    const DirectedStats stats = moment_stats_directed(net);
    const DirectedEstimates est = estimate_directed(stats);
    result["estimates"] = estimates_json(est);
    result["ingest"] = ingest_json(report, net.minority_count());
    result["stats"] = stats_json(stats);
    for (const auto& [key, value] : result["estimates"].items()) {
      rows.emplace_back(key, format_csv_number(value.get<double>()));
    }
  } else {
    if (o.edges1.empty() || o.edges2.empty()) {
      throw DomainError("undirected estimation requires --edges1 and --edges2");
    }
    IngestReport report1, report2;
    const LabeledNetwork y = read_labeled_network(o.edges1, o.labels, &report1);
    const LabeledNetwork y_star =
        read_labeled_network(o.edges2, o.labels, &report2);
    const DensityMode mode = o.density_mode == "replicate-y"
                                 ? DensityMode::replicate_y
                                 : DensityMode::averaged;
    const MomentStats stats = moment_stats(y, y_star, mode);
    const UndirectedEstimates est = estimate_undirected(stats);
    result["estimates"] = estimates_json(est);
    json ingest = ingest_json(report1, y.minority_count());
    ingest["self_loops_dropped"] = {{"y", report1.self_loops_dropped},
                                    {"y_star", report2.self_loops_dropped}};
    result["ingest"] = ingest;
    result["stats"] = stats_json(stats);
    for (const auto& [key, value] : result["estimates"].items()) {
      rows.emplace_back(key, format_csv_number(value.get<double>()));
    }
  }
  const json config = estimate_config(o);
  if (o.format == "csv") {
    write_text(o.out,
               csv_preamble("estimate", o.seed, config) + parameter_csv(rows));
  } else {
    write_text(o.out, dump_envelope("estimate", o.seed, config, result));
  }
}

// ---------------------------------------------------------------------------
// test: systematic-bias hypothesis tests.
// ---------------------------------------------------------------------------

struct TestOptions {
  std::string edges1;
  std::string edges2;
  std::string edges;
  std::string labels;
  bool directed = false;
  double alpha = 0.1;
  double beta_bar = 0.1;
  std::string alternative = "beta12-less";
  std::uint64_t seed = 0;
  std::string out = "-";
  std::string format = "json";
};

json test_config(const TestOptions& o) {
  return {{"alpha", o.alpha},
          {"alternative", o.alternative},
          {"beta-bar", o.beta_bar},
          {"directed", o.directed},
          {"edges", o.edges},
          {"edges1", o.edges1},
          {"edges2", o.edges2},
          {"format", o.format},
          {"labels", o.labels},
          {"out", o.out},
          {"seed", o.seed}};
}

void run_test(const TestOptions& o) {
  if (o.labels.empty()) throw DomainError("test requires --labels");
  json result;
  std::vector<std::pair<std::string, std::string>> rows;
  if (o.directed) {
    if (o.edges.empty()) throw DomainError("--directed requires --edges");
    IngestReport report;
    const DirectedNetwork net =
        read_directed_network(o.edges, o.labels, &report);
    const DirectedAlternative alt = o.alternative == "two-sided"
                                        ? DirectedAlternative::two_sided
                                        : DirectedAlternative::beta12_less;
    const DirectedTestReport tr = directed_bias_test(net, o.alpha, alt);
    result["ingest"] = ingest_json(report, net.minority_count());
    result["test"] = report_json(tr);
    rows = {{"z", format_csv_number(tr.z)},
            {"p_value", format_csv_number(tr.p_value)},
            {"sigma_d_hat", format_csv_number(tr.sigma_d_hat)},
            {"alternative", alternative_name(tr.alternative)},
            {"alpha", format_csv_number(tr.alpha)},
            {"reject", tr.reject ? "true" : "false"}};
  } else {
    if (o.edges1.empty() || o.edges2.empty()) {
      throw DomainError("the undirected test requires --edges1 and --edges2");
    }
    IngestReport report;
    const LabeledNetwork y = read_labeled_network(o.edges1, o.labels, &report);
    const LabeledNetwork y_star = read_labeled_network(o.edges2, o.labels);
    const TestReport tr = bias_test(y, y_star, o.alpha, o.beta_bar);
    result["ingest"] = ingest_json(report, y.minority_count());
    result["test"] = report_json(tr);
    rows = {{"outcome", outcome_name(tr.outcome)},
            {"reject", tr.reject ? "true" : "false"},
            {"q_beta_min", tr.q_beta_min ? format_csv_number(*tr.q_beta_min) : ""},
            {"argmin_beta", tr.argmin_beta ? format_csv_number(*tr.argmin_beta) : ""},
            {"q_mu", tr.q_mu ? format_csv_number(*tr.q_mu) : ""},
            {"threshold3", format_csv_number(tr.threshold3)},
            {"threshold4", format_csv_number(tr.threshold4)},
            {"alpha", format_csv_number(tr.alpha)},
            {"beta_bar", format_csv_number(tr.beta_bar)}};
  }
  const json config = test_config(o);
  if (o.format == "csv") {
    write_text(o.out,
               csv_preamble("test", o.seed, config) + parameter_csv(rows));
  } else {
    write_text(o.out, dump_envelope("test", o.seed, config, result));
  }
}

// ---------------------------------------------------------------------------
// correct: representation-corrected rankings.
// ---------------------------------------------------------------------------

struct CorrectOptions {
  std::string edges1;
  std::string edges2;
  std::string edges;
  std::string labels;
  bool directed = false;
  std::string method = "plug-in";
  double target_rho = -1.0;
  std::uint64_t seed = 0;
  std::string out = "-";
  std::string format = "json";
};

json correct_config(const CorrectOptions& o) {
  return {{"directed", o.directed},
          {"edges", o.edges},
          {"edges1", o.edges1},
          {"edges2", o.edges2},
          {"format", o.format},
          {"labels", o.labels},
          {"method", o.method},
          {"out", o.out},
          {"seed", o.seed},
          {"target-rho", o.target_rho}};
}

void run_correct(const CorrectOptions& o) {
  if (o.labels.empty()) throw DomainError("correct requires --labels");
  IngestReport report;
  std::vector<std::uint8_t> labels;
  std::vector<int> scores;
  LabeledNetwork y, y_star;
  DirectedNetwork dnet;
  if (o.directed) {
    if (o.edges.empty()) throw DomainError("--directed requires --edges");
    dnet = read_directed_network(o.edges, o.labels, &report);
    labels = dnet.labels;
    scores = in_degrees(dnet);
  } else {
    if (o.edges1.empty()) throw DomainError("correct requires --edges1");
    y = read_labeled_network(o.edges1, o.labels, &report);
    if (o.method == "plug-in") {
      if (o.edges2.empty()) {
        throw DomainError("the undirected plug-in method requires --edges2");
      }
      y_star = read_labeled_network(o.edges2, o.labels);
    }
    labels = y.labels;
    scores = degrees(y);
  }

  RngStream rng(o.seed);
  const int n = static_cast<int>(labels.size());
  CorrectedRanking ranking;
  bool has_target = true;
  if (o.method == "uncorrected") {
    ranking.order = top_k_ranking(scores, rng);
    ranking.achieved_profile = minority_profile(labels, ranking.order);
    has_target = false;
  } else if (o.method == "proportional") {
    ranking = o.directed ? proportional_ranking(dnet, rng)
                         : proportional_ranking(y, rng);
  } else if (o.method == "plug-in") {
    ranking = o.directed ? plugin_corrected_ranking(dnet, rng)
                         : plugin_corrected_ranking(y, y_star, rng);
  } else {  // target
    if (!(o.target_rho > 0.0 && o.target_rho < 1.0)) {
      throw DomainError("--method target requires --target-rho in (0, 1)");
    }
    RepresentationProfile target{
        std::vector<double>(static_cast<std::size_t>(n), o.target_rho)};
    ranking = o.directed ? corrected_ranking(dnet, target, rng)
                         : corrected_ranking(y, target, rng);
  }

  json result{{"achieved_profile", ranking.achieved_profile.values},
              {"clamp_events", clamp_events_json(ranking.clamp_events)},
              {"ingest", ingest_json(report, minority_in_prefix(
                                                 ranking.order, labels, n))},
              {"method", o.method},
              {"ranking", ranking_table_json(ranking.order, labels, scores,
                                             report.node_ids, labels.size())},
              {"target_profile", has_target
                                     ? json(ranking.target_profile.values)
                                     : json(nullptr)}};

  const json config = correct_config(o);
  if (o.format == "csv") {
    std::string body = "rank,node_id,group,score,achieved_share,target_share\n";
    for (int k = 0; k < n; ++k) {
      const int node = ranking.order[k];
      body += std::to_string(k + 1) + ',' + csv_escape(report.node_ids[node]) +
              ',' + std::to_string(static_cast<int>(labels[node])) + ',' +
              std::to_string(scores[node]) + ',' +
              format_csv_number(ranking.achieved_profile.values[k]) + ',' +
              (has_target
                   ? format_csv_number(ranking.target_profile.values[k])
                   : std::string()) +
              '\n';
    }
    write_text(o.out, csv_preamble("correct", o.seed, config) + body);
  } else {
    write_text(o.out, dump_envelope("correct", o.seed, config, result));
  }
}

// ---------------------------------------------------------------------------
// simulate: canonical Monte Carlo scenarios with optional overrides.
// ---------------------------------------------------------------------------

struct SimulateOptions {
  std::string scenario;
  std::vector<int> n_grid;
  int replicates = 0;       // 0 keeps the scenario default
  double alpha = -1.0;      // negative keeps the scenario default
  double beta_bar = -1.0;   // negative keeps the scenario default
  std::vector<double> sweep_grid;
  std::vector<double> z_grid;
  int truth_draws = 2000;
  int phase_n = 2000;
  std::uint64_t seed = 0;
  std::string out = "-";
  std::string format = "csv";
};

void apply_overrides(ScenarioSpec& spec, const SimulateOptions& o) {
  if (!o.n_grid.empty()) spec.n_grid = o.n_grid;
  if (o.replicates > 0) spec.replicate_count = o.replicates;
  if (o.alpha >= 0.0) spec.alpha = o.alpha;
  if (o.beta_bar >= 0.0) spec.beta_bar = o.beta_bar;
  if (!o.sweep_grid.empty()) spec.sweep_grid = o.sweep_grid;
}

json simulate_config(const SimulateOptions& o, const ScenarioSpec* spec) {
  json config{{"format", o.format},
              {"out", o.out},
              {"phase-n", o.phase_n},
              {"scenario", o.scenario},
              {"seed", o.seed},
              {"truth-draws", o.truth_draws},
              {"z-grid", o.z_grid}};
  if (spec != nullptr) {
    config["alpha"] = spec->alpha;
    config["beta-bar"] = spec->beta_bar;
    config["n-grid"] = spec->n_grid;
    config["replicates"] = spec->replicate_count;
    config["sweep-grid"] = spec->sweep_grid;
  } else {
    config["replicates"] = o.replicates > 0 ? o.replicates : 200;
  }
  return config;
}

void run_simulate(const SimulateOptions& o) {
  ExperimentResult result;
  json config;
  const std::string& s = o.scenario;
  if (s.rfind("detection-", 0) == 0 || s.rfind("correction-", 0) == 0) {
    ScenarioSpec spec = s.rfind("detection-", 0) == 0
                            ? detection_scenario(s.back())
                            : correction_scenario(s.back());
    apply_overrides(spec, o);
    config = simulate_config(o, &spec);
    result = s.rfind("detection-", 0) == 0
                 ? run_detection_power(spec, o.seed)
                 : run_correction_experiment(spec, o.seed);
  } else if (s == "rho-estimation") {
    ScenarioSpec spec = rho_estimation_scenario();
    apply_overrides(spec, o);
    config = simulate_config(o, &spec);
    const std::vector<double> grid =
        o.z_grid.empty() ? default_rho_z_grid() : o.z_grid;
    config["z-grid"] = grid;
    result = run_rho_estimation(spec, o.seed, grid, o.truth_draws);
  } else if (s.rfind("phase-", 0) == 0) {
    PhaseKind kind;
    if (s == "phase-vanishing") {
      kind = PhaseKind::vanishing;
    } else if (s == "phase-majority-dominant") {
      kind = PhaseKind::majority_dominant;
    } else if (s == "phase-minority-dominant") {
      kind = PhaseKind::minority_dominant;
    } else {
      throw DomainError("unknown scenario '" + s + "'");
    }
    const int reps = o.replicates > 0 ? o.replicates : 200;
    config = simulate_config(o, nullptr);
    result = run_phase_check(kind, o.phase_n, reps, o.seed);
  } else {
    throw DomainError("unknown scenario '" + s + "'");
  }

  if (o.format == "json") {
    write_text(o.out, dump_envelope("simulate", o.seed, config,
                                    json{{"rows", rows_json(result)}}));
  } else {
    std::ostringstream body;
    write_result_csv(body, result);
    write_text(o.out, csv_preamble("simulate", o.seed, config) + body.str());
  }
}

// ---------------------------------------------------------------------------
// analyze-directed: estimation + one-sided test + corrected ranking bundle.
// ---------------------------------------------------------------------------

struct AnalyzeOptions {
  std::string edges;
  std::string labels;
  double alpha = 0.05;
  int top_k = 10;
  std::uint64_t seed = 0;
  std::string out = "-";
};

json analyze_config(const AnalyzeOptions& o) {
  return {{"alpha", o.alpha},  {"edges", o.edges}, {"labels", o.labels},
          {"out", o.out},      {"seed", o.seed},   {"top-k", o.top_k}};
}

void run_analyze_directed(const AnalyzeOptions& o) {
  IngestReport report;
  const DirectedNetwork net = read_directed_network(o.edges, o.labels, &report);
  const DirectedStats stats = moment_stats_directed(net);
  const DirectedEstimates est = estimate_directed(stats);
  const DirectedTestReport tr = directed_bias_test(net, o.alpha);

  RngStream rng(o.seed);
  const std::vector<int> scores = in_degrees(net);
  const std::vector<int> uncorrected = top_k_ranking(scores, rng);
  const RepresentationProfile uncorrected_profile =
      minority_profile(net.labels, uncorrected);
  const CorrectedRanking corrected = plugin_corrected_ranking(net, rng);

  const int k = std::min(o.top_k, net.n());
  const json result{
      {"corrected",
       {{"clamp_events", clamp_events_json(corrected.clamp_events)},
        {"minority_in_top_k",
         minority_in_prefix(corrected.order, net.labels, k)},
        {"profile", corrected.achieved_profile.values},
        {"ranking_top",
         ranking_table_json(corrected.order, net.labels, scores,
                            report.node_ids, static_cast<std::size_t>(k))},
        {"target_profile", corrected.target_profile.values}}},
      {"estimates", estimates_json(est)},
      {"ingest", ingest_json(report, net.minority_count())},
      {"stats", stats_json(stats)},
      {"test", report_json(tr)},
      {"top_k", k},
      {"uncorrected",
       {{"minority_in_top_k", minority_in_prefix(uncorrected, net.labels, k)},
        {"profile", uncorrected_profile.values},
        {"ranking_top",
         ranking_table_json(uncorrected, net.labels, scores, report.node_ids,
                            static_cast<std::size_t>(k))}}}};
  write_text(o.out,
             dump_envelope("analyze-directed", o.seed, analyze_config(o), result));
}

// ---------------------------------------------------------------------------
// Wiring.
// ---------------------------------------------------------------------------

int run_app(int argc, char** argv) {
  CLI::App app{"Degree-ranking bias toolkit: generate networks, estimate "
               "error rates, test for systematic bias, and correct rankings"};
  app.require_subcommand(1);
  app.fallthrough();  // lets --config follow the subcommand name
  app.set_config("--config", "",
                 "Read option defaults from a TOML/INI file (flags override)");
  app.set_version_flag("--version", std::string(kVersion));

  const std::vector<std::string> formats{"csv", "json"};
  const std::vector<std::string> families{"block-constant", "linear",
                                          "bilinear"};
  const std::vector<std::string> models{"sbm", "graphon"};

  GenerateOptions gen;
  auto* generate = app.add_subcommand(
      "generate", "Sample a labelled network (and optional noisy observations) to files");
  generate->add_option("--n", gen.n, "Number of nodes")->required();
  generate->add_option("--kappa", gen.kappa, "Minority fraction")->required();
  generate->add_option("--q", gen.q, "Baseline edge probability")->required();
  generate->add_option("--mu1", gen.mu1, "Within-minority signal (sqrt-n scale)");
  generate->add_option("--mu2", gen.mu2, "Within-majority signal (sqrt-n scale)");
  generate->add_flag("--fixed-minority-count", gen.fixed_minority_count,
                     "Fix the minority count at floor(kappa n)");
  generate->add_option("--model", gen.model, "Generative model")
      ->check(CLI::IsMember(models));
  generate->add_option("--family", gen.family, "Graphon theta family")
      ->check(CLI::IsMember(families));
  generate->add_option("--coefficients", gen.coefficients,
                       "Graphon family coefficients")
      ->delimiter(',');
  generate->add_option("--beta", gen.beta, "Between-group deletion rate");
  generate->add_option("--gamma1", gen.gamma1,
                       "Within-minority deletion offset (sqrt-n scale)");
  generate->add_option("--gamma2", gen.gamma2,
                       "Within-majority deletion offset (sqrt-n scale)");
  auto* replicates_opt = generate->add_option(
      "--replicates", gen.replicates,
      "Noisy undirected replicates to write (0, 1, or 2)");
  replicates_opt->check(CLI::Range(0, 2));
  auto* directed_flag = generate->add_flag(
      "--directed", gen.directed, "Write one directed observation instead");
  directed_flag->excludes(replicates_opt);
  generate->add_option("--beta11", gen.beta11, "Arc deletion rate within group 1");
  generate->add_option("--beta12", gen.beta12, "Arc deletion rate group 1 -> 2");
  generate->add_option("--beta21", gen.beta21, "Arc deletion rate group 2 -> 1");
  generate->add_option("--beta22", gen.beta22, "Arc deletion rate within group 2");
  generate->add_option("--seed", gen.seed, "Seed (echoed in all outputs)");
  generate->add_option("--out-prefix", gen.prefix, "Output path prefix")
      ->required();
  generate->callback([&gen] { run_generate(gen); });

  ProfileOptions prof;
  auto* profile = app.add_subcommand(
      "profile", "Minority representation along a degree ranking, empirical "
                 "and/or limiting");
  profile->add_option("--edges", prof.edges, "Edge list for the empirical profile");
  profile->add_option("--labels", prof.labels, "Node group file");
  profile->add_flag("--directed", prof.directed, "Rank by in-degree");
  profile->add_flag("--limit", prof.limit, "Emit the limiting curve rho*(z)");
  profile->add_option("--kappa", prof.kappa, "Minority fraction (limit mode)");
  profile->add_option("--q", prof.q, "Baseline edge probability (limit mode)");
  profile->add_option("--mu1", prof.mu1, "Within-minority signal (limit mode)");
  profile->add_option("--mu2", prof.mu2, "Within-majority signal (limit mode)");
  profile->add_option("--model", prof.model, "Limit model")
      ->check(CLI::IsMember(models));
  profile->add_option("--family", prof.family, "Graphon theta family")
      ->check(CLI::IsMember(families));
  profile->add_option("--coefficients", prof.coefficients,
                      "Graphon family coefficients")
      ->delimiter(',');
  profile->add_option("--z-grid", prof.z_grid, "Explicit z grid in (0, 1]")
      ->delimiter(',');
  profile->add_option("--seed", prof.seed, "Seed for ranking tie-breaks");
  profile->add_option("--out", prof.out, "Output path ('-' = stdout)");
  profile->add_option("--format", prof.format, "Output format")
      ->check(CLI::IsMember(formats));
  profile->callback([&prof] { run_profile(prof); });

  EstimateOptions est;
  auto* estimate = app.add_subcommand(
      "estimate", "Method-of-moments estimates of rates and signals");
  estimate->add_option("--edges1", est.edges1, "First undirected replicate");
  estimate->add_option("--edges2", est.edges2, "Second undirected replicate");
  estimate->add_option("--edges", est.edges, "Directed edge list");
  estimate->add_option("--labels", est.labels, "Node group file");
  estimate->add_flag("--directed", est.directed, "Directed-network estimation");
  estimate->add_option("--density-mode", est.density_mode,
                       "Minority-count denominators from averaged replicates "
                       "or the first replicate only")
      ->check(CLI::IsMember({"averaged", "replicate-y"}));
  estimate->add_option("--seed", est.seed, "Seed (echoed in outputs)");
  estimate->add_option("--out", est.out, "Output path ('-' = stdout)");
  estimate->add_option("--format", est.format, "Output format")
      ->check(CLI::IsMember(formats));
  estimate->callback([&est] { run_estimate(est); });

  TestOptions test;
  auto* test_cmd = app.add_subcommand(
      "test", "Hypothesis test for systematic minority bias");
  test_cmd->add_option("--edges1", test.edges1, "First undirected replicate");
  test_cmd->add_option("--edges2", test.edges2, "Second undirected replicate");
  test_cmd->add_option("--edges", test.edges, "Directed edge list");
  test_cmd->add_option("--labels", test.labels, "Node group file");
  test_cmd->add_flag("--directed", test.directed,
                     "Directed rate-gap Z-test instead of the undirected test");
  test_cmd->add_option("--alpha", test.alpha, "Test level");
  test_cmd->add_option("--beta-bar", test.beta_bar,
                       "Upper bound of the composite null deletion rate");
  test_cmd->add_option("--alternative", test.alternative,
                       "Directed alternative hypothesis")
      ->check(CLI::IsMember({"beta12-less", "two-sided"}));
  test_cmd->add_option("--seed", test.seed, "Seed (echoed in outputs)");
  test_cmd->add_option("--out", test.out, "Output path ('-' = stdout)");
  test_cmd->add_option("--format", test.format, "Output format")
      ->check(CLI::IsMember(formats));
  test_cmd->callback([&test] { run_test(test); });

  CorrectOptions corr;
  auto* correct = app.add_subcommand(
      "correct", "Representation-corrected top-K ranking");
  correct->add_option("--edges1", corr.edges1,
                      "Undirected network to rank (first replicate)");
  correct->add_option("--edges2", corr.edges2,
                      "Second replicate (plug-in target estimation)");
  correct->add_option("--edges", corr.edges, "Directed edge list");
  correct->add_option("--labels", corr.labels, "Node group file");
  correct->add_flag("--directed", corr.directed, "Rank by in-degree");
  correct->add_option("--method", corr.method, "Ranking method")
      ->check(CLI::IsMember({"uncorrected", "proportional", "plug-in", "target"}));
  correct->add_option("--target-rho", corr.target_rho,
                      "Constant target share for --method target");
  correct->add_option("--seed", corr.seed, "Seed for ranking tie-breaks");
  correct->add_option("--out", corr.out, "Output path ('-' = stdout)");
  correct->add_option("--format", corr.format, "Output format")
      ->check(CLI::IsMember(formats));
  correct->callback([&corr] { run_correct(corr); });

  SimulateOptions sim;
  auto* simulate = app.add_subcommand(
      "simulate", "Run a canonical Monte Carlo scenario");
  simulate->add_option("--scenario", sim.scenario, "Scenario name")
      ->required()
      ->check(CLI::IsMember({"detection-A", "detection-B", "detection-C",
                             "detection-D", "correction-A", "correction-B",
                             "correction-C", "rho-estimation",
                             "phase-vanishing", "phase-majority-dominant",
                             "phase-minority-dominant"}));
  simulate->add_option("--n-grid", sim.n_grid, "Override the size grid")
      ->delimiter(',');
  simulate->add_option("--replicates", sim.replicates,
                       "Override the replicate count");
  simulate->add_option("--alpha", sim.alpha, "Override the test level");
  simulate->add_option("--beta-bar", sim.beta_bar,
                       "Override the composite-null bound");
  simulate->add_option("--sweep-grid", sim.sweep_grid,
                       "Override the swept parameter grid")
      ->delimiter(',');
  simulate->add_option("--z-grid", sim.z_grid,
                       "Ranking depths K/n for rho-estimation")
      ->delimiter(',');
  simulate->add_option("--truth-draws", sim.truth_draws,
                       "Monte Carlo draws for the rho-estimation reference");
  simulate->add_option("--phase-n", sim.phase_n,
                       "Network size for the phase scenarios");
  simulate->add_option("--seed", sim.seed, "Master seed");
  simulate->add_option("--out", sim.out, "Output path ('-' = stdout)");
  simulate->add_option("--format", sim.format, "Output format")
      ->check(CLI::IsMember(formats));
  simulate->callback([&sim] { run_simulate(sim); });

  AnalyzeOptions ana;
  auto* analyze = app.add_subcommand(
      "analyze-directed",
      "Directed pipeline: estimates, one-sided bias test, and corrected "
      "ranking in one JSON report");
  analyze->add_option("--edges", ana.edges, "Directed edge list")->required();
  analyze->add_option("--labels", ana.labels, "Node group file")->required();
  analyze->add_option("--alpha", ana.alpha, "Test level");
  analyze->add_option("--top-k", ana.top_k, "Rows in the ranking tables");
  analyze->add_option("--seed", ana.seed, "Seed for ranking tie-breaks");
  analyze->add_option("--out", ana.out, "Output path ('-' = stdout)");
  analyze->callback([&ana] { run_analyze_directed(ana); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_app(argc, argv);
  } catch (const DegenerateStatisticsError& e) {
    std::cerr << "degenerate statistics: " << e.what() << '\n';
    return 3;
  } catch (const InfeasibleParameterError& e) {
    std::cerr << "infeasible parameters: " << e.what() << '\n';
    return 4;
  } catch (const Error& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
}
