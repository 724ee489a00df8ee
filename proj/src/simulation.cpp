#include "netrank/simulation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "netrank/asymptotics.hpp"
#include "netrank/bias_test.hpp"
#include "netrank/correction.hpp"
#include "netrank/errors.hpp"
#include "netrank/graph.hpp"
#include "netrank/rng.hpp"

namespace netrank {

namespace {

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

const char* sweep_name(SweepParameter p) {
  switch (p) {
    case SweepParameter::beta:
      return "beta";
    case SweepParameter::mu:
      return "mu";
    case SweepParameter::gamma:
      return "gamma";
    case SweepParameter::q:
      return "q";
    case SweepParameter::none:
      break;
  }
  return "";
}

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

// Mean and (sample standard deviation) / sqrt(m); se is 0 for m < 2.
MeanSe summarize(const std::vector<double>& xs) {
  MeanSe out;
  const std::size_t m = xs.size();
  if (m == 0) return out;
  double sum = 0.0;
  for (double x : xs) sum += x;
  out.mean = sum / static_cast<double>(m);
  if (m < 2) return out;
  double ss = 0.0;
  for (double x : xs) {
    const double d = x - out.mean;
    ss += d * d;
  }
  out.se = std::sqrt(ss / static_cast<double>(m - 1) /
                     static_cast<double>(m));
  return out;
}

ResultRow make_row(const std::string& scenario, const std::string& point,
                   const char* method, const char* metric, MeanSe stats,
                   int reps, std::uint64_t seed) {
  ResultRow row;
  row.scenario = scenario;
  row.point = point;
  row.method = method;
  row.metric = metric;
  row.mean = stats.mean;
  row.se = stats.se;
  row.reps = reps;
  row.seed = seed;
  return row;
}

// Row for a count of successes out of m trials; the se is the sample
// standard deviation of the 0/1 values over sqrt(m), which reduces to
// sqrt(p (1 - p) / (m - 1)).
ResultRow binary_rate_row(const std::string& scenario,
                          const std::string& point, const char* method,
                          const char* metric, int successes, int m,
                          std::uint64_t seed) {
  MeanSe stats;
  stats.mean = static_cast<double>(successes) / static_cast<double>(m);
  if (m > 1) {
    stats.se = std::sqrt(stats.mean * (1.0 - stats.mean) /
                         static_cast<double>(m - 1));
  }
  return make_row(scenario, point, method, metric, stats, m, seed);
}

// Linear-interpolation quantile of an ascending-sorted nonempty sample.
double quantile_sorted(const std::vector<double>& sorted, double p) {
  const std::size_t m = sorted.size();
  if (m == 1) return sorted[0];
  const double h = p * static_cast<double>(m - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  const std::size_t hi = std::min(lo + 1, m - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

// pos[node] = rank position of node (0 = top) in the given ordering.
std::vector<int> rank_positions(const std::vector<int>& order) {
  std::vector<int> pos(order.size(), 0);
  for (std::size_t k = 0; k < order.size(); ++k) {
    pos[static_cast<std::size_t>(order[k])] = static_cast<int>(k);
  }
  return pos;
}

void check_probability_cell(double value, const char* what,
                            const std::string& label) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw InfeasibleParameterError("scenario point " + label + ": " + what +
                                   " = " + format_value(value) +
                                   " lies outside [0, 1]");
  }
}

// Block densities of a labelled network via masked popcounts; fails (false)
// when either group has fewer than two nodes.
bool block_densities(const LabeledNetwork& net, double* within1,
                     double* within2, double* cross) {
  const int n = net.n();
  const int wpr = net.adj.words_per_row();
  std::vector<std::uint64_t> mask1(static_cast<std::size_t>(wpr), 0);
  int n1 = 0;
  for (int j = 0; j < n; ++j) {
    if (net.labels[static_cast<std::size_t>(j)] == 1) {
      mask1[static_cast<std::size_t>(j) >> 6] |= 1ULL << (j & 63);
      ++n1;
    }
  }
  const int n2 = n - n1;
  if (n1 < 2 || n2 < 2) return false;
  // Twice the within-group edge counts (each edge seen from both ends) and
  // the cross count seen from its minority end only.
  long long within1_x2 = 0, within2_x2 = 0, cross_count = 0;
  for (int i = 0; i < n; ++i) {
    const std::uint64_t* row = net.adj.row(i);
    long long in_minority = 0, degree = 0;
    for (int w = 0; w < wpr; ++w) {
      in_minority += std::popcount(row[w] & mask1[static_cast<std::size_t>(w)]);
      degree += std::popcount(row[w]);
    }
    if (net.labels[static_cast<std::size_t>(i)] == 1) {
      within1_x2 += in_minority;
      cross_count += degree - in_minority;
    } else {
      within2_x2 += degree - in_minority;
    }
  }
  *within1 = static_cast<double>(within1_x2) /
             (static_cast<double>(n1) * static_cast<double>(n1 - 1));
  *within2 = static_cast<double>(within2_x2) /
             (static_cast<double>(n2) * static_cast<double>(n2 - 1));
  *cross = static_cast<double>(cross_count) /
           (static_cast<double>(n1) * static_cast<double>(n2));
  return true;
}

void check_spec_structure(const ScenarioSpec& spec) {
  if (spec.name.empty()) throw DomainError("scenario name must be nonempty");
  if (spec.n_grid.empty()) throw DomainError("scenario n_grid must be nonempty");
  for (int n : spec.n_grid) {
    if (n < 4) throw DomainError("scenario sizes must be at least 4");
  }
  if (!(spec.kappa > 0.0 && spec.kappa < 1.0)) {
    throw DomainError("scenario kappa must lie in (0, 1)");
  }
  if (spec.replicate_count < 1) {
    throw DomainError("scenario replicate_count must be positive");
  }
  if ((spec.sweep == SweepParameter::none) != spec.sweep_grid.empty()) {
    throw DomainError(
        "sweep_grid must be nonempty exactly when a sweep parameter is set");
  }
}

}  // namespace

std::vector<ScenarioPoint> scenario_points(const ScenarioSpec& spec) {
  check_spec_structure(spec);
  std::vector<double> sweep_values = spec.sweep_grid;
  if (spec.sweep == SweepParameter::none) sweep_values = {0.0};

  std::vector<ScenarioPoint> points;
  points.reserve(spec.n_grid.size() * sweep_values.size());
  for (int n : spec.n_grid) {
    for (double value : sweep_values) {
      ScenarioPoint pt;
      pt.n = n;
      double q = spec.q, mu1 = spec.mu1, mu2 = spec.mu2;
      double beta = spec.beta, gamma1 = spec.gamma1, gamma2 = spec.gamma2;
      switch (spec.sweep) {
        case SweepParameter::beta:
          beta = value;
          break;
        case SweepParameter::mu:
          mu1 = mu2 = value;
          break;
        case SweepParameter::gamma:
          gamma1 = gamma2 = value;
          break;
        case SweepParameter::q:
          q = value;
          break;
        case SweepParameter::none:
          break;
      }
      pt.label = "n=" + std::to_string(n);
      if (spec.sweep != SweepParameter::none) {
        pt.label += std::string(",") + sweep_name(spec.sweep) + "=" +
                    format_value(value);
      }
      const double root_n = std::sqrt(static_cast<double>(n));
      if (spec.gamma_rule == GammaRule::root_n_over_five) {
        gamma1 = gamma2 = root_n / 5.0;
      }
      if (spec.mu_rule == MuRule::compensate_deletion) {
        if (beta >= 1.0) {
          throw InfeasibleParameterError(
              "scenario point " + pt.label +
              ": deletion compensation requires beta < 1");
        }
        mu1 = mu2 = 1.0 / (2.0 * (1.0 - beta));
      }
      pt.model = SbmParams{spec.kappa, q, mu1, mu2};
      pt.rates = ErrorRatesUndirected{beta, gamma1, gamma2};
      pt.sweep_value =
          spec.sweep == SweepParameter::none ? static_cast<double>(n) : value;
      pt.minority_count =
          spec.fixed_minority_count
              ? static_cast<int>(std::floor(spec.kappa * n))
              : -1;

      check_probability_cell(q, "between-group rate q", pt.label);
      check_probability_cell(q + mu1 / root_n, "within-minority cell",
                             pt.label);
      check_probability_cell(q + mu2 / root_n, "within-majority cell",
                             pt.label);
      check_probability_cell(beta, "between-group deletion rate", pt.label);
      check_probability_cell(beta - gamma1 / root_n,
                             "within-minority deletion rate", pt.label);
      check_probability_cell(beta - gamma2 / root_n,
                             "within-majority deletion rate", pt.label);
      points.push_back(std::move(pt));
    }
  }
  return points;
}

ScenarioSpec detection_scenario(char which) {
  ScenarioSpec spec;
  spec.kappa = 0.25;
  spec.n_grid = {20, 50, 100};
  spec.replicate_count = 400;
  spec.alpha = 0.1;
  spec.beta_bar = 0.1;
  spec.fixed_minority_count = true;
  switch (which) {
    case 'A':
      spec.name = "detection-A";
      spec.q = 0.2;
      spec.sweep = SweepParameter::beta;
      spec.sweep_grid = {0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3};
      spec.mu_rule = MuRule::compensate_deletion;
      break;
    case 'B':
      spec.name = "detection-B";
      spec.q = 0.25;
      spec.beta = 0.2;
      spec.sweep = SweepParameter::mu;
      spec.sweep_grid = {0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5};
      break;
    case 'C':
      spec.name = "detection-C";
      spec.q = 0.25;
      spec.beta = 0.25;
      spec.sweep = SweepParameter::gamma;
      spec.sweep_grid = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
      break;
    case 'D':
      spec.name = "detection-D";
      spec.mu1 = spec.mu2 = 0.1;
      spec.beta = 0.2;
      spec.gamma1 = spec.gamma2 = 0.5;
      spec.sweep = SweepParameter::q;
      spec.sweep_grid = {0.1, 0.2, 0.3, 0.4, 0.5};
      break;
    default:
      throw DomainError("detection scenario must be one of 'A'..'D'");
  }
  return spec;
}

ScenarioSpec correction_scenario(char which) {
  ScenarioSpec spec;
  spec.kappa = 0.4;
  spec.q = 0.5;
  spec.n_grid = {50, 100, 200, 300, 500};
  spec.replicate_count = 100;
  switch (which) {
    case 'A':
      spec.name = "correction-A";
      spec.mu1 = spec.mu2 = -2.0;
      spec.beta = 0.3;
      spec.gamma_rule = GammaRule::root_n_over_five;
      break;
    case 'B':
      spec.name = "correction-B";
      spec.mu1 = spec.mu2 = -2.0;
      break;
    case 'C':
      spec.name = "correction-C";
      spec.beta = 0.3;
      spec.gamma_rule = GammaRule::root_n_over_five;
      break;
    default:
      throw DomainError("correction scenario must be one of 'A'..'C'");
  }
  return spec;
}

ScenarioSpec rho_estimation_scenario() {
  ScenarioSpec spec;
  spec.name = "rho-estimation";
  spec.kappa = 0.4;
  spec.q = 0.05;
  spec.n_grid = {200, 1000};
  spec.replicate_count = 200;
  spec.sweep = SweepParameter::mu;
  spec.sweep_grid = {1.0, 2.0};
  return spec;
}

std::vector<double> default_rho_z_grid() {
  return {0.02, 0.05, 0.1, 0.25, 0.5};
}

ExperimentResult run_detection_power(const ScenarioSpec& spec,
                                     std::uint64_t master_seed) {
  const std::vector<ScenarioPoint> points = scenario_points(spec);
  ExperimentResult out;
  for (std::size_t pi = 0; pi < points.size(); ++pi) {
    const ScenarioPoint& pt = points[pi];
    int rejected = 0;
    int degenerate = 0;
    for (int rep = 0; rep < spec.replicate_count; ++rep) {
      RngStream rng(derive_stream_seed(master_seed, spec.name, pi,
                                       static_cast<std::uint64_t>(rep)));
      const auto labels =
          sample_labels(pt.n, pt.model.kappa, rng, pt.minority_count >= 0);
      const LabeledNetwork truth = sample_sbm(pt.n, pt.model, labels, rng);
      const auto obs = apply_errors_undirected(truth, pt.rates, 2, rng);
      try {
        const TestReport report =
            bias_test(obs[0], obs[1], spec.alpha, spec.beta_bar);
        if (report.reject) ++rejected;
      } catch (const DegenerateStatisticsError&) {
        ++degenerate;  // small-sample estimation failure: a non-rejection
      }
    }
    out.rows.push_back(binary_rate_row(spec.name, pt.label, "bias-test",
                                       "rejection-rate", rejected,
                                       spec.replicate_count, master_seed));
    out.rows.push_back(binary_rate_row(spec.name, pt.label, "bias-test",
                                       "degenerate-rate", degenerate,
                                       spec.replicate_count, master_seed));
  }
  return out;
}

ExperimentResult run_correction_experiment(const ScenarioSpec& spec,
                                           std::uint64_t master_seed) {
  const std::vector<ScenarioPoint> points = scenario_points(spec);
  static constexpr const char* kMethods[3] = {"uncorrected", "proportional",
                                              "plug-in"};
  static constexpr const char* kGroups[2] = {"minority", "majority"};
  static constexpr const char* kQuartiles[3] = {"rank-bias-q1",
                                                "rank-bias-median",
                                                "rank-bias-q3"};
  ExperimentResult out;
  for (std::size_t pi = 0; pi < points.size(); ++pi) {
    const ScenarioPoint& pt = points[pi];
    std::vector<double> spearman_vals[3];
    std::vector<double> quartile_vals[3][2][3];  // method x group x quartile
    int degenerate = 0;
    for (int rep = 0; rep < spec.replicate_count; ++rep) {
      RngStream rng(derive_stream_seed(master_seed, spec.name, pi,
                                       static_cast<std::uint64_t>(rep)));
      const auto labels =
          sample_labels(pt.n, pt.model.kappa, rng, pt.minority_count >= 0);
      const LabeledNetwork truth = sample_sbm(pt.n, pt.model, labels, rng);
      const auto obs = apply_errors_undirected(truth, pt.rates, 2, rng);
      const std::vector<int> truth_order = top_k_ranking(degrees(truth), rng);
      std::vector<int> orders[3];
      orders[0] = top_k_ranking(degrees(obs[0]), rng);
      orders[1] = proportional_ranking(obs[0], rng).order;
      try {
        orders[2] = plugin_corrected_ranking(obs[0], obs[1], rng).order;
      } catch (const DegenerateStatisticsError&) {
        ++degenerate;  // skip the replicate for every method
        continue;
      }
      const std::vector<int> truth_rank = rank_positions(truth_order);
      for (int m = 0; m < 3; ++m) {
        spearman_vals[m].push_back(spearman(orders[m], truth_order));
        const std::vector<int> method_rank = rank_positions(orders[m]);
        std::vector<double> bias[2];
        for (int node = 0; node < pt.n; ++node) {
          const std::size_t g =
              labels[static_cast<std::size_t>(node)] == 1 ? 0 : 1;
          // Construct rank minus method rank: positive means the method
          // placed the node above its construct position.
          bias[g].push_back(static_cast<double>(
              truth_rank[static_cast<std::size_t>(node)] -
              method_rank[static_cast<std::size_t>(node)]));
        }
        for (int g = 0; g < 2; ++g) {
          if (bias[g].empty()) continue;
          std::sort(bias[g].begin(), bias[g].end());
          quartile_vals[m][g][0].push_back(quantile_sorted(bias[g], 0.25));
          quartile_vals[m][g][1].push_back(quantile_sorted(bias[g], 0.50));
          quartile_vals[m][g][2].push_back(quantile_sorted(bias[g], 0.75));
        }
      }
    }
    for (int m = 0; m < 3; ++m) {
      out.rows.push_back(make_row(
          spec.name, pt.label, kMethods[m], "spearman",
          summarize(spearman_vals[m]),
          static_cast<int>(spearman_vals[m].size()), master_seed));
      for (int g = 0; g < 2; ++g) {
        for (int k = 0; k < 3; ++k) {
          const std::string metric =
              std::string(kGroups[g]) + "-" + kQuartiles[k];
          out.rows.push_back(make_row(
              spec.name, pt.label, kMethods[m], metric.c_str(),
              summarize(quartile_vals[m][g][k]),
              static_cast<int>(quartile_vals[m][g][k].size()), master_seed));
        }
      }
    }
    out.rows.push_back(binary_rate_row(spec.name, pt.label, "plug-in",
                                       "degenerate-rate", degenerate,
                                       spec.replicate_count, master_seed));
  }
  return out;
}

ExperimentResult run_rho_estimation(const ScenarioSpec& spec,
                                    std::uint64_t master_seed,
                                    const std::vector<double>& z_grid,
                                    int truth_draws) {
  const std::vector<ScenarioPoint> points = scenario_points(spec);
  if (z_grid.empty()) throw DomainError("z grid must be nonempty");
  for (double z : z_grid) {
    if (!(z > 0.0 && z <= 1.0)) {
      throw DomainError("z grid values must lie in (0, 1]");
    }
  }
  if (truth_draws < 2) throw DomainError("truth_draws must be at least 2");
  const std::string truth_label = spec.name + ":truth";

  ExperimentResult out;
  for (std::size_t pi = 0; pi < points.size(); ++pi) {
    const ScenarioPoint& pt = points[pi];
    const std::size_t nz = z_grid.size();
    std::vector<int> ks(nz, 1);
    for (std::size_t zi = 0; zi < nz; ++zi) {
      const int k = static_cast<int>(
          std::floor(static_cast<double>(pt.n) * z_grid[zi] + 1e-9));
      ks[zi] = std::clamp(k, 1, pt.n);
    }

    // Ground-truth expected minority shares from a disjoint batch of
    // construct draws on an independent stream family.
    std::vector<std::vector<double>> truth_shares(nz);
    for (int draw = 0; draw < truth_draws; ++draw) {
      RngStream rng(derive_stream_seed(master_seed, truth_label, pi,
                                       static_cast<std::uint64_t>(draw)));
      const auto labels =
          sample_labels(pt.n, pt.model.kappa, rng, pt.minority_count >= 0);
      const LabeledNetwork net = sample_sbm(pt.n, pt.model, labels, rng);
      const RepresentationProfile profile =
          minority_profile(labels, top_k_ranking(degrees(net), rng));
      for (std::size_t zi = 0; zi < nz; ++zi) {
        truth_shares[zi].push_back(profile.at_k(ks[zi]));
      }
    }
    std::vector<MeanSe> truth_stats(nz);
    for (std::size_t zi = 0; zi < nz; ++zi) {
      truth_stats[zi] = summarize(truth_shares[zi]);
    }

    std::vector<std::vector<double>> sq_emp(nz), sq_plug(nz), sq_diff(nz);
    int degenerate = 0;
    for (int rep = 0; rep < spec.replicate_count; ++rep) {
      RngStream rng(derive_stream_seed(master_seed, spec.name, pi,
                                       static_cast<std::uint64_t>(rep)));
      const auto labels =
          sample_labels(pt.n, pt.model.kappa, rng, pt.minority_count >= 0);
      const LabeledNetwork net = sample_sbm(pt.n, pt.model, labels, rng);
      double within1 = 0.0, within2 = 0.0, cross = 0.0;
      if (!block_densities(net, &within1, &within2, &cross) ||
          !(cross > 0.0 && cross < 1.0)) {
        ++degenerate;
        continue;
      }
      const int n1 = net.minority_count();
      const double kappa_hat =
          static_cast<double>(n1) / static_cast<double>(pt.n);
      const double root_n = std::sqrt(static_cast<double>(pt.n));
      const double mu1_hat = root_n * (within1 - cross);
      const double mu2_hat = root_n * (within2 - cross);
      const RepresentationProfile profile =
          minority_profile(labels, top_k_ranking(degrees(net), rng));
      for (std::size_t zi = 0; zi < nz; ++zi) {
        const double truth_mean = truth_stats[zi].mean;
        const double empirical = profile.at_k(ks[zi]);
        const double plug =
            rho_star_sbm(static_cast<double>(ks[zi]) / pt.n, kappa_hat, cross,
                         mu1_hat, mu2_hat);
        const double e2 = (empirical - truth_mean) * (empirical - truth_mean);
        const double p2 = (plug - truth_mean) * (plug - truth_mean);
        sq_emp[zi].push_back(e2);
        sq_plug[zi].push_back(p2);
        sq_diff[zi].push_back(p2 - e2);
      }
    }

    const auto rmse_row = [&](const char* method, const std::string& point,
                              const std::vector<double>& sq) {
      const MeanSe mse = summarize(sq);
      MeanSe stats;
      stats.mean = std::sqrt(std::max(0.0, mse.mean));
      // First-order error propagation through the square root.
      stats.se = stats.mean > 1e-12 ? mse.se / (2.0 * stats.mean) : 0.0;
      return make_row(spec.name, point, method, "rmse", stats,
                      static_cast<int>(sq.size()), master_seed);
    };
    for (std::size_t zi = 0; zi < nz; ++zi) {
      const std::string point = pt.label + ",z=" + format_value(z_grid[zi]);
      out.rows.push_back(make_row(spec.name, point, "oracle", "rho-mean",
                                  truth_stats[zi], truth_draws, master_seed));
      out.rows.push_back(rmse_row("empirical", point, sq_emp[zi]));
      out.rows.push_back(rmse_row("plug-in", point, sq_plug[zi]));
      out.rows.push_back(make_row(spec.name, point, "plug-in-minus-empirical",
                                  "mse-diff", summarize(sq_diff[zi]),
                                  static_cast<int>(sq_diff[zi].size()),
                                  master_seed));
    }
    out.rows.push_back(binary_rate_row(spec.name, pt.label, "plug-in",
                                       "degenerate-rate", degenerate,
                                       spec.replicate_count, master_seed));
  }
  return out;
}

ExperimentResult run_phase_check(PhaseKind kind, int n, int reps,
                                 std::uint64_t master_seed) {
  if (n < 4) throw DomainError("phase check requires n >= 4");
  if (reps < 1) throw DomainError("phase check requires reps >= 1");
  const double kappa = 0.25;
  const double q = 0.25;
  const double small = std::pow(static_cast<double>(n), -0.75);
  const double big =
      5.0 * std::sqrt(std::log(static_cast<double>(n)) / n);
  double delta1 = small, delta2 = small;
  const char* name = "phase-vanishing";
  switch (kind) {
    case PhaseKind::vanishing:
      break;
    case PhaseKind::majority_dominant:
      delta2 = big;
      name = "phase-majority-dominant";
      break;
    case PhaseKind::minority_dominant:
      delta1 = big;
      name = "phase-minority-dominant";
      break;
  }
  const double p1 = q + delta1, p2 = q + delta2;
  if (p1 > 1.0 || p2 > 1.0) {
    throw InfeasibleParameterError(
        "phase check within-group rate exceeds 1 at n = " + std::to_string(n));
  }

  const double zs[2] = {0.1, 0.25};
  int ks[2];
  std::vector<double> shares[2];
  for (int zi = 0; zi < 2; ++zi) {
    ks[zi] = std::clamp(
        static_cast<int>(std::floor(n * zs[zi] + 1e-9)), 1, n);
  }
  for (int rep = 0; rep < reps; ++rep) {
    RngStream rng(derive_stream_seed(master_seed, name, 0,
                                     static_cast<std::uint64_t>(rep)));
    const auto labels = sample_labels(n, kappa, rng, false);
    const LabeledNetwork net =
        sample_block_bernoulli(n, p1, q, p2, labels, rng);
    const RepresentationProfile profile =
        minority_profile(labels, top_k_ranking(degrees(net), rng));
    for (int zi = 0; zi < 2; ++zi) {
      shares[zi].push_back(profile.at_k(ks[zi]));
    }
  }
  ExperimentResult out;
  for (int zi = 0; zi < 2; ++zi) {
    const std::string point =
        "n=" + std::to_string(n) + ",z=" + format_value(zs[zi]);
    out.rows.push_back(make_row(name, point, "empirical", "minority-share",
                                summarize(shares[zi]), reps, master_seed));
  }
  return out;
}

}  // namespace netrank
