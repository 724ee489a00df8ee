#include "netrank/models.hpp"

#include <bit>
#include <cmath>
#include <cstddef>
#include <utility>

#include "netrank/errors.hpp"

namespace netrank {

namespace {

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InfeasibleParameterError(std::string(what) + " = " +
                                   std::to_string(p) + " is outside [0, 1]");
  }
}

void check_labels(int n, const std::vector<std::uint8_t>& labels) {
  if (static_cast<int>(labels.size()) != n) {
    throw DimensionError("label vector length does not match n");
  }
  for (std::uint8_t g : labels) {
    if (g != 1 && g != 2) throw DomainError("labels must be 1 or 2");
  }
}

// Visits the true edges {i, j} with j > i of row i, in increasing j order.
template <typename Fn>
void for_each_neighbor_above(const BitMatrix& adj, int i, Fn&& fn) {
  const std::uint64_t* row = adj.row(i);
  const int first_word = (i + 1) >> 6;
  for (int w = first_word; w < adj.words_per_row(); ++w) {
    std::uint64_t word = row[w];
    if (w == first_word) word &= ~std::uint64_t{0} << ((i + 1) & 63);
    while (word != 0) {
      const int j = (w << 6) + std::countr_zero(word);
      word &= word - 1;
      fn(j);
    }
  }
}

}  // namespace

double GraphonSpec::theta(double u, double v) const {
  switch (family) {
    case Family::block_constant: {
      if (coefficients.size() != 3) {
        throw DomainError("block_constant family needs 3 coefficients");
      }
      const bool u_min = u < kappa;
      const bool v_min = v < kappa;
      if (u_min && v_min) return coefficients[0];
      if (!u_min && !v_min) return coefficients[2];
      return coefficients[1];
    }
    case Family::linear:
      if (coefficients.size() != 1) {
        throw DomainError("linear family needs 1 coefficient");
      }
      return coefficients[0] * (u + v);
    case Family::bilinear:
      if (coefficients.size() != 1) {
        throw DomainError("bilinear family needs 1 coefficient");
      }
      return coefficients[0] * u * v;
  }
  throw DomainError("unknown graphon family");
}

double GraphonSpec::omega(double u, double v, int n) const {
  if (n < 1) throw DomainError("omega requires n >= 1");
  return q + theta(u, v) / std::sqrt(static_cast<double>(n));
}

std::vector<std::uint8_t> sample_labels(int n, double kappa, RngStream& rng,
                                        bool fixed_minority_count) {
  if (n < 0) throw DomainError("sample_labels requires n >= 0");
  if (!(kappa >= 0.0 && kappa <= 1.0)) {
    throw DomainError("kappa must lie in [0, 1]");
  }
  std::vector<std::uint8_t> labels(static_cast<std::size_t>(n), 2);
  if (fixed_minority_count) {
    const int n1 = static_cast<int>(std::floor(kappa * n));
    for (int i = 0; i < n1; ++i) labels[static_cast<std::size_t>(i)] = 1;
    // Fisher-Yates gives a uniformly random placement of the minority set.
    for (int i = n - 1; i > 0; --i) {
      const int j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(i) + 1));
      std::swap(labels[static_cast<std::size_t>(i)],
                labels[static_cast<std::size_t>(j)]);
    }
  } else {
    for (int i = 0; i < n; ++i) {
      if (rng.next_bernoulli(kappa)) labels[static_cast<std::size_t>(i)] = 1;
    }
  }
  return labels;
}

LabeledNetwork sample_block_bernoulli(int n, double p11, double p12, double p22,
                                      const std::vector<std::uint8_t>& labels,
                                      RngStream& rng) {
  check_probability(p11, "p11");
  check_probability(p12, "p12");
  check_probability(p22, "p22");
  check_labels(n, labels);
  LabeledNetwork net(n, labels);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const bool same = labels[static_cast<std::size_t>(i)] ==
                        labels[static_cast<std::size_t>(j)];
      const double p =
          same ? (labels[static_cast<std::size_t>(i)] == 1 ? p11 : p22) : p12;
      if (rng.next_bernoulli(p)) net.add_edge(i, j);
    }
  }
  return net;
}

LabeledNetwork sample_sbm(int n, const SbmParams& params,
                          const std::vector<std::uint8_t>& labels,
                          RngStream& rng) {
  if (n < 1) throw DomainError("sample_sbm requires n >= 1");
  const double root_n = std::sqrt(static_cast<double>(n));
  const double p11 = params.q + params.mu1 / root_n;
  const double p22 = params.q + params.mu2 / root_n;
  return sample_block_bernoulli(n, p11, params.q, p22, labels, rng);
}

LabeledNetwork sample_graphon(int n, const GraphonSpec& spec,
                              const std::vector<std::uint8_t>& labels,
                              RngStream& rng,
                              std::vector<double>* latents_out) {
  if (n < 1) throw DomainError("sample_graphon requires n >= 1");
  if (!(spec.kappa > 0.0 && spec.kappa < 1.0)) {
    throw DomainError("graphon kappa must lie in (0, 1)");
  }
  check_labels(n, labels);
  // Latent positions first, in node order: minority nodes uniform on
  // [0, kappa), majority nodes uniform on [kappa, 1).
  std::vector<double> latents(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double u = rng.next_uniform();
    latents[static_cast<std::size_t>(i)] =
        labels[static_cast<std::size_t>(i)] == 1
            ? spec.kappa * u
            : spec.kappa + (1.0 - spec.kappa) * u;
  }
  LabeledNetwork net(n, labels);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double p = spec.omega(latents[static_cast<std::size_t>(i)],
                                  latents[static_cast<std::size_t>(j)], n);
      check_probability(p, "omega(u, v)");
      if (rng.next_bernoulli(p)) net.add_edge(i, j);
    }
  }
  if (latents_out != nullptr) *latents_out = std::move(latents);
  return net;
}

std::vector<LabeledNetwork> apply_errors_undirected(
    const LabeledNetwork& truth, const ErrorRatesUndirected& rates,
    int replicates, RngStream& rng) {
  if (replicates != 1 && replicates != 2) {
    throw DomainError("apply_errors_undirected supports 1 or 2 replicates");
  }
  const int n = truth.n();
  if (n < 1) throw DomainError("apply_errors_undirected requires n >= 1");
  const double root_n = std::sqrt(static_cast<double>(n));
  const double beta11 = rates.beta - rates.gamma1 / root_n;
  const double beta22 = rates.beta - rates.gamma2 / root_n;
  const double beta12 = rates.beta;
  check_probability(beta11, "beta11");
  check_probability(beta12, "beta12");
  check_probability(beta22, "beta22");

  std::vector<LabeledNetwork> out;
  out.reserve(static_cast<std::size_t>(replicates));
  for (int r = 0; r < replicates; ++r) {
    LabeledNetwork obs(n, truth.labels);
    for (int i = 0; i < n; ++i) {
      for_each_neighbor_above(truth.adj, i, [&](int j) {
        const bool same = truth.labels[static_cast<std::size_t>(i)] ==
                          truth.labels[static_cast<std::size_t>(j)];
        const double del =
            same ? (truth.labels[static_cast<std::size_t>(i)] == 1 ? beta11
                                                                   : beta22)
                 : beta12;
        if (!rng.next_bernoulli(del)) obs.add_edge(i, j);
      });
    }
    out.push_back(std::move(obs));
  }
  return out;
}

DirectedNetwork apply_errors_directed(const LabeledNetwork& truth,
                                      const ErrorRatesDirected& rates,
                                      RngStream& rng) {
  check_probability(rates.beta11, "beta11");
  check_probability(rates.beta12, "beta12");
  check_probability(rates.beta21, "beta21");
  check_probability(rates.beta22, "beta22");
  const int n = truth.n();
  DirectedNetwork obs(n, truth.labels);
  const auto deletion_rate = [&](int from, int to) {
    const std::uint8_t a = truth.labels[static_cast<std::size_t>(from)];
    const std::uint8_t b = truth.labels[static_cast<std::size_t>(to)];
    if (a == 1) return b == 1 ? rates.beta11 : rates.beta12;
    return b == 1 ? rates.beta21 : rates.beta22;
  };
  for (int i = 0; i < n; ++i) {
    for_each_neighbor_above(truth.adj, i, [&](int j) {
      if (!rng.next_bernoulli(deletion_rate(i, j))) obs.add_arc(i, j);
      if (!rng.next_bernoulli(deletion_rate(j, i))) obs.add_arc(j, i);
    });
  }
  return obs;
}

}  // namespace netrank
