#include "netrank/graph.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "netrank/errors.hpp"

namespace netrank {

BitMatrix::BitMatrix(int n)
    : n_(n), wpr_((n + 63) / 64),
      bits_(static_cast<std::size_t>(n) * ((n + 63) / 64), 0) {
  if (n < 0) throw DimensionError("BitMatrix size must be nonnegative");
}

namespace {

void check_labels(const std::vector<std::uint8_t>& labels, int n) {
  if (static_cast<int>(labels.size()) != n) {
    throw DimensionError("label vector length " +
                         std::to_string(labels.size()) +
                         " does not match node count " + std::to_string(n));
  }
  for (std::uint8_t g : labels) {
    if (g != 1 && g != 2) {
      throw DomainError("group labels must be 1 (minority) or 2 (majority)");
    }
  }
}

int count_group1(const std::vector<std::uint8_t>& labels) {
  int c = 0;
  for (std::uint8_t g : labels) c += (g == 1);
  return c;
}

}  // namespace

LabeledNetwork::LabeledNetwork(int n, std::vector<std::uint8_t> labels_in)
    : adj(n), labels(std::move(labels_in)) {
  check_labels(labels, n);
}

void LabeledNetwork::add_edge(int i, int j) {
  if (i == j) return;
  adj.set(i, j);
  adj.set(j, i);
}

int LabeledNetwork::minority_count() const { return count_group1(labels); }

void LabeledNetwork::validate() const {
  check_labels(labels, n());
  for (int i = 0; i < n(); ++i) {
    if (adj.get(i, i)) throw DomainError("self-loop on node " + std::to_string(i));
    for (int j = i + 1; j < n(); ++j) {
      if (adj.get(i, j) != adj.get(j, i)) {
        throw DomainError("adjacency not symmetric at (" + std::to_string(i) +
                          "," + std::to_string(j) + ")");
      }
    }
  }
}

DirectedNetwork::DirectedNetwork(int n, std::vector<std::uint8_t> labels_in)
    : adj(n), labels(std::move(labels_in)) {
  check_labels(labels, n);
}

void DirectedNetwork::add_arc(int i, int j) {
  if (i == j) return;
  adj.set(i, j);
}

int DirectedNetwork::minority_count() const { return count_group1(labels); }

void DirectedNetwork::validate() const {
  check_labels(labels, n());
  for (int i = 0; i < n(); ++i) {
    if (adj.get(i, i)) throw DomainError("self-loop on node " + std::to_string(i));
  }
}

namespace {

std::vector<int> row_popcounts(const BitMatrix& m) {
  std::vector<int> out(m.n(), 0);
  for (int i = 0; i < m.n(); ++i) {
    const std::uint64_t* r = m.row(i);
    int d = 0;
    for (int w = 0; w < m.words_per_row(); ++w) d += std::popcount(r[w]);
    out[i] = d;
  }
  return out;
}

}  // namespace

std::vector<int> degrees(const LabeledNetwork& net) {
  return row_popcounts(net.adj);
}

std::vector<int> in_degrees(const DirectedNetwork& net) {
  std::vector<int> out(net.n(), 0);
  for (int i = 0; i < net.n(); ++i) {
    const std::uint64_t* r = net.adj.row(i);
    for (int w = 0; w < net.adj.words_per_row(); ++w) {
      std::uint64_t bits = r[w];
      while (bits) {
        out[w * 64 + std::countr_zero(bits)] += 1;
        bits &= bits - 1;
      }
    }
  }
  return out;
}

std::vector<int> top_k_ranking(const std::vector<int>& scores, RngStream& rng) {
  const int n = static_cast<int>(scores.size());
  // One key per node, drawn in index order so the consumption pattern is
  // independent of the score values.
  std::vector<double> keys(n);
  for (int i = 0; i < n; ++i) keys[i] = rng.next_uniform();
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    if (keys[a] != keys[b]) return keys[a] < keys[b];
    return a < b;  // total order even on the measure-zero key collision
  });
  return order;
}

RepresentationProfile minority_profile(const std::vector<std::uint8_t>& labels,
                                       const std::vector<int>& ranking) {
  const int n = static_cast<int>(labels.size());
  if (static_cast<int>(ranking.size()) != n) {
    throw DimensionError("ranking length does not match label count");
  }
  RepresentationProfile profile;
  profile.values.resize(n);
  int count = 0;
  for (int k = 1; k <= n; ++k) {
    count += (labels.at(ranking[k - 1]) == 1);
    profile.values[k - 1] = static_cast<double>(count) / k;
  }
  return profile;
}

RepresentationProfile minority_profile(const LabeledNetwork& net,
                                       const std::vector<int>& ranking) {
  return minority_profile(net.labels, ranking);
}

double spearman(const std::vector<int>& order_a,
                const std::vector<int>& order_b) {
  const int n = static_cast<int>(order_a.size());
  if (static_cast<int>(order_b.size()) != n) {
    throw DimensionError("spearman requires equal-length rankings");
  }
  std::vector<int> rank_a(n, -1), rank_b(n, -1);
  for (int pos = 0; pos < n; ++pos) {
    const int a = order_a[pos], b = order_b[pos];
    if (a < 0 || a >= n || b < 0 || b >= n || rank_a[a] != -1 ||
        rank_b[b] != -1) {
      throw DimensionError("spearman inputs must be permutations of 0..n-1");
    }
    rank_a[a] = pos;
    rank_b[b] = pos;
  }
  if (n < 2) return 1.0;
  double sum_d2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = rank_a[i] - rank_b[i];
    sum_d2 += d * d;
  }
  const double nn = n;
  return 1.0 - 6.0 * sum_d2 / (nn * (nn * nn - 1.0));
}

}  // namespace netrank
