#pragma once

#include <cstdint>
#include <vector>

#include "netrank/rng.hpp"

namespace netrank {

/**
 * Square binary matrix stored as 64-bit words per row.
 *
 * Row-major bit packing makes block statistics cheap: masked popcounts over
 * whole rows replace per-entry loops in the moment computations.
 */
class BitMatrix {
 public:
  BitMatrix() = default;
  explicit BitMatrix(int n);

  int n() const { return n_; }
  int words_per_row() const { return wpr_; }

  bool get(int i, int j) const {
    return (row(i)[static_cast<std::size_t>(j) >> 6] >> (j & 63)) & 1ULL;
  }
  void set(int i, int j) {
    row(i)[static_cast<std::size_t>(j) >> 6] |= 1ULL << (j & 63);
  }
  void clear(int i, int j) {
    row(i)[static_cast<std::size_t>(j) >> 6] &= ~(1ULL << (j & 63));
  }

  const std::uint64_t* row(int i) const {
    return bits_.data() + static_cast<std::size_t>(i) * wpr_;
  }
  std::uint64_t* row(int i) {
    return bits_.data() + static_cast<std::size_t>(i) * wpr_;
  }

  bool operator==(const BitMatrix& other) const = default;

 private:
  int n_ = 0;
  int wpr_ = 0;
  std::vector<std::uint64_t> bits_;
};

/**
 * Undirected labelled network: symmetric adjacency, zero diagonal, and a
 * group tag per node.  Group 1 is the minority by convention; the convention
 * is enforced by ingestion warnings, not by this type.
 */
struct LabeledNetwork {
  BitMatrix adj;
  std::vector<std::uint8_t> labels;  // entries in {1, 2}

  LabeledNetwork() = default;
  LabeledNetwork(int n, std::vector<std::uint8_t> labels_in);

  int n() const { return adj.n(); }
  bool edge(int i, int j) const { return adj.get(i, j); }

  /// Adds the undirected edge {i, j}; ignores i == j.
  void add_edge(int i, int j);

  /// Number of group-1 nodes.
  int minority_count() const;

  /// Throws Error subclasses when labels/adjacency violate the invariants.
  void validate() const;
};

/// Directed labelled network: zero diagonal, no symmetry requirement.
struct DirectedNetwork {
  BitMatrix adj;  // adj(i, j) = 1 means an arc i -> j
  std::vector<std::uint8_t> labels;

  DirectedNetwork() = default;
  DirectedNetwork(int n, std::vector<std::uint8_t> labels_in);

  int n() const { return adj.n(); }
  bool arc(int i, int j) const { return adj.get(i, j); }
  void add_arc(int i, int j);
  int minority_count() const;
  void validate() const;
};

/**
 * Minority representation profile: values[K-1] is the fraction of group-1
 * nodes among the first K entries of a ranking, K = 1..n.
 */
struct RepresentationProfile {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double at_k(int k) const { return values.at(static_cast<std::size_t>(k) - 1); }
};

/// Row sums of the adjacency matrix.
std::vector<int> degrees(const LabeledNetwork& net);

/// Column sums (arcs pointing at each node).
std::vector<int> in_degrees(const DirectedNetwork& net);

/**
 * Full ordering of node indices by nonincreasing score.  Within each tie
 * class the order is a uniform random permutation: every node draws an
 * independent tie-break key from rng (in index order), and sorting by
 * (score desc, key) realizes a uniform shuffle of the class.
 */
std::vector<int> top_k_ranking(const std::vector<int>& scores, RngStream& rng);

/// Profile of group-1 representation along ranking prefixes.
RepresentationProfile minority_profile(const std::vector<std::uint8_t>& labels,
                                       const std::vector<int>& ranking);
RepresentationProfile minority_profile(const LabeledNetwork& net,
                                       const std::vector<int>& ranking);

/**
 * Spearman rank correlation 1 - 6*sum(d^2)/(n(n^2-1)) between two orderings
 * (d = per-node difference of rank positions).  Returns 1 for n < 2.
 * Throws DimensionError when the inputs are not equal-length permutations.
 */
double spearman(const std::vector<int>& order_a, const std::vector<int>& order_b);

}  // namespace netrank
