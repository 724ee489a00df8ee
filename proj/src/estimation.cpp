#include "netrank/estimation.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "netrank/errors.hpp"

namespace netrank {

namespace {

// Bit mask per word with bit j set iff labels[j] == group.
std::vector<std::uint64_t> group_mask(const std::vector<std::uint8_t>& labels,
                                      int words_per_row, std::uint8_t group) {
  std::vector<std::uint64_t> mask(static_cast<std::size_t>(words_per_row), 0);
  for (std::size_t j = 0; j < labels.size(); ++j) {
    if (labels[j] == group) mask[j >> 6] |= std::uint64_t{1} << (j & 63);
  }
  return mask;
}

int count_group(const std::vector<std::uint8_t>& labels, std::uint8_t group) {
  int count = 0;
  for (std::uint8_t g : labels) count += g == group;
  return count;
}

void require_two_per_group(int n1, int n2) {
  if (n1 < 2 || n2 < 2) {
    throw DegenerateStatisticsError(
        "moment statistics need at least two nodes per group");
  }
}

double checked_rate(double u2, double u1, const char* block) {
  if (u1 <= 0.0) {
    throw DegenerateStatisticsError(std::string("block density u1_") + block +
                                    " is zero; deletion rate undefined");
  }
  const double beta = u2 / u1;
  if (beta >= 1.0) {
    throw DegenerateStatisticsError(std::string("estimated deletion rate for "
                                                "block ") +
                                    block + " is at or above one");
  }
  return beta;
}

double checked_denominator(double value, const char* name) {
  if (value == 0.0) {
    throw DegenerateStatisticsError(std::string(name) +
                                    " is zero; estimate undefined");
  }
  return value;
}

}  // namespace

MomentStats moment_stats(const LabeledNetwork& y, const LabeledNetwork& y_star,
                         DensityMode mode) {
  const int n = y.n();
  if (y_star.n() != n) {
    throw DimensionError("replicates differ in node count");
  }
  if (y.labels != y_star.labels) {
    throw DomainError("replicates differ in group labels");
  }

  MomentStats s;
  s.n = n;
  s.n1 = count_group(y.labels, 1);
  s.n2 = n - s.n1;
  require_two_per_group(s.n1, s.n2);
  s.N1 = 0.5 * s.n1 * (s.n1 - 1);
  s.N2 = 0.5 * s.n2 * (s.n2 - 1);
  s.Nb = static_cast<double>(s.n1) * s.n2;

  const int wpr = y.adj.words_per_row();
  const auto mask1 = group_mask(y.labels, wpr, 1);
  const auto mask2 = group_mask(y.labels, wpr, 2);

  // Per unordered-pair block: edges in Y, edges in Y*, disagreements.
  // cell index: 0 = within minority, 1 = between, 2 = within majority.
  std::int64_t edges_y[3] = {0, 0, 0};
  std::int64_t edges_star[3] = {0, 0, 0};
  std::int64_t diff[3] = {0, 0, 0};
  for (int i = 0; i < n; ++i) {
    const std::uint64_t* row_y = y.adj.row(i);
    const std::uint64_t* row_s = y_star.adj.row(i);
    const int own = y.labels[static_cast<std::size_t>(i)] == 1 ? 0 : 2;
    const int first_word = (i + 1) >> 6;
    for (int w = first_word; w < wpr; ++w) {
      std::uint64_t upper = ~std::uint64_t{0};
      if (w == first_word) upper <<= (i + 1) & 63;
      const std::uint64_t wy = row_y[static_cast<std::size_t>(w)] & upper;
      const std::uint64_t ws = row_s[static_cast<std::size_t>(w)] & upper;
      const std::uint64_t wd = wy ^ ws;
      const std::uint64_t m1 = mask1[static_cast<std::size_t>(w)];
      const std::uint64_t m2 = mask2[static_cast<std::size_t>(w)];
      const std::uint64_t same = own == 0 ? m1 : m2;
      const std::uint64_t cross = own == 0 ? m2 : m1;
      edges_y[own] += std::popcount(wy & same);
      edges_star[own] += std::popcount(ws & same);
      diff[own] += std::popcount(wd & same);
      edges_y[1] += std::popcount(wy & cross);
      edges_star[1] += std::popcount(ws & cross);
      diff[1] += std::popcount(wd & cross);
    }
  }

  const double pairs[3] = {s.N1, s.Nb, s.N2};
  double u1[3];
  double u2[3];
  for (int cell = 0; cell < 3; ++cell) {
    const double mean_y = edges_y[cell] / pairs[cell];
    const double mean_star = edges_star[cell] / pairs[cell];
    u1[cell] =
        mode == DensityMode::averaged ? 0.5 * (mean_y + mean_star) : mean_y;
    u2[cell] = 0.5 * diff[cell] / pairs[cell];
  }
  s.u1_1 = u1[0];
  s.u2_1 = u2[0];
  s.u1_b = u1[1];
  s.u2_b = u2[1];
  s.u1_2 = u1[2];
  s.u2_2 = u2[2];
  return s;
}

UndirectedEstimates estimate_undirected(const MomentStats& stats) {
  UndirectedEstimates est;
  est.beta1_hat = checked_rate(stats.u2_1, stats.u1_1, "1");
  est.beta2_hat = checked_rate(stats.u2_2, stats.u1_2, "2");
  est.beta_b_hat = checked_rate(stats.u2_b, stats.u1_b, "b");
  const double root_n = std::sqrt(static_cast<double>(stats.n));
  est.kappa_hat = static_cast<double>(stats.n1) / stats.n;
  est.gamma1_hat = root_n * (est.beta_b_hat - est.beta1_hat);
  est.gamma2_hat = root_n * (est.beta_b_hat - est.beta2_hat);
  est.q_hat = stats.u1_b / (1.0 - est.beta_b_hat);
  est.mu1_hat = root_n * (stats.u1_1 / (1.0 - est.beta1_hat) - est.q_hat);
  est.mu2_hat = root_n * (stats.u1_2 / (1.0 - est.beta2_hat) - est.q_hat);
  return est;
}

DirectedStats moment_stats_directed(const DirectedNetwork& y) {
  const int n = y.n();
  DirectedStats s;
  s.n = n;
  s.n1 = count_group(y.labels, 1);
  s.n2 = n - s.n1;
  require_two_per_group(s.n1, s.n2);

  const int wpr = y.adj.words_per_row();
  const auto mask1 = group_mask(y.labels, wpr, 1);
  const auto mask2 = group_mask(y.labels, wpr, 2);

  // Transpose once so |Y_ij - Y_ji| reduces to XOR of matching rows.
  BitMatrix transpose(n);
  for (int i = 0; i < n; ++i) {
    const std::uint64_t* row = y.adj.row(i);
    for (int w = 0; w < wpr; ++w) {
      std::uint64_t word = row[static_cast<std::size_t>(w)];
      while (word != 0) {
        const int j = (w << 6) + std::countr_zero(word);
        word &= word - 1;
        transpose.set(j, i);
      }
    }
  }

  std::int64_t arcs_to_1 = 0;   // within group 1
  std::int64_t arcs_to_2 = 0;   // within group 2
  std::int64_t arcs_1_to_2 = 0;
  std::int64_t arcs_2_to_1 = 0;
  std::int64_t asym_11 = 0;
  std::int64_t asym_22 = 0;
  std::int64_t asym_12 = 0;
  for (int i = 0; i < n; ++i) {
    const bool minority = y.labels[static_cast<std::size_t>(i)] == 1;
    const std::uint64_t* row = y.adj.row(i);
    const std::uint64_t* mirror = transpose.row(i);
    const int first_upper = (i + 1) >> 6;
    for (int w = 0; w < wpr; ++w) {
      const std::uint64_t arcs = row[static_cast<std::size_t>(w)];
      const std::uint64_t m1 = mask1[static_cast<std::size_t>(w)];
      const std::uint64_t m2 = mask2[static_cast<std::size_t>(w)];
      if (minority) {
        arcs_to_1 += std::popcount(arcs & m1);
        arcs_1_to_2 += std::popcount(arcs & m2);
      } else {
        arcs_2_to_1 += std::popcount(arcs & m1);
        arcs_to_2 += std::popcount(arcs & m2);
      }
      const std::uint64_t mismatch =
          arcs ^ mirror[static_cast<std::size_t>(w)];
      // Same-group pairs are visited once via the upper triangle; cross
      // pairs once via the minority endpoint.
      std::uint64_t upper = w > first_upper ? ~std::uint64_t{0}
                            : w == first_upper
                                ? ~std::uint64_t{0} << ((i + 1) & 63)
                                : 0;
      if (minority) {
        asym_11 += std::popcount(mismatch & m1 & upper);
        asym_12 += std::popcount(mismatch & m2);
      } else {
        asym_22 += std::popcount(mismatch & m2 & upper);
      }
    }
  }

  const double ordered_1 = static_cast<double>(s.n1) * (s.n1 - 1);
  const double ordered_2 = static_cast<double>(s.n2) * (s.n2 - 1);
  const double cross = static_cast<double>(s.n1) * s.n2;
  s.u11_d = arcs_to_1 / ordered_1;
  s.u22_d = arcs_to_2 / ordered_2;
  s.u11_a = asym_11 / (0.5 * ordered_1);
  s.u22_a = asym_22 / (0.5 * ordered_2);
  s.u12_d = arcs_1_to_2 / cross;
  s.u21_d = arcs_2_to_1 / cross;
  s.u12_a = asym_12 / cross;
  return s;
}

DirectedEstimates estimate_directed(const DirectedStats& stats) {
  DirectedEstimates est;
  est.stats = stats;
  est.beta11_hat =
      stats.u11_a / (2.0 * checked_denominator(stats.u11_d, "u11_d"));
  est.beta22_hat =
      stats.u22_a / (2.0 * checked_denominator(stats.u22_d, "u22_d"));
  est.p11_hat = 2.0 * stats.u11_d * stats.u11_d /
                checked_denominator(2.0 * stats.u11_d - stats.u11_a,
                                    "2 u11_d - u11_a");
  est.p22_hat = 2.0 * stats.u22_d * stats.u22_d /
                checked_denominator(2.0 * stats.u22_d - stats.u22_a,
                                    "2 u22_d - u22_a");
  est.beta12_hat = (stats.u21_d - stats.u12_d + stats.u12_a) /
                   (2.0 * checked_denominator(stats.u21_d, "u21_d"));
  est.beta21_hat = (stats.u12_d - stats.u21_d + stats.u12_a) /
                   (2.0 * checked_denominator(stats.u12_d, "u12_d"));
  est.p12_hat = 2.0 * stats.u12_d * stats.u21_d /
                checked_denominator(stats.u12_d + stats.u21_d - stats.u12_a,
                                    "u12_d + u21_d - u12_a");
  return est;
}

}  // namespace netrank
