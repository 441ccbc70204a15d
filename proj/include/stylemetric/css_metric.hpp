#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <vector>

#include "stylemetric/style_checks.hpp"

namespace stylemetric {

inline constexpr double kDefaultEpsilon = 1e-6;

/// Per-criterion violation fractions, indexed by css_index - 1.
struct StyleVector {
  std::array<double, kCriteriaCount> c{};

  double& operator[](Attribute a) { return c[static_cast<std::size_t>(info(a).css_index - 1)]; }
  double operator[](Attribute a) const { return c[static_cast<std::size_t>(info(a).css_index - 1)]; }
  bool operator==(const StyleVector&) const = default;
};

class UnparseableSource : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Distribution = std::vector<double>;

/// violations / opportunities per criterion (0 without opportunities).
/// Throws UnparseableSource for unparseable reports.
StyleVector style_vector(const CheckReport& report);

/// (c_i + eps) / sum_j (c_j + eps).
Distribution normalize(const StyleVector& v, double eps = kDefaultEpsilon);

/// Sum p_i log2(p_i / q_i) with 0 log 0 = 0. Throws std::invalid_argument on
/// length mismatch or when some q_i = 0 < p_i.
double kl_divergence(std::span<const double> p, std::span<const double> q);

/// Jensen-Shannon divergence in bits; symmetric, in [0, 1].
double js_divergence(std::span<const double> p, std::span<const double> q);

/// 1 - JS(normalize(gen), normalize(ref)).
double css(const StyleVector& gen, const StyleVector& ref, double eps = kDefaultEpsilon);

}  // namespace stylemetric
