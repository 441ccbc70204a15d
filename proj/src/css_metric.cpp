#include "stylemetric/css_metric.hpp"

#include <algorithm>
#include <cmath>

namespace stylemetric {

StyleVector style_vector(const CheckReport& report) {
  if (report.unparseable) {
    throw UnparseableSource("unparseable source" + (report.file.empty() ? std::string() : ": " + report.file) +
                            (report.diagnostic.empty() ? std::string() : " (" + report.diagnostic + ")"));
  }
  std::array<int, kAttributeCount> counts{};
  for (const auto& v : report.violations) ++counts[static_cast<std::size_t>(index(v.attribute))];
  StyleVector out;
  for (const auto& i : attribute_table()) {
    if (i.css_index == 0) continue;
    const auto k = static_cast<std::size_t>(index(i.id));
    const int opp = report.opportunities[k];
    if (opp > 0) out[i.id] = std::min(1.0, static_cast<double>(counts[k]) / opp);
  }
  return out;
}

Distribution normalize(const StyleVector& v, double eps) {
  if (!(eps > 0)) throw std::invalid_argument("epsilon must be positive");
  Distribution d(v.c.begin(), v.c.end());
  double sum = 0;
  for (double& x : d) {
    x += eps;
    sum += x;
  }
  for (double& x : d) x /= sum;
  return d;
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("distribution lengths differ");
  double sum = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0) continue;
    if (q[i] <= 0) throw std::invalid_argument("q has zero mass where p is positive");
    sum += p[i] * std::log2(p[i] / q[i]);
  }
  return std::max(0.0, sum);
}

double js_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("distribution lengths differ");
  std::vector<double> m(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) m[i] = 0.5 * (p[i] + q[i]);
  const double js = 0.5 * (kl_divergence(p, m) + kl_divergence(q, m));
  return std::clamp(js, 0.0, 1.0);
}

double css(const StyleVector& gen, const StyleVector& ref, double eps) {
  const auto p = normalize(gen, eps);
  const auto q = normalize(ref, eps);
  return 1.0 - js_divergence(p, q);
}

}  // namespace stylemetric
