#include "ranks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "heavygini/error.hpp"

namespace hg::detail {

std::vector<double> RankGrid::table(const WeightFunction& w, bool centered) const {
  std::vector<double> out(2 * n + 3, 0.0);
  for (std::size_t j = 0; j <= 2 * (n + 1); ++j) out[j] = weight(w, j, centered);
  return out;
}

TieGroups tie_groups(std::span<const double> v) {
  TieGroups g;
  g.order.resize(v.size());
  std::iota(g.order.begin(), g.order.end(), std::size_t{0});
  std::stable_sort(g.order.begin(), g.order.end(),
                   [&v](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  for (std::size_t i = 0; i < g.order.size(); ++i) {
    if (i == 0 || v[g.order[i]] != v[g.order[i - 1]]) g.start.push_back(i);
  }
  g.start.push_back(g.order.size());
  return g;
}

std::vector<double> reflected_rank_weights(std::span<const double> v, const WeightFunction& w,
                                           bool centered) {
  const TieGroups g = tie_groups(v);
  const RankGrid grid(v.size());
  std::vector<double> out(v.size());
  for (std::size_t k = 0; k + 1 < g.start.size(); ++k) {
    const std::size_t lo = g.start[k];
    const std::size_t hi = g.start[k + 1];
    const double value = grid.weight(w, grid.upper_index(lo + hi + 1), centered);
    for (std::size_t i = lo; i < hi; ++i) out[g.order[i]] = value;
  }
  return out;
}

std::vector<double> rank_weights(std::span<const double> v, const WeightFunction& w) {
  const TieGroups g = tie_groups(v);
  const RankGrid grid(v.size());
  std::vector<double> out(v.size());
  for (std::size_t k = 0; k + 1 < g.start.size(); ++k) {
    const std::size_t lo = g.start[k];
    const std::size_t hi = g.start[k + 1];
    const double value = grid.weight(w, lo + hi + 1);
    for (std::size_t i = lo; i < hi; ++i) out[g.order[i]] = value;
  }
  return out;
}

double sample_sd(const std::vector<double>& v) {
  if (v.size() < 2) return std::nan("");
  const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

void draw_counts(Rng& rng, std::vector<double>& counts) {
  std::fill(counts.begin(), counts.end(), 0.0);
  const std::size_t n = counts.size();
  for (std::size_t i = 0; i < n; ++i) counts[rng.index(n)] += 1.0;
}

void resampled_weights(const TieGroups& g, const std::vector<double>& counts,
                       const std::vector<double>& table, const RankGrid& grid,
                       std::vector<double>& out) {
  std::size_t before = 0;
  for (std::size_t k = 0; k + 1 < g.start.size(); ++k) {
    std::size_t c = 0;
    for (std::size_t i = g.start[k]; i < g.start[k + 1]; ++i) c += static_cast<std::size_t>(counts[g.order[i]]);
    if (c == 0) continue;
    const double value = table[grid.upper_index(2 * before + c + 1)];
    for (std::size_t i = g.start[k]; i < g.start[k + 1]; ++i) out[g.order[i]] = value;
    before += c;
  }
}

double checked_ratio(double num, double den, double scale, const char* what) {
  if (!(scale > 0.0) || !(std::fabs(den) > 1e-12 * scale)) {
    std::ostringstream os;
    os << what << ": denominator " << den << " vanishes (scale " << scale
       << "); the sample is degenerate (e.g. constant x)";
    throw DegenerateError(os.str());
  }
  return num / den;
}

void require_paired(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw DomainError("xs and ys differ in length");
  if (xs.size() < 3) throw DomainError("need at least 3 observations");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) {
      throw DomainError("non-finite observation at row " + std::to_string(i));
    }
  }
}

double abs_deviation(std::span<const double> x, double mean) {
  double s = 0.0;
  for (double v : x) s += std::fabs(v - mean);
  return s;
}

}  // namespace hg::detail
