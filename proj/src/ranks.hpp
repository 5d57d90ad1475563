#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "heavygini/rng.hpp"
#include "heavygini/weights.hpp"

namespace hg::detail {

// Tie groups of a sample in ascending order: `order` lists indices sorted by
// value, group g spanning order[start[g] .. start[g+1]).
struct TieGroups {
  std::vector<std::size_t> order;
  std::vector<std::size_t> start;

  std::size_t groups() const { return start.empty() ? 0 : start.size() - 1; }
};

TieGroups tie_groups(std::span<const double> v);

// Weight arguments live on the grid t_j = j / (2(n+1)); an average rank r maps
// to 1 − r/(n+1), i.e. j = 2(n+1) − 2r, which is an integer even with ties.
struct RankGrid {
  std::size_t n;
  double denom;
  explicit RankGrid(std::size_t n_) : n(n_), denom(2.0 * static_cast<double>(n_ + 1)) {}
  double t(std::size_t j) const { return static_cast<double>(j) / denom; }
  std::size_t upper_index(std::size_t twice_rank) const { return 2 * (n + 1) - twice_rank; }

  // w(t_j). With `centered` the identity weight is shifted to t_j − ½, which
  // leaves every covariance ratio unchanged and makes the values exactly
  // antisymmetric about the middle of the grid, so C(x, −x) = −1 holds to
  // the last bit. Premiums need the plain values.
  double weight(const WeightFunction& w, std::size_t j, bool centered = true) const {
    if (centered && std::holds_alternative<IdentityWeight>(w.shape())) {
      return (static_cast<double>(j) - static_cast<double>(n + 1)) / denom;
    }
    return w(t(j));
  }

  // w(t_j) for j = 0 .. 2(n+1), plus one spare slot.
  std::vector<double> table(const WeightFunction& w, bool centered = true) const;
};

// w(1 − û_i) for every observation, û = average rank / (n+1).
std::vector<double> reflected_rank_weights(std::span<const double> v, const WeightFunction& w,
                                           bool centered = true);
// w(û_i).
std::vector<double> rank_weights(std::span<const double> v, const WeightFunction& w);

// Resampling with replacement, carried as multiplicities c_i.
void draw_counts(Rng& rng, std::vector<double>& counts);

// w(1 − û) for the resample described by `counts`, read from `table`
// (as built by RankGrid::table). Entries with zero multiplicity are left alone.
void resampled_weights(const TieGroups& g, const std::vector<double>& counts,
                       const std::vector<double>& table, const RankGrid& grid,
                       std::vector<double>& out);

double sample_sd(const std::vector<double>& v);

double checked_ratio(double num, double den, double scale, const char* what);
void require_paired(std::span<const double> xs, std::span<const double> ys);
double abs_deviation(std::span<const double> x, double mean);

}  // namespace hg::detail
