#include "heavygini/wipm.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "heavygini/error.hpp"
#include "heavygini/io.hpp"
#include "heavygini/kernels.hpp"
#include "heavygini/rng.hpp"
#include "parallel.hpp"
#include "ranks.hpp"

namespace hg {

std::string_view premium_method_name(PremiumMethod m) {
  switch (m) {
    case PremiumMethod::empirical: return "empirical";
    case PremiumMethod::closed_identity: return "closed_identity";
  }
  return "unknown";
}

std::string_view orientation_name(Orientation o) {
  return o == Orientation::survival ? "survival" : "distribution";
}

namespace {

double mean_of(std::span<const double> v) {
  if (std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); })) return v.front();
  return kernels::sum(v) / static_cast<double>(v.size());
}

PremiumResult assemble(double base, double loading, PremiumMethod method) {
  PremiumResult r;
  r.base = base;
  r.loading = loading;
  r.premium = base + loading;
  r.method = method;
  return r;
}

// Weight table indexed like RankGrid::upper_index, so that entry
// upper_index(2r) holds w(1 − r/(n+1)) or, flipped, w(r/(n+1)).
std::vector<double> premium_table(const detail::RankGrid& grid, const WeightFunction& w,
                                  Orientation o) {
  std::vector<double> t = grid.table(w, false);
  if (o == Orientation::distribution) {
    std::reverse(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(2 * (grid.n + 1) + 1));
  }
  return t;
}

// Rank weights of the reference risk plus what the bootstrap needs.
struct ReferenceWeights {
  detail::TieGroups groups;
  detail::RankGrid grid;
  std::vector<double> table;
  std::vector<double> values;
  double total = 0.0;
};

ReferenceWeights reference_weights(std::span<const double> ys, const WeightFunction& w, Orientation o) {
  ReferenceWeights r{detail::tie_groups(ys), detail::RankGrid(ys.size()), {}, {}, 0.0};
  if (r.groups.groups() < 2) {
    throw DegenerateError("reference risk takes a single value; its ranks carry no information");
  }
  r.table = premium_table(r.grid, w, o);
  r.values.resize(ys.size());
  const std::vector<double> ones(ys.size(), 1.0);
  detail::resampled_weights(r.groups, ones, r.table, r.grid, r.values);
  r.total = kernels::sum(r.values);
  if (!(r.total > 0.0)) {
    throw DegenerateError("weight " + w.describe() + " vanishes on every rank of the reference risk");
  }
  return r;
}

double loading_against(std::span<const double> xs, double base, const ReferenceWeights& ref) {
  return kernels::centered_dot(xs, ref.values, base) / ref.total;
}

}  // namespace

PremiumResult weighted_premium(const PairedSample& s, const std::function<double(double)>& v) {
  s.validate();
  std::vector<double> vy(s.size());
  std::transform(s.ys.begin(), s.ys.end(), vy.begin(), v);
  for (std::size_t i = 0; i < vy.size(); ++i) {
    if (!std::isfinite(vy[i]) || vy[i] < 0.0) {
      throw DomainError("value function must be finite and non-negative (row " + std::to_string(i) + ")");
    }
  }
  const double total = kernels::sum(vy);
  if (!(total > 0.0)) throw DegenerateError("weighted premium: sum of v(y) is zero");
  const double base = mean_of(s.xs);
  auto r = assemble(base, kernels::centered_dot(s.xs, vy, base) / total, PremiumMethod::empirical);
  r.metadata["n"] = std::to_string(s.size());
  return r;
}

PremiumResult gini_premium(std::span<const double> xs, std::span<const double> ys,
                           const WeightFunction& w, const PremiumOptions& opt) {
  detail::require_paired(xs, ys);
  const ReferenceWeights ref = reference_weights(ys, w, opt.orientation);
  const double base = mean_of(xs);
  PremiumResult r = assemble(base, loading_against(xs, base, ref), PremiumMethod::empirical);
  r.metadata["n"] = std::to_string(xs.size());
  r.metadata["weight"] = w.describe();
  r.metadata["orientation"] = std::string(orientation_name(opt.orientation));
  if (opt.boot.resamples == 0) return r;

  const std::size_t n = xs.size();
  std::vector<double> values(opt.boot.resamples, std::nan(""));
  detail::parallel_for(opt.boot.resamples, [&](std::size_t b) {
    Rng rng(derive_seed(opt.boot.seed, b));
    std::vector<double> counts(n), wy(n, 0.0);
    detail::draw_counts(rng, counts);
    detail::resampled_weights(ref.groups, counts, ref.table, ref.grid, wy);
    const double mean = kernels::weighted_sum(xs, counts) / static_cast<double>(n);
    const double total = kernels::weighted_sum(wy, counts);
    if (total > 0.0) values[b] = mean + kernels::weighted_centered_dot(xs, counts, wy, mean) / total;
  });
  std::erase_if(values, [](double v) { return std::isnan(v); });
  r.std_error = detail::sample_sd(values);
  r.metadata["bootstrap_resamples"] = std::to_string(values.size());
  r.metadata["bootstrap_seed"] = std::to_string(opt.boot.seed);
  return r;
}

PremiumResult gini_premium(const PairedSample& s, const WeightFunction& w, const PremiumOptions& opt) {
  s.validate();
  return gini_premium(s.xs, s.ys, w, opt);
}

PremiumResult gini_self_premium(const Margin& m, const WeightFunction& w) {
  const double integral = w.integral();
  if (!(integral > 0.0)) throw DegenerateError("weight integrates to zero");
  auto r = assemble(margin_mean(m), margin_cov_weighted(m, w) / integral, PremiumMethod::closed_identity);
  r.metadata["weight"] = w.describe();
  return r;
}

PremiumResult gini_wipm_rhs(const BivariateFamily& f, const WeightFunction& w) {
  validate(f);
  if (std::holds_alternative<Bvp3Family>(f)) {
    throw NoLinearRegressionError(
        "the Gini WIPM identity needs a linear regression of X on Y, which bvp3 does not have");
  }
  double cw = 0.0;
  std::string route = "closed_form";
  try {
    cw = closed_cw(f, w).value;
  } catch (const UnsupportedError&) {
    cw = cw_via_regression(f, w).value;
    route = "regression_route";
  }
  const Margin mx = margin_x(f);
  const Margin my = margin_y(f);
  const double cov_x = margin_cov_weighted(mx, w);
  const double cov_y = margin_cov_weighted(my, w);
  const double mean_y = margin_mean(my);
  const double pi_y = gini_self_premium(my, w).premium;
  const double slope = cw * cov_x / cov_y;

  PremiumResult r = assemble(margin_mean(mx), slope * (pi_y - mean_y), PremiumMethod::closed_identity);
  r.metadata["family"] = describe(f);
  r.metadata["weight"] = w.describe();
  r.metadata["cw"] = io::format_number(cw);
  r.metadata["cw_route"] = route;
  r.metadata["slope"] = io::format_number(slope);
  r.metadata["pi_y"] = io::format_number(pi_y);
  if (const auto* n = std::get_if<NormalFamily>(&f)) {
    r.metadata["slope_elliptical"] = io::format_number(n->rho * n->sigma_x / n->sigma_y);
  } else if (const auto* t = std::get_if<EllipticalTFamily>(&f)) {
    r.metadata["slope_elliptical"] = io::format_number(t->sigma_xy / (t->sigma_y * t->sigma_y));
  }
  return r;
}

PremiumResult gini_wipm_rhs(const PairedSample& s, const WeightFunction& w) {
  s.validate();
  const double cw = empirical_cw_value(s.xs, s.ys, w);
  const double mean_x = mean_of(s.xs);
  const double mean_y = mean_of(s.ys);
  const auto wx = detail::reflected_rank_weights(s.xs, w, false);
  const auto wy = detail::reflected_rank_weights(s.ys, w, false);
  const double cov_x = kernels::centered_dot(s.xs, wx, mean_x);
  const double cov_y = kernels::centered_dot(s.ys, wy, mean_y);
  if (!(std::fabs(cov_y) > 0.0)) throw DegenerateError("Cov[Y, w(1-F_Y(Y))] vanishes on the sample");
  const double pi_y = gini_premium(s.ys, s.ys, w).premium;
  const double slope = cw * cov_x / cov_y;
  PremiumResult r = assemble(mean_x, slope * (pi_y - mean_y), PremiumMethod::empirical);
  r.metadata["n"] = std::to_string(s.size());
  r.metadata["weight"] = w.describe();
  r.metadata["cw"] = io::format_number(cw);
  r.metadata["slope"] = io::format_number(slope);
  r.metadata["pi_y"] = io::format_number(pi_y);
  return r;
}

PremiumResult classical_wipm_rhs(const PairedSample& s, const std::function<double(double)>& v) {
  s.validate();
  const double mean_x = mean_of(s.xs);
  const double mean_y = mean_of(s.ys);
  const auto m = kernels::centered_moments(s.xs, s.ys, mean_x, mean_y);
  if (!(m.syy > 0.0)) throw DegenerateError("classical WIPM: Y is constant");
  const PairedSample yy{s.ys, s.ys, s.meta};
  const double pi_y = weighted_premium(yy, v).premium;
  // ρ √(s²_X / s²_Y) = s_XY / s²_Y
  const double slope = m.sxy / m.syy;
  PremiumResult r = assemble(mean_x, slope * (pi_y - mean_y), PremiumMethod::empirical);
  r.metadata["n"] = std::to_string(s.size());
  r.metadata["slope"] = io::format_number(slope);
  r.metadata["pi_y"] = io::format_number(pi_y);
  return r;
}

// ------------------------------------------------------------- portfolio

void Portfolio::validate() const {
  if (columns.size() < 2) throw DomainError("a portfolio needs at least two loss columns");
  if (names.size() != columns.size()) throw DomainError("portfolio: one name per column required");
  const std::size_t n = columns.front().size();
  if (n < 3) throw DomainError("portfolio: need at least 3 rows");
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != n) {
      throw DomainError("portfolio column '" + names[j] + "' has " + std::to_string(columns[j].size()) +
                        " rows, expected " + std::to_string(n));
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(columns[j][i])) {
        throw DomainError("portfolio column '" + names[j] + "' row " + std::to_string(i) + " is not finite");
      }
    }
  }
}

std::vector<double> Portfolio::aggregate() const {
  std::vector<double> s(rows(), 0.0);
  for (const auto& col : columns) {
    for (std::size_t i = 0; i < s.size(); ++i) s[i] += col[i];
  }
  return s;
}

Portfolio Portfolio::from_csv(const io::CsvTable& table) {
  Portfolio p{table.names, table.columns};
  if (p.names.size() != p.columns.size()) {
    p.names.clear();
    for (std::size_t j = 0; j < p.columns.size(); ++j) p.names.push_back("x" + std::to_string(j + 1));
  }
  p.validate();
  return p;
}

AllocationReport allocate(const Portfolio& p, const WeightFunction& w, Orientation orientation) {
  p.validate();
  const std::vector<double> total = p.aggregate();
  const ReferenceWeights ref = reference_weights(total, w, orientation);

  AllocationReport out;
  out.parts.resize(p.columns.size());
  detail::parallel_for(p.columns.size(), [&](std::size_t j) {
    const double base = mean_of(p.columns[j]);
    out.parts[j].name = p.names[j];
    out.parts[j].result = assemble(base, loading_against(p.columns[j], base, ref), PremiumMethod::empirical);
  });
  const double base = mean_of(total);
  out.aggregate = assemble(base, loading_against(total, base, ref), PremiumMethod::empirical);
  out.aggregate.metadata["weight"] = w.describe();
  out.aggregate.metadata["orientation"] = std::string(orientation_name(orientation));
  out.aggregate.metadata["n"] = std::to_string(total.size());
  double sum = 0.0;
  for (const auto& part : out.parts) sum += part.result.premium;
  out.additivity_gap = sum - out.aggregate.premium;
  return out;
}

}  // namespace hg
