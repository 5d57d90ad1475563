#include "heavygini/gini.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "heavygini/error.hpp"
#include "heavygini/io.hpp"
#include "heavygini/kernels.hpp"
#include "heavygini/numerics.hpp"
#include "heavygini/rng.hpp"
#include "heavygini/specfun.hpp"
#include "parallel.hpp"
#include "ranks.hpp"

namespace hg {

std::string_view method_name(Method m) {
  switch (m) {
    case Method::empirical: return "empirical";
    case Method::closed_form: return "closed_form";
    case Method::regression_route: return "regression_route";
    case Method::oracle: return "oracle";
  }
  return "unknown";
}

std::optional<double> power_exponent(const WeightFunction& w) {
  double g = 0.0;
  if (w.is_power(&g)) return g;
  return std::nullopt;
}

std::optional<std::pair<double, double>> beta_parameters(const WeightFunction& w) {
  std::optional<std::pair<double, double>> ab;
  if (std::holds_alternative<IdentityWeight>(w.shape())) {
    ab = {1.0, 1.0};
  } else if (const auto* p = std::get_if<PowerWeight>(&w.shape())) {
    ab = {p->gamma, 1.0};
  } else if (const auto* b = std::get_if<BetaCdfWeight>(&w.shape())) {
    ab = {b->a, b->b};
  } else {
    return std::nullopt;
  }
  if (w.reflected()) std::swap(ab->first, ab->second);
  return ab;
}

using detail::abs_deviation;
using detail::checked_ratio;
using detail::draw_counts;
using detail::RankGrid;
using detail::rank_weights;
using detail::reflected_rank_weights;
using detail::require_paired;
using detail::resampled_weights;
using detail::sample_sd;
using detail::tie_groups;
using detail::TieGroups;

std::vector<double> average_ranks(std::span<const double> v) {
  const TieGroups g = tie_groups(v);
  std::vector<double> out(v.size());
  for (std::size_t k = 0; k + 1 < g.start.size(); ++k) {
    const double r = 0.5 * static_cast<double>(g.start[k] + g.start[k + 1] + 1);
    for (std::size_t i = g.start[k]; i < g.start[k + 1]; ++i) out[g.order[i]] = r;
  }
  return out;
}

// --------------------------------------------------------- empirical route

double empirical_cw_value(std::span<const double> xs, std::span<const double> ys,
                          const WeightFunction& w) {
  require_paired(xs, ys);
  const double mean = kernels::sum(xs) / static_cast<double>(xs.size());
  const std::vector<double> wy = reflected_rank_weights(ys, w);
  const std::vector<double> wx = reflected_rank_weights(xs, w);
  const double num = kernels::centered_dot(xs, wy, mean);
  const double den = kernels::centered_dot(xs, wx, mean);
  return checked_ratio(num, den, abs_deviation(xs, mean), "empirical C_w");
}

double empirical_lambda_w(std::span<const double> xs, const WeightFunction& w) {
  if (xs.size() < 3) throw DomainError("need at least 3 observations");
  const double mean = kernels::sum(xs) / static_cast<double>(xs.size());
  const std::vector<double> up = rank_weights(xs, w);
  const std::vector<double> down = reflected_rank_weights(xs, w);
  const double num = kernels::centered_dot(xs, up, mean);
  const double den = kernels::centered_dot(xs, down, mean);
  return -checked_ratio(num, den, abs_deviation(xs, mean), "empirical lambda_w");
}

CorrelationReport empirical_cw(const PairedSample& s, const WeightFunction& w,
                               const BootstrapOptions& boot) {
  s.validate();
  CorrelationReport rep;
  rep.method = Method::empirical;
  rep.weight = w.describe();
  rep.value = empirical_cw_value(s.xs, s.ys, w);
  rep.metadata["n"] = std::to_string(s.size());
  if (boot.resamples == 0) return rep;

  const std::size_t n = s.size();
  const RankGrid grid(n);
  std::vector<double> table(2 * n + 3);
  detail::parallel_for((table.size() + 4095) / 4096, [&](std::size_t c) {
    const std::size_t end = std::min(table.size(), (c + 1) * 4096);
    for (std::size_t j = c * 4096; j < end; ++j) table[j] = j <= 2 * (n + 1) ? grid.weight(w, j) : 0.0;
  });
  const TieGroups gx = tie_groups(s.xs);
  const TieGroups gy = tie_groups(s.ys);

  std::vector<double> values(boot.resamples, std::nan(""));
  detail::parallel_for(boot.resamples, [&](std::size_t b) {
    Rng rng(derive_seed(boot.seed, b));
    std::vector<double> counts(n), wx(n), wy(n);
    draw_counts(rng, counts);
    resampled_weights(gx, counts, table, grid, wx);
    resampled_weights(gy, counts, table, grid, wy);
    const double mean = kernels::weighted_sum(s.xs, counts) / static_cast<double>(n);
    const double num = kernels::weighted_centered_dot(s.xs, counts, wy, mean);
    const double den = kernels::weighted_centered_dot(s.xs, counts, wx, mean);
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) scale += counts[i] * std::fabs(s.xs[i] - mean);
    if (scale > 0.0 && std::fabs(den) > 1e-12 * scale) values[b] = num / den;
  });
  std::erase_if(values, [](double v) { return std::isnan(v); });
  rep.std_error = sample_sd(values);
  rep.metadata["bootstrap_resamples"] = std::to_string(values.size());
  rep.metadata["bootstrap_seed"] = std::to_string(boot.seed);
  return rep;
}

CorrelationReport empirical_pearson(const PairedSample& s, const BootstrapOptions& boot) {
  s.validate();
  const std::size_t n = s.size();
  auto pearson = [](std::span<const double> x, std::span<const double> y) {
    const double mx = kernels::sum(x) / static_cast<double>(x.size());
    const double my = kernels::sum(y) / static_cast<double>(y.size());
    const auto m = kernels::centered_moments(x, y, mx, my);
    if (!(m.sxx > 0.0) || !(m.syy > 0.0)) throw DegenerateError("Pearson correlation of a constant margin");
    return std::clamp(m.sxy / std::sqrt(m.sxx * m.syy), -1.0, 1.0);
  };
  CorrelationReport rep;
  rep.method = Method::empirical;
  rep.weight = "pearson";
  rep.value = pearson(s.xs, s.ys);
  rep.metadata["n"] = std::to_string(n);
  if (boot.resamples == 0) return rep;
  std::vector<double> values(boot.resamples, std::nan(""));
  detail::parallel_for(boot.resamples, [&](std::size_t b) {
    Rng rng(derive_seed(boot.seed, b));
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t k = rng.index(n);
      x[i] = s.xs[k];
      y[i] = s.ys[k];
    }
    try {
      values[b] = pearson(x, y);
    } catch (const DegenerateError&) {
    }
  });
  std::erase_if(values, [](double v) { return std::isnan(v); });
  rep.std_error = sample_sd(values);
  rep.metadata["bootstrap_resamples"] = std::to_string(values.size());
  rep.metadata["bootstrap_seed"] = std::to_string(boot.seed);
  return rep;
}

// ------------------------------------------------------------ covariances

double cov_x_weighted(const ParetoIIMargin& m, const WeightFunction& w) {
  validate(m);
  if (!(m.delta > 1.0)) throw MomentError("Cov[X, w(1-F(X))] needs a finite mean (delta > 1)");
  const double d = m.delta;
  if (const auto g = power_exponent(w)) {
    const double cov = -(*g / (*g + 1.0)) * m.sigma * d / ((d - 1.0) * (d * (*g + 1.0) - 1.0));
#ifdef HEAVYGINI_FAULT_COV_SIGN
    return -cov;  // fault injection, test build only
#endif
    return cov;
  }
  const auto ab = beta_parameters(w);
  if (!ab) {
    throw UnsupportedError("closed-form Pareto covariance needs a power or beta-c.d.f. weight, got " +
                           w.describe() + "; use margin_cov_weighted (quadrature)");
  }
  const auto [a, b] = *ab;
  const double ratio = std::exp(specfun::ln_beta(a + 1.0 - 1.0 / d, b) - specfun::ln_beta(a, b));
  return m.sigma * d / (d - 1.0) * (1.0 - ratio - b / (a + b));
}

double margin_cov_weighted(const Margin& m, const WeightFunction& w) {
  validate(m);
  if (const auto* p = std::get_if<ParetoIIMargin>(&m); p && beta_parameters(w)) {
    return cov_x_weighted(*p, w);
  }
  // Each half of [0, 1] is mapped by s = u⁴ from its own endpoint, so the
  // quantile's tail singularity is smoothed and no node rounds onto 0 or 1.
  const double mean = margin_mean(m);
  auto upper_tail = [&](double u) {
    const double s = u * u * u * u;
    return (margin_survival_quantile(m, s) - mean) * w(s) * 4.0 * u * u * u;
  };
  auto lower_tail = [&](double u) {
    const double r = u * u * u * u;
    return (margin_quantile(m, r) - mean) * w(1.0 - r) * 4.0 * u * u * u;
  };
  QuadratureSpec spec;
  spec.abs_tol = 1e-12;
  spec.rel_tol = 1e-11;
  spec.max_subdivisions = 20000;
  const double split = std::pow(0.5, 0.25);
  auto guarded = [](auto f) {
    return [f](double u) { return u > 0.0 ? f(u) : 0.0; };
  };
  return integrate(guarded(upper_tail), 0.0, split, spec).value +
         integrate(guarded(lower_tail), 0.0, split, spec).value;
}

double lambda_w(const Margin& m, const WeightFunction& w) {
  const double den = margin_cov_weighted(m, w);
  if (!(std::fabs(den) > 0.0)) throw DegenerateError("lambda_w: constant weight gives zero covariance");
  return margin_cov_weighted(m, w.reflect()) / den;
}

// -------------------------------------------------------------- closed form

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

[[noreturn]] void unsupported_pair(const BivariateFamily& f, const WeightFunction& w,
                                   const char* needs) {
  std::ostringstream os;
  os << "no closed form for " << family_name(f) << " with weight " << w.describe() << " (" << needs
     << "); use the empirical route on a sample or the quadrature/Monte-Carlo oracle";
  throw UnsupportedError(os.str());
}

// Γ_γ for BVP3 via the ₃F₂ representation; coefficients from the density terms.
double bvp3_gamma(const Bvp3Family& f, double gamma, PdfNormalization norm) {
  const double dxs = f.delta_x_star();
  const double dys = f.delta_y_star();
  if (!(dxs > 1.0)) throw MomentError("bvp3 closed form needs delta + delta_x > 1 (finite E[X])");
  const double g1 = gamma + 1.0;
  double series = 0.0;
  for (const auto& term : bvp3_pdf_terms(f, norm)) {
    if (term.coefficient == 0.0) continue;
    const auto [i1, i2, i3] = term.triplet;
    const double big_d = dxs + i1 + i3;
    const double m = g1 * dys + i2 + i3;
    const double f32 = specfun::hyp_pfq({{f.delta + i3, 2.0, 1.0}, {big_d, m}, 1.0});
    series += term.coefficient * (dxs - 1.0) * g1 * (dxs * g1 - 1.0) * f32 /
              ((big_d - 2.0) * (big_d - 1.0) * (m - 1.0));
  }
  return ((dxs * g1 - 1.0) - series) / (dxs * gamma);
}

}  // namespace

CorrelationReport closed_cw(const BivariateFamily& f, const WeightFunction& w, PdfNormalization norm) {
  validate(f);
  CorrelationReport rep;
  rep.method = Method::closed_form;
  rep.weight = w.describe();
  rep.metadata["family"] = describe(f);
  rep.value = std::visit(
      overloaded{
          [](const NormalFamily& p) { return p.rho; },
          [](const EllipticalTFamily& p) { return p.sigma_xy / (p.sigma_x * p.sigma_y); },
          [](const Bvp1Family& p) {
            if (!(p.delta > 1.0)) throw MomentError("bvp1 C_w needs delta > 1");
            return 1.0 / p.delta;
          },
          [&](const Bvp2Family& p) {
            if (!(p.delta > 1.0)) throw MomentError("bvp2 C_w needs delta > 1");
            const double d = p.delta;
            const double dys = p.delta_y_star();
            if (const auto g = power_exponent(w)) {
              return (d * (*g + 1.0) - 1.0) / (d * (dys * (*g + 1.0) - 1.0));
            }
            const auto ab = beta_parameters(w);
            if (!ab) unsupported_pair(f, w, "needs a power or beta-c.d.f. weight");
            const auto [a, b] = *ab;
            auto bracket = [a = a, b = b](double delta) {
              return 1.0 - std::exp(specfun::ln_beta(a + 1.0 - 1.0 / delta, b) - specfun::ln_beta(a, b)) -
                     b / (a + b);
            };
            return bracket(dys) / (d * bracket(d));
          },
          [&](const Bvp3Family& p) {
            const auto g = power_exponent(w);
            if (!g) unsupported_pair(f, w, "needs a power weight");
            rep.metadata["bvp3_normalization"] =
                norm == PdfNormalization::raw_mixed_partial ? "raw_mixed_partial" : "unit_leading";
            return bvp3_gamma(p, *g, norm);
          },
      },
      f);
  return rep;
}

CorrelationReport cw_via_regression(const BivariateFamily& f, const WeightFunction& w) {
  const RegressionLine line = regression_line(f);
  const double cov_y = margin_cov_weighted(margin_y(f), w);
  const double cov_x = margin_cov_weighted(margin_x(f), w);
  if (!(std::fabs(cov_x) > 0.0)) throw DegenerateError("Cov[X, w(1-F(X))] is zero");
  CorrelationReport rep;
  rep.method = Method::regression_route;
  rep.weight = w.describe();
  rep.value = line.beta * cov_y / cov_x;
  rep.metadata["family"] = describe(f);
  rep.metadata["beta"] = io::format_number(line.beta);
  return rep;
}

}  // namespace hg
