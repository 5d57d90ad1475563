#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "heavygini/distributions.hpp"
#include "heavygini/sample.hpp"
#include "heavygini/weights.hpp"

namespace hg {

enum class Method { empirical, closed_form, regression_route, oracle };

std::string_view method_name(Method m);

struct CorrelationReport {
  double value = 0.0;
  Method method = Method::closed_form;
  std::optional<double> std_error;  // set for the stochastic methods only
  std::string weight;
  std::map<std::string, std::string> metadata;
};

struct BootstrapOptions {
  std::size_t resamples = 200;
  std::uint64_t seed = 42;
};

/// Average ranks 1..n (ties share the mean of their positions).
std::vector<double> average_ranks(std::span<const double> v);

/// Rank-based C_w: Σ(x−x̄)w(1−û_Y) / Σ(x−x̄)w(1−û_X) with û = r/(n+1).
/// Throws DegenerateError when the denominator vanishes relative to Σ|x−x̄|.
double empirical_cw_value(std::span<const double> xs, std::span<const double> ys,
                          const WeightFunction& w);

/// As above plus a bootstrap standard error (resample b uses the stream
/// derive_seed(seed, b)). With resamples == 0 no standard error is attached.
CorrelationReport empirical_cw(const PairedSample& s, const WeightFunction& w,
                               const BootstrapOptions& boot = {});

/// Sample Pearson correlation with a bootstrap standard error.
CorrelationReport empirical_pearson(const PairedSample& s, const BootstrapOptions& boot = {});

/// λ̂_w = −Σ(x−x̄)w(û) / Σ(x−x̄)w(1−û). Uses the same rank grid and kernel as
/// empirical_cw_value, so empirical_cw_value(xs, −xs) == −λ̂_w(xs) bitwise.
double empirical_lambda_w(std::span<const double> xs, const WeightFunction& w);

/// Cov[X, w(1 − F_X(X))] for a Pareto margin in closed form. Power weights
/// and beta-c.d.f. weights (reflected ones included) are supported; other
/// weights throw UnsupportedError. δ <= 1 throws MomentError.
double cov_x_weighted(const ParetoIIMargin& m, const WeightFunction& w);

/// Cov[X, w(1 − F_X(X))] for any margin: the closed form where one exists,
/// otherwise ∫₀¹ (Q(1−s) − E X) w(s) ds by adaptive quadrature.
double margin_cov_weighted(const Margin& m, const WeightFunction& w);

/// Population C_w in closed form.
///
/// Normal and elliptical t: σ_XY/(σ_Xσ_Y) for every weight. BVP1: 1/δ for
/// every weight. BVP2: power and beta-c.d.f. weights. BVP3: power weights,
/// summing the ₃F₂ series over the density terms scaled per `norm`.
CorrelationReport closed_cw(const BivariateFamily& f, const WeightFunction& w,
                            PdfNormalization norm = PdfNormalization::raw_mixed_partial);

/// β · Cov[Y, w(1−F_Y(Y))] / Cov[X, w(1−F_X(X))].
CorrelationReport cw_via_regression(const BivariateFamily& f, const WeightFunction& w);

/// λ_w[X] = Cov[X, w(F)] / Cov[X, w*(F)] for a parametric margin.
double lambda_w(const Margin& m, const WeightFunction& w);

/// Power weight γ of `w` if it is one (identity counts as γ = 1).
std::optional<double> power_exponent(const WeightFunction& w);

/// (a, b) when w equals the Beta(a, b) c.d.f.: identity, powers, beta c.d.f.s
/// and the reflections of all three.
std::optional<std::pair<double, double>> beta_parameters(const WeightFunction& w);

}  // namespace hg
