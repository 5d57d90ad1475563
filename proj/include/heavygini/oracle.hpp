#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "heavygini/distributions.hpp"
#include "heavygini/numerics.hpp"
#include "heavygini/weights.hpp"

// Brute-force reference values. Nothing here uses a closed form that the
// library itself relies on: covariances come from quadrature in the quantile
// domain, BVP3 moments from the joint d.d.f., stochastic values from
// replicated sampling.

namespace hg::oracle {

/// Cov[X, w(1−F_X(X))] = ∫₀¹ Q(u) w(1−u) du − ∫₀¹ Q(u) du · ∫₀¹ w(u) du.
/// Throws QuadratureError when an integral misses its tolerance and
/// MomentError when the margin has no finite mean.
double quad_cov_margin(const Margin& m, const WeightFunction& w, const QuadratureSpec& q = {});

/// E[X₀ (1 − F_Y(Y))^γ] for the standardized BVP3 pair (μ = 0, σ = 1), from
///   E[X₀ g(Y₀)] = ∫∫ (F̄_X(x) − F̄(x, y)) · (−g′(y)) dx dy
/// over the positive quadrant, with tail-flattening substitutions in both
/// coordinates. The density never enters.
double quad2_bvp3_moment(const Bvp3Family& f, double gamma, const QuadratureSpec& q = {});

/// Γ_γ = (E[X₀ (1−F_Y)^γ] − E[X₀]/(γ+1)) / Cov[X₀, (1−F_X)^γ], with the
/// moment from quad2_bvp3_moment and the covariance from quad_cov_margin.
double quad2_bvp3_gamma(const Bvp3Family& f, double gamma, const QuadratureSpec& q = {});

/// ∬ p over the positive quadrant for the density assembled from
/// bvp3_pdf_terms(f, norm). Equals 1 only for a correctly scaled density.
double quad2_bvp3_mass(const Bvp3Family& f, PdfNormalization norm, const QuadratureSpec& q = {});

struct NormalizationCase {
  double delta = 0.0;
  double gamma = 0.0;
  double oracle = 0.0;
  double raw = 0.0;   // closed form with raw_mixed_partial coefficients
  double unit = 0.0;  // closed form with unit_leading coefficients
};

struct NormalizationResolution {
  std::vector<NormalizationCase> cases;
  double max_gap_raw = 0.0;
  double max_gap_unit = 0.0;
  double tolerance = 1e-4;
  /// Exactly one convention is within tolerance on every case.
  bool resolved = false;
  PdfNormalization chosen = PdfNormalization::raw_mixed_partial;
};

/// Compares both coefficient conventions against quad2_bvp3_gamma on the
/// grid δ ∈ {0.5, 1.2, 2}, γ ∈ {0.5, 1, 2} with δ_X* = 3, δ_Y* = 2.5.
NormalizationResolution resolve_bvp3_normalization(const QuadratureSpec& q = {});

enum class StatisticKind { cw, pearson, gini_premium };

struct Statistic {
  StatisticKind kind = StatisticKind::cw;
  WeightFunction weight = WeightFunction::identity();

  static Statistic cw(WeightFunction w) { return {StatisticKind::cw, std::move(w)}; }
  static Statistic pearson() { return {StatisticKind::pearson, WeightFunction::identity()}; }
  static Statistic gini_premium(WeightFunction w) { return {StatisticKind::gini_premium, std::move(w)}; }

  std::string describe() const;
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;  // spread of the replications / √R
  std::vector<double> replications;
};

/// Mean of `replications` independent evaluations of the statistic, each on
/// n fresh pairs drawn with seed derive_seed(seed, r). Requires n >= 1000 and
/// replications >= 10. A degenerate replication throws DegenerateError naming
/// its index.
McEstimate mc_reference(const BivariateFamily& f, const Statistic& stat, std::size_t n,
                        std::uint64_t seed, std::size_t replications);

/// Cov[X, w(1−F_X(X))] estimated by replicated sampling of the X margin of f;
/// the sampled counterpart of quad_cov_margin.
McEstimate mc_cov_margin(const BivariateFamily& f, const WeightFunction& w, std::size_t n,
                         std::uint64_t seed, std::size_t replications);

}  // namespace hg::oracle
