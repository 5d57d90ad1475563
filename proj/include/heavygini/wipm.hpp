#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "heavygini/distributions.hpp"
#include "heavygini/gini.hpp"
#include "heavygini/io.hpp"
#include "heavygini/sample.hpp"
#include "heavygini/weights.hpp"

namespace hg {

enum class PremiumMethod { empirical, closed_identity };

std::string_view premium_method_name(PremiumMethod m);

/// premium == base + loading holds exactly: the loading is computed first and
/// the premium is assembled from it.
struct PremiumResult {
  double premium = 0.0;
  double base = 0.0;  // E[X]
  double loading = 0.0;
  PremiumMethod method = PremiumMethod::empirical;
  std::optional<double> std_error;
  std::map<std::string, std::string> metadata;
};

/// Which end of the reference risk the rank weight emphasises.
///
/// `survival` prices with w(1 − F_Y(Y)), the textbook form. It decreases in Y,
/// so comonotone risks get a non-positive loading. `distribution` uses
/// w(F_Y(Y)) instead, which loads the premium for risks that move with Y.
enum class Orientation { survival, distribution };

std::string_view orientation_name(Orientation o);

struct PremiumOptions {
  Orientation orientation = Orientation::survival;
  BootstrapOptions boot{0, 42};
};

/// Π_v[X, Y] = Σ x_i v(y_i) / Σ v(y_i), with v applied to raw Y values.
/// Throws DegenerateError if Σ v(y_i) <= 0.
PremiumResult weighted_premium(const PairedSample& s, const std::function<double(double)>& v);

/// Π_{G,w}[X, Y] = Σ x_i w(1 − û_i) / Σ w(1 − û_i) with û_i = r_i/(n+1) the
/// average ranks of Y (or w(û_i) under Orientation::distribution).
/// Throws DegenerateError when Y has a single distinct value or Σ w = 0.
PremiumResult gini_premium(std::span<const double> xs, std::span<const double> ys,
                           const WeightFunction& w, const PremiumOptions& opt = {});
PremiumResult gini_premium(const PairedSample& s, const WeightFunction& w,
                           const PremiumOptions& opt = {});

/// π_{G,w}[X] = Π_{G,w}[X, X] for a parametric margin:
/// E[X] + Cov[X, w(1−F(X))] / ∫₀¹ w.
PremiumResult gini_self_premium(const Margin& m, const WeightFunction& w);

/// E[X] + C_w[X,Y] · Cov[X, w(1−F_X)]/Cov[Y, w(1−F_Y)] · (π_{G,w}[Y] − E[Y])
/// assembled from closed-form pieces. Needs a linear regression of X on Y
/// (normal, t, bvp1, bvp2); bvp3 throws NoLinearRegressionError.
/// metadata carries "cw", "slope" and, for the elliptical families,
/// "slope_elliptical" (ρσ_X/σ_Y, equivalently σ_XY/σ_Y²).
PremiumResult gini_wipm_rhs(const BivariateFamily& f, const WeightFunction& w);

/// The same right-hand side with every piece estimated from the sample.
PremiumResult gini_wipm_rhs(const PairedSample& s, const WeightFunction& w);

/// x̄ + ρ̂ √(s²_X/s²_Y) (Π_v[Y, Y] − ȳ). Only meaningful when both variances
/// are finite. Throws DegenerateError for constant Y.
PremiumResult classical_wipm_rhs(const PairedSample& s, const std::function<double(double)>& v);

/// Loss columns of common length; the aggregate is their row sum.
struct Portfolio {
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;

  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
  /// At least two columns, equal lengths >= 3, finite entries. Errors name the column.
  void validate() const;
  /// Σ_j columns[j][i], summed in column order.
  std::vector<double> aggregate() const;

  static Portfolio from_csv(const io::CsvTable& table);
};

struct Allocation {
  std::string name;
  PremiumResult result;
};

struct AllocationReport {
  std::vector<Allocation> parts;
  PremiumResult aggregate;  // π_{G,w}[S]
  double additivity_gap = 0.0;  // Σ parts − aggregate
};

/// Prices each column against the aggregate S with gini_premium. The parts
/// add up to π_{G,w}[S] up to floating-point summation.
AllocationReport allocate(const Portfolio& p, const WeightFunction& w,
                          Orientation orientation = Orientation::survival);

}  // namespace hg
