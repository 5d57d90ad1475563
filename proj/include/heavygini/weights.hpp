#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace hg {

struct IdentityWeight {};

struct PowerWeight {
  double gamma;
};

struct BetaCdfWeight {
  double a;
  double b;
};

// Piecewise-linear weight through (t, w(t)) knots; t runs from 0 to 1.
struct TableWeight {
  std::vector<double> t;
  std::vector<double> w;
};

/// A member of the class of non-decreasing maps [0,1] → [0,1] used as the
/// rank weight in weighted Gini correlations.
///
/// Admissibility is checked once at construction so that eval() stays cheap.
/// A weight may carry a reflection flag, in which case it evaluates
/// w*(t) = 1 − w(1 − t).
class WeightFunction {
 public:
  using Shape = std::variant<IdentityWeight, PowerWeight, BetaCdfWeight, TableWeight>;

  static WeightFunction identity();
  static WeightFunction power(double gamma);
  static WeightFunction beta_cdf(double a, double b);
  static WeightFunction table(std::vector<double> t, std::vector<double> w);

  /// Two-column CSV "t,w" with an optional header row and strictly increasing t.
  static WeightFunction load_table_csv(const std::filesystem::path& path);

  /// Parses "identity", "power:γ", "beta:a,b" or "table:<csv path>".
  static WeightFunction parse(std::string_view text);

  double eval(double t) const;
  double operator()(double t) const { return eval(t); }

  /// w*(t) = 1 − w(1−t). reflect().reflect() gives back the original weight.
  WeightFunction reflect() const;

  /// ∫₀¹ w(t) dt, which equals E[w(1 − F(X))] for continuous F.
  double integral() const;

  const Shape& shape() const noexcept { return shape_; }
  bool reflected() const noexcept { return reflected_; }

  /// Non-reflected power weight (Identity counts as γ = 1).
  bool is_power(double* gamma = nullptr) const;
  /// Non-reflected beta-c.d.f. weight.
  bool is_beta_cdf(double* a = nullptr, double* b = nullptr) const;

  std::string describe() const;

 private:
  WeightFunction(Shape shape, bool reflected) : shape_(std::move(shape)), reflected_(reflected) {}
  double eval_base(double t) const;

  Shape shape_;
  bool reflected_ = false;
};

}  // namespace hg
