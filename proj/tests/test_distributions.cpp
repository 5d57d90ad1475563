#include <catch_amalgamated.hpp>

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numeric>

#include "heavygini/distributions.hpp"
#include "heavygini/error.hpp"
#include "heavygini/numerics.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using namespace hg;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// P[Z1 > h, Z2 > k] = ∫_h^∞ φ(x) Φ̄((k − r x)/√(1−r²)) dx.
double bvn_oracle(double h, double k, double r) {
  boost::math::normal_distribution<double> n01;
  auto f = [&](double x) {
    return boost::math::pdf(n01, x) *
           boost::math::cdf(boost::math::complement(n01, (k - r * x) / std::sqrt(1.0 - r * r)));
  };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, h, kInf, 15, 1e-14);
}

// Same for the bivariate t, through the conditional law
// T2 | T1 = x ~ r x + √((1−r²)(ν+x²)/(ν+1)) · t_{ν+1}.
double bvt_oracle(double a, double b, double r, double nu) {
  boost::math::students_t_distribution<double> tn(nu), tn1(nu + 1.0);
  auto f = [&](double x) {
    const double scale = std::sqrt((1.0 - r * r) * (nu + x * x) / (nu + 1.0));
    return boost::math::pdf(tn, x) * boost::math::cdf(boost::math::complement(tn1, (b - r * x) / scale));
  };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, kInf, 10, 1e-11);
}

double quantile_of(std::vector<double> v, double p) {
  const auto idx = static_cast<std::size_t>(p * (v.size() - 1));
  std::nth_element(v.begin(), v.begin() + idx, v.end());
  return v[idx];
}

// Two-sample Kolmogorov–Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::fabs(double(i) / a.size() - double(j) / b.size()));
  }
  return d;
}

}  // namespace

TEST_CASE("Pareto margin", "[distributions]") {
  const ParetoIIMargin m{0.0, 1.0, 2.0};
  CHECK(margin_quantile(ParetoIIMargin{0.0, 1.0, 3.3}, 0.0) == 0.0);
  CHECK_THAT(margin_quantile(m, 0.75), WithinAbs(1.0, 1e-15));
  CHECK_THROWS_AS(margin_quantile(m, 1.0), DomainError);
  CHECK_THROWS_AS(margin_quantile(m, -0.1), DomainError);

  for (double delta : {0.3, 1.0, 2.0, 5.87}) {
    const ParetoIIMargin p{1.5, 2.0, delta};
    double prev = -kInf;
    for (int i = 0; i < 999; ++i) {
      const double u = i / 1000.0;
      const double q = margin_quantile(p, u);
      CHECK(q > prev);
      prev = q;
      CHECK_THAT(margin_ddf(p, q), WithinAbs(1.0 - u, 1e-12));
    }
  }

  CHECK_THAT(margin_mean(ParetoIIMargin{0.0, 1.0, 2.0}), WithinAbs(1.0, 1e-15));
  CHECK_THAT(margin_mean(ParetoIIMargin{3.0, 2.0, 5.0}), WithinAbs(3.5, 1e-15));
  CHECK_THAT(margin_mean(ParetoIIMargin{0.0, 1.0, 1.0001}), WithinRel(10000.0, 1e-9));
  CHECK_THROWS_AS(margin_mean(ParetoIIMargin{0.0, 1.0, 1.0}), MomentError);
}

TEST_CASE("generic margins", "[distributions]") {
  const Margin pareto = ParetoIIMargin{0.0, 1.0, 2.5};
  const Margin normal = NormalMargin{1.0, 2.0};
  const Margin student = StudentTMargin{0.0, 1.0, 3.0};
  const Margin uniform = UniformMargin{0.0, 1.0};
  for (double s : {1e-3, 0.2, 0.5, 0.9}) {
    CHECK_THAT(margin_survival_quantile(pareto, s), WithinRel(margin_quantile(pareto, 1.0 - s), 1e-10));
    CHECK_THAT(margin_survival_quantile(normal, s), WithinAbs(margin_quantile(normal, 1.0 - s), 1e-10));
    CHECK_THAT(margin_ddf(student, margin_survival_quantile(student, s)), WithinRel(s, 1e-9));
    CHECK_THAT(margin_survival_quantile(uniform, s), WithinAbs(1.0 - s, 1e-15));
  }
  // Far tail, where 1 − s is no longer representable to full precision.
  for (double s : {1e-12, 1e-40, 1e-300}) {
    CHECK_THAT(margin_ddf(pareto, margin_survival_quantile(pareto, s)), WithinRel(s, 1e-12));
    CHECK_THAT(margin_ddf(normal, margin_survival_quantile(normal, s)), WithinRel(s, 1e-9));
  }
  CHECK(margin_mean(normal) == 1.0);
  CHECK_THROWS_AS(margin_mean(Margin{StudentTMargin{0.0, 1.0, 1.0}}), MomentError);
}

TEST_CASE("joint_ddf closed forms", "[distributions]") {
  CHECK(joint_ddf(Bvp1Family{0, 0, 1, 1, 2.7}, 0.0, 0.0) == 1.0);
  CHECK_THAT(joint_ddf(Bvp2Family{0, 0, 1, 1, 2.1, 0.5254}, 1.0, 1.0),
             WithinRel(std::pow(3.0, -2.1) * std::pow(2.0, -0.5254), 1e-14));
  const Bvp3Family b3{0, 0, 1, 1, 1.5, 0.7, 2.2};
  for (double x : {0.0, 0.3, 4.0, 100.0}) {
    CHECK_THAT(joint_ddf(b3, x, 0.0), WithinRel(std::pow(1.0 + x, -(1.5 + 0.7)), 1e-14));
    CHECK_THAT(joint_ddf(b3, x, -3.0), WithinRel(std::pow(1.0 + x, -(1.5 + 0.7)), 1e-14));
  }
  const Bvp1Family shifted{2.0, -1.0, 3.0, 0.5, 4.0};
  CHECK_THAT(joint_ddf(shifted, 5.0, 0.0), WithinRel(std::pow(1.0 + 1.0 + 2.0, -4.0), 1e-14));
}

TEST_CASE("bivariate normal survival", "[distributions]") {
  CHECK_THAT(bivariate_normal_upper(0.0, 0.0, 0.0), WithinAbs(0.25, 1e-15));
  for (double r : {-0.999, -0.95, -0.8, -0.5, -0.1, 0.0, 0.2, 0.6, 0.9, 0.93, 0.99999}) {
    CHECK_THAT(bivariate_normal_upper(0.0, 0.0, r),
               WithinAbs(0.25 + std::asin(r) / (2.0 * std::acos(-1.0)), 1e-14));
    for (double h : {-3.0, -0.7, 0.0, 1.1, 2.5}) {
      for (double k : {-2.0, 0.3, 1.9}) {
        CHECK_THAT(bivariate_normal_upper(h, k, r), WithinAbs(bvn_oracle(h, k, r), 1e-13));
      }
    }
  }
  CHECK(bivariate_normal_upper(kInf, 0.0, 0.4) == 0.0);
  CHECK_THAT(bivariate_normal_upper(-kInf, 1.0, 0.4), WithinAbs(0.15865525393145707, 1e-15));
  const NormalFamily nf{1.0, -2.0, 2.0, 3.0, 0.35};
  CHECK_THAT(joint_ddf(nf, 2.0, 1.0), WithinAbs(bvn_oracle(0.5, 1.0, 0.35), 1e-13));
}

TEST_CASE("bivariate t survival", "[distributions]") {
  for (double nu : {1.5, 3.0, 10.0}) {
    for (double r : {-0.6, 0.0, 0.45, 0.95}) {
      const EllipticalTFamily f{0.0, 0.0, 1.0, 2.0, r * 2.0, nu};
      for (double a : {-1.0, 0.0, 2.0}) {
        for (double b : {-2.0, 0.5, 6.0}) {
          CHECK_THAT(joint_ddf(f, a, b), WithinAbs(bvt_oracle(a, b / 2.0, r, nu), 1e-9));
        }
      }
    }
  }
}

TEST_CASE("family validation and parsing", "[distributions]") {
  CHECK_THROWS_AS(validate(BivariateFamily{NormalFamily{0, 0, 1, 1, 1.0}}), DomainError);
  CHECK_THROWS_AS(validate(BivariateFamily{Bvp1Family{0, 0, -1, 1, 2.0}}), DomainError);
  CHECK_THROWS_AS(validate(BivariateFamily{Bvp3Family{0, 0, 1, 1, 1.0, 0.0, 1.0}}), DomainError);
  CHECK_THROWS_AS(validate(BivariateFamily{EllipticalTFamily{0, 0, 1, 1, 1.0, 3.0}}), DomainError);
  CHECK_THROWS_AS(validate(BivariateFamily{EllipticalTFamily{0, 0, 1, 1, 0.2, 1.0}}), DomainError);

  const auto f = family_from_config({{"family", "bvp2"}, {"delta", "2.1"}, {"delta_y", "0.5254"}, {"sigma_x", "3"}});
  REQUIRE(std::holds_alternative<Bvp2Family>(f));
  CHECK(std::get<Bvp2Family>(f).sigma_x == 3.0);
  CHECK(describe(f) == "family=bvp2 mu_x=0 mu_y=0 sigma_x=3 sigma_y=1 delta=2.1 delta_y=0.5254");
  CHECK_THROWS_AS(family_from_config({{"family", "bvp9"}}), DomainError);
  CHECK_THROWS_AS(family_from_config({{"family", "bvp1"}, {"delta", "two"}}), DomainError);
  CHECK_THROWS_AS(family_from_config({{"delta", "2"}}), DomainError);
}

TEST_CASE("regression lines and Pearson", "[distributions]") {
  CHECK_THAT(regression_line(Bvp1Family{0, 0, 1, 1, 5.87}).beta, WithinRel(1.0 / 5.87, 1e-15));
  CHECK_THAT(regression_line(NormalFamily{0, 0, 2, 2, 0.5}).beta, WithinRel(0.5, 1e-15));
  CHECK_THAT(regression_line(Bvp2Family{0, 0, 1, 1, 2.1, 0.5254}).beta,
             WithinRel((2.6254 - 1.0) / (2.6254 * 1.1), 1e-14));
  CHECK_THAT(regression_line(Bvp2Family{0, 0, 1, 1, 2.1, 0.5254}).beta, WithinAbs(0.562823, 1e-6));
  CHECK_THROWS_AS(regression_line(Bvp3Family{}), NoLinearRegressionError);
  CHECK_THROWS_AS(regression_line(Bvp1Family{0, 0, 1, 1, 0.9}), MomentError);

  SECTION("E[X] = α + β E[Y]") {
    const std::vector<BivariateFamily> fams{
        NormalFamily{1.0, -2.0, 2.0, 0.5, -0.3}, EllipticalTFamily{3.0, 1.0, 1.0, 2.0, 0.8, 1.7},
        Bvp1Family{1.0, 2.0, 3.0, 0.7, 2.4}, Bvp2Family{-1.0, 4.0, 2.0, 1.5, 1.6, 0.4}};
    for (const auto& f : fams) {
      const auto line = regression_line(f);
      CHECK_THAT(margin_mean(margin_x(f)),
                 WithinAbs(line.alpha + line.beta * margin_mean(margin_y(f)), 1e-12));
    }
  }

  CHECK_THAT(pearson_closed_form(Bvp1Family{0, 0, 1, 1, 5.87}), WithinAbs(0.17036, 5e-6));
  const double p2 = pearson_closed_form(Bvp2Family{0, 0, 1, 1, 2.1, 0.5254});
  CHECK_THAT(p2, WithinRel(std::sqrt(0.1 / (2.1 * 2.6254 * 0.6254)), 1e-12));
  CHECK_THAT(p2, WithinAbs(0.1703, 5e-5));
  CHECK(pearson_closed_form(NormalFamily{0, 0, 1, 1, 0.5}) == 0.5);
  CHECK_THROWS_AS(pearson_closed_form(Bvp1Family{0, 0, 1, 1, 2.0}), MomentError);
  CHECK_THROWS_AS(pearson_closed_form(EllipticalTFamily{0, 0, 1, 1, 0.5, 2.0}), MomentError);
  CHECK_THROWS_AS(pearson_closed_form(Bvp3Family{}), UnsupportedError);
}

TEST_CASE("BVP3 density terms", "[distributions]") {
  const Bvp3Family f{0, 0, 1, 1, 1.5, 0.8, 2.3};
  const auto terms = bvp3_pdf_terms(f);
  REQUIRE(terms.size() == 6);
  auto coef = [&terms](std::array<int, 3> t) {
    for (const auto& term : terms) {
      if (term.triplet == t) return term.coefficient;
    }
    FAIL("missing triplet");
    return 0.0;
  };
  CHECK(coef({2, 0, 0}) == 0.0);
  CHECK(coef({0, 2, 0}) == 0.0);
  CHECK(coef({0, 0, 2}) == 1.5 * 2.5);
  CHECK(coef({1, 0, 1}) == 1.5 * 0.8);
  CHECK(coef({0, 1, 1}) == 1.5 * 2.3);
  CHECK(coef({1, 1, 0}) == 0.8 * 2.3);
  for (const auto& t : bvp3_pdf_terms(f, PdfNormalization::unit_leading)) {
    if (t.triplet == std::array<int, 3>{0, 0, 2}) CHECK(t.coefficient == 1.0);
  }

  SECTION("density is the mixed partial of the d.d.f.") {
    const double h = 1e-4;
    for (double x : {0.1, 0.9, 3.0}) {
      for (double y : {0.2, 2.0}) {
        const double fd = (joint_ddf(f, x + h, y + h) - joint_ddf(f, x + h, y - h) -
                           joint_ddf(f, x - h, y + h) + joint_ddf(f, x - h, y - h)) /
                          (4.0 * h * h);
        CHECK_THAT(bvp3_standard_density(f, x, y), WithinRel(fd, 1e-6));
      }
    }
  }

  SECTION("density integrates to one") {
    for (const Bvp3Family g : {f, Bvp3Family{0, 0, 1, 1, 0.6, 0.5, 0.7}}) {
      QuadratureSpec spec{1e-12, 1e-10, 20000};
      auto outer = [&](double s) {
        const double x = s / (1.0 - s);
        auto inner = [&](double t) {
          const double y = t / (1.0 - t);
          return bvp3_standard_density(g, x, y) / ((1.0 - t) * (1.0 - t));
        };
        return integrate(inner, 0.0, 1.0, spec).value / ((1.0 - s) * (1.0 - s));
      };
      CHECK_THAT(integrate(outer, 0.0, 1.0, spec).value, WithinAbs(1.0, 1e-6));
    }
  }

  SECTION("vanishing δX, δY gives the BVP1 density") {
    const Bvp3Family g{0, 0, 1, 1, 2.5, 1e-12, 1e-12};
    for (double x : {0.0, 0.5, 7.0}) {
      const double y = 1.3;
      CHECK_THAT(bvp3_standard_density(g, x, y),
                 WithinRel(2.5 * 3.5 * std::pow(1.0 + x + y, -4.5), 1e-9));
    }
  }
}

TEST_CASE("sampler determinism", "[distributions][sampling]") {
  const BivariateFamily f = Bvp3Family{0, 0, 1, 1, 1.2, 0.4, 0.9};
  const auto a = sample(f, 200000, 99);
  const auto b = sample(f, 200000, 99);
  CHECK(a.xs == b.xs);
  CHECK(a.ys == b.ys);
  const auto prefix = sample(f, 1000, 99);
  CHECK(std::equal(prefix.xs.begin(), prefix.xs.end(), a.xs.begin()));
  const auto other = sample(f, 1000, 100);
  CHECK_FALSE(std::equal(other.xs.begin(), other.xs.end(), a.xs.begin()));
  CHECK(a.meta.seed == 99);
  CHECK_THROWS_AS(sample(f, 0, 1), DomainError);
}

TEST_CASE("sampler agrees with joint_ddf", "[distributions][sampling]") {
  const std::vector<BivariateFamily> fams{
      NormalFamily{0.5, -1.0, 2.0, 1.0, 0.6}, EllipticalTFamily{0.0, 0.0, 1.0, 1.5, -0.4, 2.5},
      Bvp1Family{0.0, 0.0, 1.0, 1.0, 1.7},    Bvp2Family{1.0, 0.0, 2.0, 1.0, 2.1, 0.5254},
      Bvp3Family{0.0, 2.0, 1.0, 3.0, 0.8, 0.6, 1.4}};
  const std::size_t n = 200000;
  for (const auto& f : fams) {
    const auto s = sample(f, n, 2024);
    std::vector<double> gx, gy;
    for (double p : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      gx.push_back(quantile_of(s.xs, p));
      gy.push_back(quantile_of(s.ys, p));
    }
    // 25 correlated 3σ checks per family would false-alarm several percent of
    // the time, so allow two 3σ exceedances but no 4σ one.
    int beyond3 = 0;
    for (double x : gx) {
      for (double y : gy) {
        std::size_t hits = 0;
        for (std::size_t i = 0; i < n; ++i) hits += (s.xs[i] > x && s.ys[i] > y);
        const double p = joint_ddf(f, x, y);
        const double z = std::fabs(double(hits) / n - p) / std::sqrt(p * (1.0 - p) / n);
        INFO(family_name(f) << " at (" << x << ", " << y << ") z=" << z);
        CHECK(z < 4.0);
        beyond3 += z > 3.0;
      }
    }
    INFO(family_name(f));
    CHECK(beyond3 <= 2);
  }
}

TEST_CASE("sample mean matches margin_mean", "[distributions][sampling]") {
  const std::size_t n = 200000;
  for (double delta : {2.5, 4.0, 6.0}) {
    const BivariateFamily f = Bvp1Family{1.0, 0.0, 2.0, 1.0, delta};
    const auto s = sample(f, n, 5);
    const double mean = std::accumulate(s.xs.begin(), s.xs.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : s.xs) ss += (x - mean) * (x - mean);
    const double se = std::sqrt(ss / (n - 1) / n);
    CHECK(std::fabs(mean - margin_mean(margin_x(f))) < 3.0 * se);
  }
  const auto s = sample(NormalFamily{0, 0, 1, 1, 0.0}, n, 8);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += s.xs[i] * s.ys[i], sxx += s.xs[i] * s.xs[i], syy += s.ys[i] * s.ys[i];
  }
  CHECK(std::fabs(sxy / std::sqrt(sxx * syy)) < 3.0 / std::sqrt(double(n)));
}

TEST_CASE("binned conditional means follow the regression line", "[distributions][sampling]") {
  const std::vector<BivariateFamily> fams{
      NormalFamily{1.0, 2.0, 1.0, 2.0, 0.7}, EllipticalTFamily{0.0, 0.0, 1.0, 1.0, 0.5, 4.0},
      Bvp1Family{0.0, 0.0, 1.0, 1.0, 4.5}, Bvp2Family{0.0, 0.0, 1.0, 1.0, 4.0, 1.0}};
  const std::size_t n = 400000;
  for (const auto& f : fams) {
    const auto s = sample(f, n, 77);
    const auto line = regression_line(f);
    std::vector<double> edges;
    for (double p : {0.0, 0.2, 0.4, 0.6, 0.8, 0.95}) edges.push_back(quantile_of(s.ys, p));
    edges.push_back(std::numeric_limits<double>::infinity());
    for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
      double sum = 0, sum2 = 0, pred = 0;
      std::size_t count = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (s.ys[i] < edges[b] || s.ys[i] >= edges[b + 1]) continue;
        const double resid = s.xs[i] - (line.alpha + line.beta * s.ys[i]);
        sum += resid, sum2 += resid * resid, pred += 1.0;
        ++count;
      }
      const double mean = sum / count;
      const double se = std::sqrt((sum2 / count - mean * mean) / count);
      INFO(family_name(f) << " bin " << b);
      CHECK(std::fabs(mean) < 4.0 * se);
    }
  }
}

TEST_CASE("BVP3 with vanishing δX, δY matches BVP1 in law", "[distributions][sampling]") {
  const std::size_t n = 20000;
  const auto a = sample(Bvp3Family{0, 0, 1, 1, 2.0, 1e-9, 1e-9}, n, 1);
  const auto b = sample(Bvp1Family{0, 0, 1, 1, 2.0}, n, 2);
  // Critical value at α = 0.01 for equal sample sizes.
  const double crit = 1.628 * std::sqrt(2.0 / n);
  CHECK(ks_statistic(a.xs, b.xs) < crit);
  CHECK(ks_statistic(a.ys, b.ys) < crit);
}
