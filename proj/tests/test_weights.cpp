#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "heavygini/error.hpp"
#include "heavygini/numerics.hpp"
#include "heavygini/weights.hpp"

using Catch::Matchers::WithinAbs;
using hg::WeightFunction;

TEST_CASE("weight evaluation", "[weights]") {
  CHECK(WeightFunction::power(2.0)(0.5) == 0.25);
  CHECK(WeightFunction::identity()(0.37) == 0.37);
  const auto b31 = WeightFunction::beta_cdf(3.0, 1.0);
  for (int i = 0; i <= 100; ++i) {
    const double t = i / 100.0;
    CHECK_THAT(b31(t), WithinAbs(t * t * t, 1e-14));
    CHECK_THAT(WeightFunction::power(1.0)(t), WithinAbs(t, 0.0));
  }
  CHECK_THROWS_AS(WeightFunction::power(2.0)(1.01), hg::DomainError);
  CHECK_THROWS_AS(WeightFunction::identity()(-0.1), hg::DomainError);
  CHECK_THROWS_AS(WeightFunction::power(0.0), hg::DomainError);
  CHECK_THROWS_AS(WeightFunction::beta_cdf(1.0, -1.0), hg::DomainError);
}

TEST_CASE("reflection", "[weights]") {
  CHECK(WeightFunction::identity().reflect().describe() == "identity");
  CHECK(WeightFunction::power(2.0).reflect()(0.5) == 0.75);
  for (double a : {0.5, 2.0, 7.0}) {
    for (double b : {0.3, 1.0, 4.5}) {
      const auto r = WeightFunction::beta_cdf(a, b).reflect();
      const auto swapped = WeightFunction::beta_cdf(b, a);
      const auto twice = r.reflect();
      const auto orig = WeightFunction::beta_cdf(a, b);
      double prev = 0.0;
      for (int i = 0; i <= 200; ++i) {
        const double t = i / 200.0;
        CHECK_THAT(r(t), WithinAbs(swapped(t), 1e-10));
        CHECK_THAT(twice(t), WithinAbs(orig(t), 0.0));
        CHECK(r(t) >= prev);
        prev = r(t);
      }
    }
  }
  const auto p = WeightFunction::power(3.0);
  CHECK_FALSE(p.reflect().is_power());
  CHECK(p.reflect().reflect().is_power());
}

TEST_CASE("weight integrals", "[weights]") {
  for (double a : {0.5, 2.0, 3.0}) {
    for (double b : {0.7, 1.0, 6.0}) {
      const auto w = WeightFunction::beta_cdf(a, b);
      const double quad = hg::integrate([&](double t) { return w(t); }, 0.0, 1.0).value;
      CHECK_THAT(quad, WithinAbs(b / (a + b), 1e-8));
      CHECK_THAT(w.integral(), WithinAbs(b / (a + b), 1e-12));
      CHECK_THAT(w.reflect().integral(), WithinAbs(a / (a + b), 1e-12));
    }
  }
  CHECK_THAT(WeightFunction::power(2.0).integral(), WithinAbs(1.0 / 3.0, 1e-15));
}

TEST_CASE("table weights", "[weights]") {
  const auto w = WeightFunction::table({0.0, 0.5, 1.0}, {0.0, 0.8, 1.0});
  CHECK_THAT(w(0.25), WithinAbs(0.4, 1e-15));
  CHECK_THAT(w(0.75), WithinAbs(0.9, 1e-15));
  CHECK_THAT(w.integral(), WithinAbs(0.2 + 0.45, 1e-15));
  CHECK_THROWS_AS(WeightFunction::table({0.0, 0.5, 1.0}, {0.0, 0.8, 0.6}), hg::DomainError);
  CHECK_THROWS_AS(WeightFunction::table({0.0, 0.5, 0.5, 1.0}, {0.0, 0.1, 0.2, 1.0}), hg::DomainError);
  CHECK_THROWS_AS(WeightFunction::table({0.1, 1.0}, {0.0, 1.0}), hg::DomainError);
  CHECK_THROWS_AS(WeightFunction::table({0.0, 1.0}, {0.0, 1.2}), hg::DomainError);

  const auto path = std::filesystem::temp_directory_path() / "heavygini_weight_table.csv";
  {
    std::ofstream out(path);
    out << "t,w\n0,0\n0.3,0.05\n0.7,0.95\n1,1\n";
  }
  const auto loaded = WeightFunction::parse("table:" + path.string());
  CHECK_THAT(loaded(0.5), WithinAbs(0.5, 1e-15));
  std::filesystem::remove(path);
}

TEST_CASE("weight parsing", "[weights]") {
  CHECK(WeightFunction::parse("identity").is_power());
  double g = 0.0;
  CHECK(WeightFunction::parse("power:2.5").is_power(&g));
  CHECK(g == 2.5);
  double a = 0.0, b = 0.0;
  CHECK(WeightFunction::parse("beta:2,3").is_beta_cdf(&a, &b));
  CHECK((a == 2.0 && b == 3.0));
  CHECK(WeightFunction::parse("beta:2,3").reflect().describe() == "reflect(beta:2,3)");
  CHECK_THROWS_AS(WeightFunction::parse("power:x"), hg::DomainError);
  CHECK_THROWS_AS(WeightFunction::parse("cubic"), hg::DomainError);
}
