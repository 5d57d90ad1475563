// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "heavygini/distributions.hpp"
#include "heavygini/error.hpp"
#include "heavygini/gini.hpp"
#include "heavygini/oracle.hpp"
#include "heavygini/rng.hpp"
#include "heavygini/specfun.hpp"
#include "heavygini/wipm.hpp"

using namespace hg;

namespace {

// Collects failures; the first few are echoed in the detail column.
struct Tally {
  int checks = 0;
  std::vector<std::string> failures;
  double worst = 0.0;  // largest |observed − expected| / tolerance seen
  std::vector<std::string> info;  // printed whether or not the criterion passes

  void near(const std::string& what, double got, double want, double tol) {
    ++checks;
    const double err = std::fabs(got - want);
    worst = std::max(worst, err / tol);
    if (!(err <= tol)) {
      std::ostringstream os;
      os.precision(12);
      os << what << ": " << got << " vs " << want << " (tol " << tol << ")";
      failures.push_back(os.str());
    }
  }
  void exact(const std::string& what, double got, double want) {
    ++checks;
    if (got != want) {
      std::ostringstream os;
      os.precision(17);
      os << what << ": " << got << " != " << want;
      failures.push_back(os.str());
    }
  }
  void require(const std::string& what, bool ok) {
    ++checks;
    if (!ok) failures.push_back(what);
  }
};

struct Criterion {
  int id;
  std::string title;
  std::function<void(Tally&)> body;
  double time_limit = 0.0;  // seconds; 0 means none
};

const std::vector<WeightFunction>& three_weights() {
  static const std::vector<WeightFunction> ws{WeightFunction::identity(), WeightFunction::power(2.0),
                                              WeightFunction::beta_cdf(2.0, 2.0)};
  return ws;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void elliptical_identity(Tally& t) {
  const std::vector<WeightFunction> ws{WeightFunction::identity(), WeightFunction::power(2.0),
                                       WeightFunction::power(0.5), WeightFunction::beta_cdf(2.0, 3.0)};
  std::uint64_t stream = 0;
  for (double rho : {-0.6, 0.0, 0.37, 0.8}) {
    const NormalFamily f{0, 0, 1, 1, rho};
    const auto s = sample(f, 200000, derive_seed(101, stream++));
    for (const auto& w : ws) {
      const std::string tag = "rho=" + fmt(rho) + " " + w.describe();
      t.exact(tag + " closed", closed_cw(f, w).value, rho);
      t.near(tag + " empirical", empirical_cw_value(s.xs, s.ys, w), rho, 0.02);
    }
  }
}

void bvp1_values(Tally& t) {
  std::uint64_t stream = 0;
  for (double d : {1.5, 3.0, 5.87}) {
    const Bvp1Family f{0, 0, 1, 1, d};
    const auto s = sample(f, 200000, derive_seed(102, stream++));
    for (double g : {0.5, 1.0, 2.0}) {
      const auto w = WeightFunction::power(g);
      const std::string tag = "delta=" + fmt(d) + " gamma=" + fmt(g);
      t.near(tag + " closed", closed_cw(f, w).value, 1.0 / d, 1e-15);
      t.near(tag + " empirical", empirical_cw_value(s.xs, s.ys, w), 1.0 / d, 0.02);
    }
  }
  t.near("delta=5.87 calibration", closed_cw(Bvp1Family{0, 0, 1, 1, 5.87}, WeightFunction::identity()).value,
         0.17036, 5e-6);
}

const Bvp2Family kBvp2{0, 0, 1, 1, 2.1, 0.5254};

void bvp2_pearson(Tally& t) {
  const double closed = pearson_closed_form(kBvp2);
  t.near("closed form", closed, 0.1703, 5e-4);
  const auto mc = oracle::mc_reference(kBvp2, oracle::Statistic::pearson(), 1000000, 103, 20);
  t.near("monte carlo mean of 20 x 1e6", mc.mean, closed, 0.03);
  // With delta = 2.1 the fourth moment is infinite and the sample correlation
  // converges very slowly; the trail below shows where it sits for each n.
  std::string trail = "sample Pearson by n (20 reps each):";
  for (std::size_t n : {10000, 100000}) {
    trail += " " + fmt(static_cast<double>(n)) + " -> " +
             fmt(oracle::mc_reference(kBvp2, oracle::Statistic::pearson(), n, 203, 20).mean) + ",";
  }
  t.info.push_back(trail + " 1e+06 -> " + fmt(mc.mean) + " (SE " + fmt(mc.std_error) + "); closed form " + fmt(closed));
}

void bvp2_gini(Tally& t) {
  const auto w = WeightFunction::power(1.0);
  const double closed = closed_cw(kBvp2, w).value;
  t.near("closed form", closed, 0.35847, 1e-5);
  const auto s = sample(kBvp2, 1000000, 104);
  t.near("empirical n=1e6", empirical_cw_value(s.xs, s.ys, w), closed, 0.02);
}

void beta_reduction(Tally& t) {
  for (double a : {0.5, 1.0, 2.0, 3.5, 6.0}) {
    for (double d : {1.2, 2.1, 3.0, 5.0, 9.0}) {
      const Bvp2Family f{0, 0, 1, 1, d, 0.5254};
      t.near("a=" + fmt(a) + " delta=" + fmt(d), closed_cw(f, WeightFunction::beta_cdf(a, 1.0)).value,
             closed_cw(f, WeightFunction::power(a)).value, 1e-10);
    }
  }
}

void figure_shape(Tally& t) {
  const auto w = WeightFunction::power(1.0);
  const int steps = 160;
  std::vector<double> gam, rho;
  for (int i = 0; i < steps; ++i) {
    const double d = 2.05 + (10.0 - 2.05) * i / (steps - 1);
    const Bvp2Family f{0, 0, 1, 1, d, 0.5254};
    gam.push_back(closed_cw(f, w).value);
    rho.push_back(pearson_closed_form(f));
  }
  t.require("Gamma_1 strictly decreasing",
            std::adjacent_find(gam.begin(), gam.end(), std::less_equal<>()) == gam.end());
  const auto top = std::max_element(rho.begin(), rho.end());
  t.require("Pearson has an interior maximum",
            top != rho.begin() && top != rho.end() - 1 && *top > rho.front() && *top > rho.back());
}

void bvp3_formula(Tally& t) {
  const auto res = oracle::resolve_bvp3_normalization();
  t.require("coefficient convention resolved", res.resolved);
  t.require("raw mixed-partial convention chosen", res.chosen == PdfNormalization::raw_mixed_partial);
  for (const auto& c : res.cases) {
    t.near("delta=" + fmt(c.delta) + " gamma=" + fmt(c.gamma) + " vs double integral", c.raw, c.oracle, 1e-4);
    const Bvp3Family f{0, 0, 1, 1, c.delta, 3.0 - c.delta, 2.5 - c.delta};
    t.near("closed_cw default", closed_cw(f, WeightFunction::power(c.gamma)).value, c.oracle, 1e-4);
  }
  for (double d : {1.5, 3.0}) {
    for (double g : {0.5, 1.0, 2.0}) {
      const auto w = WeightFunction::power(g);
      const std::string tag = "delta=" + fmt(d) + " gamma=" + fmt(g);
      t.near(tag + " bvp1 limit", closed_cw(Bvp3Family{0, 0, 1, 1, d, 1e-6, 1e-6}, w).value, 1.0 / d, 1e-3);
      t.near(tag + " bvp2 limit", closed_cw(Bvp3Family{0, 0, 1, 1, d, 1e-6, 0.5254}, w).value,
             closed_cw(Bvp2Family{0, 0, 1, 1, d, 0.5254}, w).value, 1e-3);
    }
  }
}

void estimator_properties(Tally& t) {
  const auto s = sample(Bvp1Family{0, 0, 1, 1, 3.0}, 20000, 108);
  std::vector<double> neg(s.xs.size()), scaled(s.xs.size()), affine(s.xs.size()), ey(s.ys.size());
  for (std::size_t i = 0; i < s.xs.size(); ++i) {
    neg[i] = -s.xs[i];
    scaled[i] = 4.0 * s.xs[i];
    affine[i] = 3.7 * s.xs[i] - 5.0;
    ey[i] = std::exp(s.ys[i]);
  }
  for (const auto& w : three_weights()) {
    const std::string tag = w.describe();
    const double c = empirical_cw_value(s.xs, s.ys, w);
    t.exact(tag + " C_w[X,X]", empirical_cw_value(s.xs, s.xs, w), 1.0);
    t.exact(tag + " C_w[X,-X]", empirical_cw_value(s.xs, neg, w), -empirical_lambda_w(s.xs, w));
    t.exact(tag + " rank invariance exp(Y)", empirical_cw_value(s.xs, ey, w), c);
    t.exact(tag + " scale 4X", empirical_cw_value(scaled, s.ys, w), c);
    t.near(tag + " affine 3.7X-5", empirical_cw_value(affine, s.ys, w), c, 1e-12);
  }

  const auto indep = sample(NormalFamily{0, 0, 1, 1, 0.0}, 20000, 208);
  for (const auto& w : three_weights()) {
    const auto rep = empirical_cw(indep, w, {200, 308});
    t.require(w.describe() + " independence |C_w| < 3 SE (" + fmt(rep.value) + ", SE " + fmt(*rep.std_error) + ")",
              std::fabs(rep.value) < 3.0 * *rep.std_error);
  }

  Rng rng(408);
  auto unit = [&rng] { return rng.uniform(); };
  for (int k = 0; k < 1000; ++k) {
    BivariateFamily f;
    switch (k % 3) {
      case 0: f = NormalFamily{0, 0, 1, 1, 2.0 * unit() - 1.0}; break;
      case 1: f = Bvp1Family{0, 0, 1, 1, 1.1 + 5.0 * unit()}; break;
      default: f = Bvp2Family{0, 0, 1, 1, 1.1 + 5.0 * unit(), 3.0 * unit()}; break;
    }
    auto smp = sample(f, 50, derive_seed(508, k));
    if (k % 2) {
      for (auto& y : smp.ys) y = -y;  // negative dependence too
    }
    for (const auto& w : three_weights()) {
      const double c = empirical_cw_value(smp.xs, smp.ys, w);
      const double lam = empirical_lambda_w(smp.xs, w);
      if (!(c <= 1.0 + 1e-12 && c >= -lam - 1e-12)) {
        t.require("bounds on sample " + std::to_string(k) + " " + w.describe() + ": C=" + fmt(c) +
                      " lambda=" + fmt(lam),
                  false);
      }
    }
    t.checks += 3;
  }
}

void gini_wipm(Tally& t) {
  const std::vector<BivariateFamily> families{NormalFamily{0, 0, 1, 1, 0.5}, Bvp1Family{0, 0, 1, 1, 3.0}, kBvp2};
  std::uint64_t stream = 0;
  for (const auto& f : families) {
    for (const auto& w : three_weights()) {
      const double rhs = gini_wipm_rhs(f, w).premium;
      const auto mc = oracle::mc_reference(f, oracle::Statistic::gini_premium(w), 1000000,
                                           derive_seed(109, stream++), 20);
      t.near(family_name(f) + " " + w.describe() + " (SE " + fmt(mc.std_error) + ")", mc.mean, rhs,
             3.0 * mc.std_error);
    }
  }
  const auto s = sample(kBvp2, 1000000, 209);
  for (const auto& w : three_weights()) {
    const auto rep = allocate(Portfolio{{"x", "y"}, {s.xs, s.ys}}, w);
    t.near(w.describe() + " allocation additivity", rep.additivity_gap, 0.0, 1e-10);
  }
}

void special_functions(Tally& t) {
  for (double c : {4.5, 6.0, 10.0}) {
    const double want = (c - 1.0) / (c - 3.0);
    t.near("2F1 Gauss c=" + fmt(c), specfun::gauss_2f1_at_one(2.0, 1.0, c), want, 1e-9);
    t.near("2F1 series c=" + fmt(c), specfun::hyp_pfq({{2.0, 1.0}, {c}, 1.0}), want, 1e-9);
  }
  for (double a : {0.3, 1.0, 2.5, 7.0}) {
    for (double b : {0.5, 1.0, 4.0}) {
      for (double x : {0.01, 0.2, 0.5, 0.77, 0.99}) {
        const std::string tag = "a=" + fmt(a) + " b=" + fmt(b) + " t=" + fmt(x);
        t.near(tag + " reflection", specfun::reg_inc_beta(x, a, b), 1.0 - specfun::reg_inc_beta(1.0 - x, b, a),
               1e-10);
        if (b == 1.0) t.near(tag + " power reduction", specfun::reg_inc_beta(x, a, 1.0), std::pow(x, a), 1e-10);
      }
    }
  }
  for (double d : {1.5, 2.5, 4.0, 8.0}) {
    const ParetoIIMargin m{0.0, 1.0, d};
    for (double g : {0.5, 1.0, 2.0, 4.0}) {
      const auto w = WeightFunction::power(g);
      t.near("cov power delta=" + fmt(d) + " gamma=" + fmt(g), cov_x_weighted(m, w), oracle::quad_cov_margin(m, w),
             1e-7);
    }
    for (auto [a, b] : {std::pair{0.5, 0.5}, {2.0, 3.0}, {1.0, 4.0}, {3.0, 1.5}}) {
      const auto w = WeightFunction::beta_cdf(a, b);
      t.near("cov beta delta=" + fmt(d) + " a=" + fmt(a) + " b=" + fmt(b), cov_x_weighted(m, w),
             oracle::quad_cov_margin(m, w), 1e-7);
    }
  }
}

}  // namespace

// Optional arguments restrict the run to the listed criterion numbers.
int main(int argc, char** argv) {
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  const std::vector<Criterion> criteria{
      {1, "elliptical families: C_w equals rho for every weight", elliptical_identity, 30.0},
      {2, "bvp1: C_w = 1/delta", bvp1_values},
      {3, "bvp2 Pearson closed form and Monte Carlo", bvp2_pearson},
      {4, "bvp2 extended Gini closed form and empirical", bvp2_gini},
      {5, "beta weight with b = 1 reduces to the power weight", beta_reduction},
      {6, "Gamma_1 decreasing, Pearson with interior maximum", figure_shape},
      {7, "bvp3 closed form vs double integral and limits", bvp3_formula},
      {8, "normalization, bounds and invariance properties", estimator_properties},
      {9, "Gini WIPM identity and allocation additivity", gini_wipm},
      {10, "special functions and covariance closed forms", special_functions},
  };
  int failed = 0, ran = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    ++ran;
    Tally t;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(t);
    } catch (const std::exception& e) {
      t.failures.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit > 0.0 && secs > c.time_limit) {
      t.failures.push_back("took " + fmt(secs) + " s, limit " + fmt(c.time_limit) + " s");
    }
    const bool ok = t.failures.empty();
    failed += ok ? 0 : 1;
    std::printf("%s criterion %2d: %s [%d checks, worst %.3g of tolerance, %.1f s]\n", ok ? "PASS" : "FAIL", c.id,
                c.title.c_str(), t.checks, t.worst, secs);
    for (std::size_t i = 0; i < t.failures.size() && i < 5; ++i) std::printf("    %s\n", t.failures[i].c_str());
    for (const auto& line : t.info) std::printf("    %s\n", line.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}
