#include "heavygini/verify.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "heavygini/distributions.hpp"
#include "heavygini/error.hpp"
#include "heavygini/gini.hpp"
#include "heavygini/io.hpp"
#include "heavygini/oracle.hpp"
#include "heavygini/rng.hpp"
#include "heavygini/specfun.hpp"
#include "heavygini/wipm.hpp"

namespace hg::verify {

Suite parse_suite(std::string_view name) {
  if (name == "specfun") return Suite::specfun;
  if (name == "distributions") return Suite::distributions;
  if (name == "gini") return Suite::gini;
  if (name == "wipm") return Suite::wipm;
  if (name == "all") return Suite::all;
  throw DomainError("unknown verify suite '" + std::string(name) +
                    "' (expected specfun, distributions, gini, wipm or all)");
}

std::string_view suite_name(Suite s) {
  switch (s) {
    case Suite::specfun: return "specfun";
    case Suite::distributions: return "distributions";
    case Suite::gini: return "gini";
    case Suite::wipm: return "wipm";
    case Suite::all: return "all";
  }
  return "unknown";
}

namespace {

// Outcome of one check: pass flag plus the worst deviation seen.
struct Outcome {
  bool passed = true;
  std::string detail;

  void close(std::string_view what, double got, double want, double tol) {
    const double gap = std::fabs(got - want);
    if (!(gap <= tol)) {
      passed = false;
      std::ostringstream os;
      os << what << ": got " << io::format_number(got) << ", want " << io::format_number(want) << " (tol "
         << tol << ")";
      detail = os.str();
    } else if (passed) {
      worst = std::max(worst, gap);
      detail = "max deviation " + io::format_number(worst);
    }
  }

  // |mc − target| <= k·SE
  void within_se(std::string_view what, const oracle::McEstimate& mc, double target, double k = 3.0) {
    const double z = std::fabs(mc.mean - target) / mc.std_error;
    if (!(z <= k)) {
      passed = false;
      std::ostringstream os;
      os << what << ": Monte Carlo " << io::format_number(mc.mean) << " ± " << io::format_number(mc.std_error)
         << " vs " << io::format_number(target) << " (" << io::format_number(z) << " SE)";
      detail = os.str();
    } else if (passed) {
      worst_z = std::max(worst_z, z);
      detail = "max " + io::format_number(worst_z) + " SE";
    }
  }

  void require(bool ok, std::string_view what) {
    if (!ok) {
      passed = false;
      detail = std::string(what);
    }
  }

  double worst = 0.0;
  double worst_z = 0.0;
};

struct Check {
  std::string name;
  std::function<Outcome(std::uint64_t)> body;
};

std::vector<Check> specfun_checks() {
  return {
      {"2F1(2,1;c;1) against (c-1)/(c-3)",
       [](std::uint64_t) {
         Outcome o;
         for (double c : {4.5, 6.0, 10.0}) {
           o.close("c=" + io::format_number(c), specfun::hyp_pfq({{2.0, 1.0}, {c}, 1.0}), (c - 1.0) / (c - 3.0), 1e-9);
         }
         return o;
       }},
      {"3F2(1.5,2,1;4,5;1) reference value",
       [](std::uint64_t) {
         Outcome o;
         o.close("3F2", specfun::hyp_pfq({{1.5, 2.0, 1.0}, {4.0, 5.0}, 1.0}), 1.21018932743350414324, 1e-12);
         return o;
       }},
      {"incomplete beta power reduction",
       [](std::uint64_t) {
         Outcome o;
         for (int i = 0; i < 20; ++i) {
           for (int j = 0; j < 20; ++j) {
             const double t = (i + 0.5) / 20.0;
             const double a = 0.1 + 0.5 * j;
             o.close("I_t(a,1)", specfun::reg_inc_beta(t, a, 1.0), std::pow(t, a), 1e-10);
           }
         }
         return o;
       }},
      {"incomplete beta reflection",
       [](std::uint64_t seed) {
         Outcome o;
         Rng rng(derive_seed(seed, 101));
         for (int i = 0; i < 400; ++i) {
           const double t = rng.uniform();
           const double a = 0.05 + 30.0 * rng.uniform();
           const double b = 0.05 + 30.0 * rng.uniform();
           o.close("I_t(a,b)+I_{1-t}(b,a)", specfun::reg_inc_beta(t, a, b) + specfun::reg_inc_beta(1.0 - t, b, a),
                   1.0, 1e-10);
         }
         return o;
       }},
      {"normal and t quantile round trip",
       [](std::uint64_t) {
         Outcome o;
         for (double p : {1e-10, 0.001, 0.3, 0.5, 0.9, 0.999999}) {
           o.close("normal", specfun::normal_cdf(specfun::normal_quantile(p)), p, 1e-13 + 1e-12 * p);
           for (double nu : {1.5, 3.0, 20.0}) {
             o.close("t", specfun::student_t_cdf(specfun::student_t_quantile(p, nu), nu), p, 1e-12);
           }
         }
         return o;
       }},
  };
}

std::vector<Check> distribution_checks() {
  return {
      {"joint d.d.f. reduces to the margins",
       [](std::uint64_t) {
         Outcome o;
         const std::vector<BivariateFamily> families{
             NormalFamily{0, 0, 1, 1, 0.4}, EllipticalTFamily{0, 0, 1, 1, 0.3, 4.0}, Bvp1Family{0, 0, 1, 1, 3.0},
             Bvp2Family{0, 0, 1, 1, 2.1, 0.5254}, Bvp3Family{0, 0, 1, 1, 1.5, 1.5, 1.0}};
         for (const auto& f : families) {
           for (double x : {0.1, 1.0, 3.0}) {
             o.close(family_name(f), joint_ddf(f, x, -1e9), margin_ddf(margin_x(f), x), 1e-10);
           }
         }
         return o;
       }},
      {"bvp3 density integrates to one",
       [](std::uint64_t) {
         Outcome o;
         for (const Bvp3Family& f : {Bvp3Family{0, 0, 1, 1, 1.2, 1.8, 1.3}, Bvp3Family{0, 0, 1, 1, 0.4, 0.6, 2.0}}) {
           o.close("mass", oracle::quad2_bvp3_mass(f, PdfNormalization::raw_mixed_partial), 1.0, 1e-6);
         }
         return o;
       }},
      {"bvp3 coefficient convention",
       [](std::uint64_t) {
         Outcome o;
         const auto res = oracle::resolve_bvp3_normalization();
         o.require(res.resolved && res.chosen == PdfNormalization::raw_mixed_partial,
                   "the raw mixed-partial coefficients no longer single out the oracle");
         if (o.passed) {
           o.detail = "raw gap " + io::format_number(res.max_gap_raw) + ", unit gap " +
                      io::format_number(res.max_gap_unit);
         }
         return o;
       }},
      {"sampler means",
       [](std::uint64_t seed) {
         Outcome o;
         const std::vector<BivariateFamily> families{EllipticalTFamily{1, -1, 2, 1, 0.3, 5.0}, Bvp1Family{1, 2, 1, 3, 4.0},
                                                     Bvp2Family{0, 0, 1, 1, 4.5, 1.0}, Bvp3Family{0, 0, 2, 1, 1.5, 3.0, 3.0}};
         for (std::size_t k = 0; k < families.size(); ++k) {
           const auto s = sample(families[k], 200000, derive_seed(seed, 200 + k));
           for (int axis = 0; axis < 2; ++axis) {
             const auto& v = axis == 0 ? s.xs : s.ys;
             const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
             double ss = 0.0;
             for (double x : v) ss += (x - m) * (x - m);
             const double se = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
             const double want = margin_mean(axis == 0 ? margin_x(families[k]) : margin_y(families[k]));
             o.within_se(family_name(families[k]), {m, se, {}}, want, 4.0);
           }
         }
         return o;
       }},
      {"pearson closed form vs Monte Carlo",
       [](std::uint64_t seed) {
         Outcome o;
         for (const BivariateFamily& f : {BivariateFamily{Bvp1Family{0, 0, 1, 1, 5.0}},
                                         BivariateFamily{Bvp2Family{0, 0, 1, 1, 5.0, 1.0}}}) {
           const auto mc = oracle::mc_reference(f, oracle::Statistic::pearson(), 100000, derive_seed(seed, 300), 10);
           o.within_se(family_name(f), mc, pearson_closed_form(f));
         }
         return o;
       }},
  };
}

std::vector<Check> gini_checks() {
  return {
      {"normalization C_w[X,X] = 1 and C_w[X,-X] = -lambda",
       [](std::uint64_t seed) {
         Outcome o;
         const auto s = sample(Bvp2Family{0, 0, 1, 1, 2.5, 0.5}, 20000, derive_seed(seed, 400));
         std::vector<double> neg(s.xs);
         for (auto& v : neg) v = -v;
         for (const auto& w : {WeightFunction::identity(), WeightFunction::power(2.0), WeightFunction::beta_cdf(2, 3)}) {
           o.require(empirical_cw_value(s.xs, s.xs, w) == 1.0, "C_w[X,X] != 1 for " + w.describe());
           o.require(empirical_cw_value(s.xs, neg, w) == -empirical_lambda_w(s.xs, w),
                     "C_w[X,-X] != -lambda for " + w.describe());
         }
         if (o.passed) o.detail = "exact";
         return o;
       }},
      {"pareto covariance closed form vs quadrature",
       [](std::uint64_t) {
         Outcome o;
         for (double delta : {1.5, 2.0, 3.0, 6.0}) {
           const ParetoIIMargin m{0.0, 1.0, delta};
           for (double g : {0.5, 1.0, 2.0, 4.0}) {
             const auto w = WeightFunction::power(g);
             o.close("power", cov_x_weighted(m, w), oracle::quad_cov_margin(m, w), 1e-7);
           }
           for (const auto& w : {WeightFunction::beta_cdf(2, 3), WeightFunction::beta_cdf(0.5, 0.5),
                                 WeightFunction::beta_cdf(3, 1.5).reflect()}) {
             o.close("beta", cov_x_weighted(m, w), oracle::quad_cov_margin(m, w), 1e-7);
           }
         }
         return o;
       }},
      {"beta weight with b = 1 equals the power weight",
       [](std::uint64_t) {
         Outcome o;
         for (double a : {0.5, 1.0, 2.0, 3.5, 6.0}) {
           for (double delta : {1.2, 2.1, 3.0, 5.0, 9.0}) {
             const Bvp2Family f{0, 0, 1, 1, delta, 0.5254};
             o.close("bvp2", closed_cw(f, WeightFunction::beta_cdf(a, 1.0)).value,
                     closed_cw(f, WeightFunction::power(a)).value, 1e-10);
           }
         }
         return o;
       }},
      {"bvp2 extended gini reference value",
       [](std::uint64_t) {
         Outcome o;
         o.close("Gamma_1", closed_cw(Bvp2Family{0, 0, 1, 1, 2.1, 0.5254}, WeightFunction::power(1.0)).value,
                 0.358475939543, 1e-9);
         return o;
       }},
      {"bvp3 closed form vs double integral",
       [](std::uint64_t) {
         Outcome o;
         for (double delta : {0.5, 1.2, 2.0}) {
           for (double g : {0.5, 1.0, 2.0}) {
             const Bvp3Family f{0, 0, 1, 1, delta, 3.0 - delta, 2.5 - delta};
             o.close("Gamma", closed_cw(f, WeightFunction::power(g)).value, oracle::quad2_bvp3_gamma(f, g), 1e-4);
           }
         }
         return o;
       }},
      {"closed form vs Monte Carlo",
       [](std::uint64_t seed) {
         Outcome o;
         struct Case {
           BivariateFamily f;
           WeightFunction w;
         };
         const std::vector<Case> cases{{NormalFamily{0, 0, 1, 1, 0.5}, WeightFunction::power(2.0)},
                                       {Bvp1Family{0, 0, 1, 1, 5.87}, WeightFunction::identity()},
                                       {Bvp2Family{0, 0, 1, 1, 2.1, 0.5254}, WeightFunction::power(1.0)},
                                       {Bvp3Family{0, 0, 1, 1, 1.5, 1.5, 1.0}, WeightFunction::power(1.0)}};
         for (std::size_t k = 0; k < cases.size(); ++k) {
           const auto mc = oracle::mc_reference(cases[k].f, oracle::Statistic::cw(cases[k].w), 100000,
                                                derive_seed(seed, 500 + k), 10);
           o.within_se(family_name(cases[k].f), mc, closed_cw(cases[k].f, cases[k].w).value);
         }
         return o;
       }},
      {"lambda_w closed form vs quadrature",
       [](std::uint64_t) {
         Outcome o;
         const ParetoIIMargin m{0, 1, 3};
         const auto w = WeightFunction::power(2.0);
         o.close("lambda", lambda_w(m, w), 1.4, 1e-12);
         o.close("ratio", oracle::quad_cov_margin(m, w.reflect()) / oracle::quad_cov_margin(m, w), 1.4, 1e-7);
         return o;
       }},
  };
}

std::vector<Check> wipm_checks() {
  return {
      {"gini wipm identity",
       [](std::uint64_t seed) {
         Outcome o;
         const std::vector<BivariateFamily> families{NormalFamily{0, 0, 1, 1, 0.5}, Bvp1Family{0, 0, 1, 1, 3.0},
                                                     Bvp2Family{0, 0, 1, 1, 2.1, 0.5254}};
         std::uint64_t stream = 600;
         for (const auto& f : families) {
           for (const auto& w : {WeightFunction::identity(), WeightFunction::power(2.0), WeightFunction::beta_cdf(2, 2)}) {
             const auto mc = oracle::mc_reference(f, oracle::Statistic::gini_premium(w), 100000,
                                                  derive_seed(seed, stream++), 10);
             o.within_se(family_name(f) + " " + w.describe(), mc, gini_wipm_rhs(f, w).premium);
           }
         }
         return o;
       }},
      {"gini self premium closed form",
       [](std::uint64_t) {
         Outcome o;
         for (double g : {0.5, 1.0, 3.0}) {
           o.close("pareto", gini_self_premium(ParetoIIMargin{0, 1, 2}, WeightFunction::power(g)).premium,
                   1.0 / (2.0 * (g + 1.0) - 1.0), 1e-12);
         }
         return o;
       }},
      {"allocation additivity",
       [](std::uint64_t seed) {
         Outcome o;
         const auto s = sample(Bvp1Family{0, 0, 1, 1, 3.0}, 100000, derive_seed(seed, 700));
         for (const auto& w : {WeightFunction::power(1.0), WeightFunction::beta_cdf(2, 2)}) {
           const auto rep = allocate(Portfolio{{"x", "y"}, {s.xs, s.ys}}, w);
           o.close("sum of parts", rep.additivity_gap, 0.0, 1e-10);
         }
         return o;
       }},
  };
}

void run_suite(std::string_view suite, const std::vector<Check>& checks, std::uint64_t seed,
               std::vector<CheckResult>& out) {
  for (const auto& check : checks) {
    CheckResult r;
    r.suite = std::string(suite);
    r.name = check.name;
    const auto start = std::chrono::steady_clock::now();
    try {
      const Outcome o = check.body(seed);
      r.passed = o.passed;
      r.detail = o.detail;
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.push_back(std::move(r));
  }
}

}  // namespace

std::vector<CheckResult> run(Suite s, std::uint64_t seed) {
  std::vector<CheckResult> out;
  if (s == Suite::specfun || s == Suite::all) run_suite("specfun", specfun_checks(), seed, out);
  if (s == Suite::distributions || s == Suite::all) run_suite("distributions", distribution_checks(), seed, out);
  if (s == Suite::gini || s == Suite::all) run_suite("gini", gini_checks(), seed, out);
  if (s == Suite::wipm || s == Suite::all) run_suite("wipm", wipm_checks(), seed, out);
  return out;
}

}  // namespace hg::verify
