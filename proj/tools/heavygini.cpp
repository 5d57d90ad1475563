// heavygini: weighted Gini correlations, heavy-tailed bivariate samplers and
// Gini-type premium principles from the command line.
//
// Exit status: 0 success, 1 numerical failure, 2 usage or validation error.

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "heavygini/distributions.hpp"
#include "heavygini/error.hpp"
#include "heavygini/gini.hpp"
#include "heavygini/io.hpp"
#include "heavygini/oracle.hpp"
#include "heavygini/verify.hpp"
#include "heavygini/wipm.hpp"
#include "output.hpp"

namespace {

using namespace hg;
using cli::Cell;
using cli::Document;

constexpr int kOk = 0;
constexpr int kNumerical = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Global {
  std::uint64_t seed = 42;
  std::string out;
  std::string format = "csv";
  std::string config;
};

// Family parameters gathered from --config and flags (flags win).
struct FamilyFlags {
  std::map<std::string, std::string> values;

  void bind(CLI::App& app) {
    static const std::vector<std::pair<const char*, const char*>> keys{
        {"family", "normal, t, bvp1, bvp2 or bvp3"},
        {"mu_x", "location of X"},
        {"mu_y", "location of Y"},
        {"sigma_x", "scale of X"},
        {"sigma_y", "scale of Y"},
        {"rho", "normal: correlation"},
        {"sigma_xy", "t: off-diagonal dispersion"},
        {"nu", "t: degrees of freedom"},
        {"delta", "bvp: common tail index"},
        {"delta_x", "bvp3: extra tail index of X"},
        {"delta_y", "bvp2/bvp3: extra tail index of Y"}};
    for (const auto& [key, help] : keys) {
      std::string flag = std::string("--") + key;
      std::replace(flag.begin(), flag.end(), '_', '-');
      const std::string k = key;
      app.add_option_function<std::string>(flag, [this, k](const std::string& v) { values[k] = v; }, help);
    }
  }

  bool given() const { return !values.empty(); }

  BivariateFamily resolve(const Global& g) const {
    std::map<std::string, std::string> kv;
    if (!g.config.empty()) kv = io::parse_key_values(std::filesystem::path(g.config));
    for (const auto& [k, v] : values) kv[k] = v;
    const auto fam = kv.find("family");
    if (fam == kv.end()) throw UsageError("no family given (--family or a 'family' key in --config)");
    static const std::map<std::string, std::set<std::string>> allowed{
        {"normal", {"rho"}},
        {"t", {"sigma_xy", "nu"}},
        {"elliptical_t", {"sigma_xy", "nu"}},
        {"bvp1", {"delta"}},
        {"bvp2", {"delta", "delta_y"}},
        {"bvp3", {"delta", "delta_x", "delta_y"}}};
    const auto ok = allowed.find(fam->second);
    if (ok != allowed.end()) {
      for (const auto& [k, v] : kv) {
        if (k == "family" || k == "mu_x" || k == "mu_y" || k == "sigma_x" || k == "sigma_y") continue;
        if (!ok->second.count(k)) {
          throw UsageError("parameter '" + k + "' does not apply to family " + fam->second);
        }
      }
    }
    return family_from_config(kv);
  }
};

cli::Format parse_format(const std::string& f) { return f == "json" ? cli::Format::json : cli::Format::csv; }

void emit(const Global& g, const Document& doc) {
  std::ostringstream buf;
  cli::write(buf, doc, parse_format(g.format));
  if (g.out.empty()) {
    std::cout << buf.str();
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw UsageError("cannot open output file '" + g.out + "'");
  f << buf.str();
}

Document make_doc(const std::string& command, const Global& g) {
  Document doc;
  doc.command = command;
  doc.param("seed", std::to_string(g.seed));
  return doc;
}

// describe() yields "family=bvp1 mu_x=0 ..."; one parameter line per pair.
void family_params(Document& doc, const BivariateFamily& f) {
  std::istringstream in(describe(f));
  for (std::string kv; in >> kv;) {
    const auto eq = kv.find('=');
    doc.param(kv.substr(0, eq), eq == std::string::npos ? std::string() : kv.substr(eq + 1));
  }
}

Cell num(double v) { return std::optional<double>(v); }
Cell num(std::optional<double> v) { return v; }
Cell none() { return std::optional<double>(); }

PairedSample read_pairs(const std::string& path) {
  const auto table = io::read_csv(std::filesystem::path(path));
  PairedSample s;
  const bool named = std::find(table.names.begin(), table.names.end(), "x") != table.names.end() &&
                     std::find(table.names.begin(), table.names.end(), "y") != table.names.end();
  if (named) {
    s.xs = table.column("x");
    s.ys = table.column("y");
  } else if (table.columns.size() >= 2) {
    s.xs = table.columns[0];
    s.ys = table.columns[1];
  } else {
    throw UsageError("'" + path + "' needs columns x,y (or at least two columns)");
  }
  s.meta.source = path;
  s.validate();
  return s;
}

// ------------------------------------------------------------------ corr

struct CorrFlags {
  FamilyFlags family;
  std::string data;
  std::string weight = "identity";
  std::string method;
  std::size_t n = 100000;
  std::size_t resamples = 200;
  std::size_t replications = 20;
  std::string normalization = "raw";
};

struct CorrRow {
  std::string method;
  std::optional<double> value;
  std::optional<double> std_error;
  std::string note;
};

CorrRow corr_one(const std::string& method, const BivariateFamily* f, const PairedSample* data, bool pearson,
                 const WeightFunction& w, const CorrFlags& c, const Global& g) {
  CorrRow row{method, {}, {}, {}};
  const BootstrapOptions boot{c.resamples, g.seed};
  const PdfNormalization norm =
      c.normalization == "unit" ? PdfNormalization::unit_leading : PdfNormalization::raw_mixed_partial;
  if (method == "empirical") {
    PairedSample s = data ? *data : sample(*f, c.n, g.seed);
    const auto rep = pearson ? empirical_pearson(s, boot) : empirical_cw(s, w, boot);
    row.value = rep.value;
    row.std_error = rep.std_error;
    row.note = "n=" + std::to_string(s.size());
    return row;
  }
  if (!f) throw UsageError("method '" + method + "' needs a family (--family or --config); with --data only 'empirical' applies");
  if (method == "closed") {
    if (pearson) {
      row.value = pearson_closed_form(*f);
    } else {
      const auto rep = closed_cw(*f, w, norm);
      row.value = rep.value;
      if (rep.metadata.count("bvp3_normalization")) row.note = "normalization=" + rep.metadata.at("bvp3_normalization");
    }
  } else if (method == "regression") {
    if (pearson) throw UnsupportedError("the regression route gives C_w, not Pearson; use closed, empirical or oracle");
    const auto rep = cw_via_regression(*f, w);
    row.value = rep.value;
    row.note = "beta=" + rep.metadata.at("beta");
  } else if (method == "oracle") {
    double g_exp = 0.0;
    if (!pearson && std::holds_alternative<Bvp3Family>(*f) && w.is_power(&g_exp)) {
      row.value = oracle::quad2_bvp3_gamma(std::get<Bvp3Family>(*f), g_exp);
      row.note = "double integral";
    } else {
      const auto stat = pearson ? oracle::Statistic::pearson() : oracle::Statistic::cw(w);
      const auto mc = oracle::mc_reference(*f, stat, c.n, g.seed, c.replications);
      row.value = mc.mean;
      row.std_error = mc.std_error;
      row.note = "monte carlo " + std::to_string(c.replications) + "x" + std::to_string(c.n);
    }
  } else {
    throw UsageError("unknown method '" + method + "' (empirical, closed, regression, oracle, all)");
  }
  return row;
}

int cmd_corr(const CorrFlags& c, const Global& g) {
  std::optional<BivariateFamily> family;
  std::optional<PairedSample> data;
  if (!c.data.empty()) {
    if (c.family.given()) throw UsageError("give either --data or family parameters, not both");
    data = read_pairs(c.data);
  } else {
    family = c.family.resolve(g);
  }
  const bool pearson = c.weight == "pearson";
  const WeightFunction w = pearson ? WeightFunction::identity() : WeightFunction::parse(c.weight);
  const std::string method = c.method.empty() ? (data ? "empirical" : "closed") : c.method;
  if (c.normalization != "raw" && c.normalization != "unit") throw UsageError("--normalization must be raw or unit");

  Document doc = make_doc("corr", g);
  if (family) family_params(doc, *family);
  if (data) doc.param("data", c.data);
  doc.param("weight", pearson ? "pearson" : w.describe());
  doc.param("method", method);
  if (method == "empirical" || method == "all") doc.param("bootstrap_resamples", std::to_string(c.resamples));
  doc.columns = {"method", "value", "std_error", "note"};

  const std::vector<std::string> methods =
      method == "all" ? std::vector<std::string>{"closed", "regression", "empirical", "oracle"}
                      : std::vector<std::string>{method};
  const BivariateFamily* fp = family ? &*family : nullptr;
  const PairedSample* dp = data ? &*data : nullptr;
  for (const auto& m : methods) {
    if (method != "all") {
      try {
        const auto row = corr_one(m, fp, dp, pearson, w, c, g);
        doc.rows.push_back({row.method, num(row.value), num(row.std_error), row.note});
      } catch (const Error& e) {
        if (is_numerical_failure(e)) throw;
        throw UsageError(std::string(e.what()) + "; other routes: --method closed, empirical, oracle or all");
      }
      continue;
    }
    try {
      const auto row = corr_one(m, fp, dp, pearson, w, c, g);
      doc.rows.push_back({row.method, num(row.value), num(row.std_error), row.note});
    } catch (const UsageError& e) {
      doc.rows.push_back({m, none(), none(), std::string("n/a: ") + e.what()});
    } catch (const Error& e) {
      if (is_numerical_failure(e)) throw;
      doc.rows.push_back({m, none(), none(), std::string("n/a: ") + e.what()});
    }
  }
  emit(g, doc);
  return kOk;
}

// ---------------------------------------------------------------- sample

int cmd_sample(const FamilyFlags& ff, std::size_t n, const Global& g) {
  const BivariateFamily f = ff.resolve(g);
  if (n == 0) throw UsageError("--n must be positive");
  const PairedSample s = sample(f, n, g.seed);
  Document doc = make_doc("sample", g);
  family_params(doc, f);
  doc.param("n", std::to_string(n));
  doc.columns = {"x", "y"};
  doc.rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) doc.rows.push_back({num(s.xs[i]), num(s.ys[i])});
  emit(g, doc);
  return kOk;
}

// ---------------------------------------------------------------- curves

struct CurveFlags {
  double delta_y = 0.5254;
  double delta_min = 2.05;
  double delta_max = 10.0;
  std::size_t steps = 160;
  double gamma = 1.0;
};

int cmd_curves(const CurveFlags& c, const Global& g) {
  if (!(c.delta_min > 1.0)) throw UsageError("--delta-min must exceed 1 (Gamma needs a finite mean)");
  if (!(c.delta_max > c.delta_min) || c.steps < 2) throw UsageError("empty delta range");
  if (!(c.delta_y > 0.0) || !(c.gamma > 0.0)) throw UsageError("--delta-y and --gamma must be positive");
  Document doc = make_doc("curves", g);
  doc.param("family", "bvp2");
  doc.param("delta_y", io::format_number(c.delta_y));
  doc.param("gamma", io::format_number(c.gamma));
  doc.param("delta_min", io::format_number(c.delta_min));
  doc.param("delta_max", io::format_number(c.delta_max));
  doc.param("steps", std::to_string(c.steps));
  doc.columns = {"delta", "gamma_gini", "pearson"};

  const WeightFunction w = WeightFunction::power(c.gamma);
  std::vector<double> gam, rho_delta, rho;
  for (std::size_t i = 0; i < c.steps; ++i) {
    const double d = c.delta_min + (c.delta_max - c.delta_min) * static_cast<double>(i) / static_cast<double>(c.steps - 1);
    const Bvp2Family f{0.0, 0.0, 1.0, 1.0, d, c.delta_y};
    const double gv = closed_cw(f, w).value;
    std::optional<double> r;
    try {
      r = pearson_closed_form(f);
      rho_delta.push_back(d);
      rho.push_back(*r);
    } catch (const MomentError&) {
    }
    gam.push_back(gv);
    doc.rows.push_back({num(d), num(gv), num(r)});
  }
  const bool decreasing = std::adjacent_find(gam.begin(), gam.end(), std::less_equal<>()) == gam.end();
  doc.note("gamma_gini_strictly_decreasing", decreasing ? "true" : "false");
  if (rho.size() >= 3) {
    const auto top = std::max_element(rho.begin(), rho.end()) - rho.begin();
    const bool interior = top > 0 && top + 1 < static_cast<std::ptrdiff_t>(rho.size()) &&
                          rho[top] > rho.front() && rho[top] > rho.back();
    doc.note("pearson_interior_maximum", interior ? "true" : "false");
    doc.note("pearson_argmax_delta", io::format_number(rho_delta[top]));
  } else {
    doc.note("pearson_interior_maximum", "false");
  }
  emit(g, doc);
  return kOk;
}

// --------------------------------------------------------------- surface

struct SurfaceFlags {
  FamilyFlags family;
  std::optional<double> x_min, x_max, y_min, y_max;
  std::size_t steps = 21;
};

int cmd_surface(const SurfaceFlags& c, const Global& g) {
  const BivariateFamily f = c.family.resolve(g);
  const auto [mx, my, sx, sy] = std::visit(
      [](const auto& p) { return std::array<double, 4>{p.mu_x, p.mu_y, p.sigma_x, p.sigma_y}; }, f);
  const double x0 = c.x_min.value_or(mx), y0 = c.y_min.value_or(my);
  const double x1 = c.x_max.value_or(mx + 10.0 * sx), y1 = c.y_max.value_or(my + 10.0 * sy);
  if (x0 < mx || y0 < my) throw UsageError("grid starts below (mu_x, mu_y)");
  if (!(x1 > x0) || !(y1 > y0) || c.steps < 2) throw UsageError("empty grid");
  Document doc = make_doc("surface", g);
  family_params(doc, f);
  doc.param("x_range", io::format_number(x0) + ":" + io::format_number(x1));
  doc.param("y_range", io::format_number(y0) + ":" + io::format_number(y1));
  doc.param("steps", std::to_string(c.steps));
  doc.columns = {"x", "y", "ddf"};
  const double den = static_cast<double>(c.steps - 1);
  for (std::size_t i = 0; i < c.steps; ++i) {
    const double x = x0 + (x1 - x0) * static_cast<double>(i) / den;
    for (std::size_t j = 0; j < c.steps; ++j) {
      const double y = y0 + (y1 - y0) * static_cast<double>(j) / den;
      doc.rows.push_back({num(x), num(y), num(joint_ddf(f, x, y))});
    }
  }
  emit(g, doc);
  return kOk;
}

// ----------------------------------------------------------------- price

struct PriceFlags {
  std::string data;
  std::string weight = "identity";
  std::string orientation = "survival";
  bool allocate = false;
};

int cmd_price(const PriceFlags& c, const Global& g) {
  if (c.orientation != "survival" && c.orientation != "distribution") {
    throw UsageError("--orientation must be survival or distribution");
  }
  const Orientation o = c.orientation == "survival" ? Orientation::survival : Orientation::distribution;
  const WeightFunction w = WeightFunction::parse(c.weight);
  const Portfolio p = Portfolio::from_csv(io::read_csv(std::filesystem::path(c.data)));

  Document doc = make_doc("price", g);
  doc.param("data", c.data);
  doc.param("weight", w.describe());
  doc.param("orientation", c.orientation);
  doc.param("mode", c.allocate ? "allocate" : "stand_alone");
  doc.param("rows", std::to_string(p.rows()));
  doc.columns = {"column", "premium", "base", "loading"};
  auto add = [&doc](const std::string& name, const PremiumResult& r) {
    doc.rows.push_back({name, num(r.premium), num(r.base), num(r.loading)});
  };
  const std::vector<double> total = p.aggregate();
  if (c.allocate) {
    const auto rep = allocate(p, w, o);
    for (const auto& part : rep.parts) add(part.name, part.result);
    add("total", rep.aggregate);
    doc.note("additivity_gap", io::format_number(rep.additivity_gap));
  } else {
    auto stand_alone = [&](const std::string& name, const std::vector<double>& v) {
      if (std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) == v.end()) {
        doc.rows.push_back({name, num(v.front()), num(v.front()), num(0.0)});
        return;
      }
      add(name, gini_premium(v, v, w, {o, {0, g.seed}}));
    };
    for (std::size_t j = 0; j < p.columns.size(); ++j) stand_alone(p.names[j], p.columns[j]);
    stand_alone("total", total);
  }
  emit(g, doc);
  return kOk;
}

// ---------------------------------------------------------------- verify

int cmd_verify(const std::string& suite, const Global& g) {
  const auto results = verify::run(verify::parse_suite(suite), g.seed);
  Document doc = make_doc("verify", g);
  doc.param("suite", suite);
  doc.columns = {"suite", "check", "result", "detail"};
  std::size_t passed = 0;
  for (const auto& r : results) {
    passed += r.passed ? 1 : 0;
    doc.rows.push_back({r.suite, r.name, std::string(r.passed ? "pass" : "FAIL"), r.detail});
  }
  doc.note("passed", std::to_string(passed) + "/" + std::to_string(results.size()));
  emit(g, doc);
  return passed == results.size() ? kOk : kNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted Gini correlations, heavy-tailed bivariate Pareto laws and Gini-type premiums", "heavygini"};
  app.set_version_flag("--version", HEAVYGINI_VERSION);
  app.require_subcommand(1);
  app.fallthrough();

  Global g;
  app.add_option("--seed", g.seed, "seed for sampling and bootstrap streams")->capture_default_str();
  app.add_option("--out", g.out, "write output to this file instead of stdout");
  app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("--config", g.config, "key=value file with family parameters")->check(CLI::ExistingFile);

  CorrFlags corr;
  auto* corr_cmd = app.add_subcommand("corr", "C_w by one route or all of them side by side");
  corr.family.bind(*corr_cmd);
  corr_cmd->add_option("--data", corr.data, "CSV with columns x,y")->check(CLI::ExistingFile);
  corr_cmd->add_option("--weight", corr.weight, "identity, power:g, beta:a,b, table:<csv> or pearson")->capture_default_str();
  corr_cmd->add_option("--method", corr.method, "empirical, closed, regression, oracle or all");
  corr_cmd->add_option("--n", corr.n, "sample size for sampled routes")->capture_default_str();
  corr_cmd->add_option("--resamples", corr.resamples, "bootstrap resamples")->capture_default_str();
  corr_cmd->add_option("--replications", corr.replications, "Monte-Carlo replications (oracle)")->capture_default_str();
  corr_cmd->add_option("--normalization", corr.normalization, "bvp3 density coefficients: raw or unit")->capture_default_str();

  FamilyFlags sample_family;
  std::size_t sample_n = 0;
  auto* sample_cmd = app.add_subcommand("sample", "draw pairs from a family");
  sample_family.bind(*sample_cmd);
  sample_cmd->add_option("--n", sample_n, "number of pairs")->required();

  CurveFlags curves;
  auto* curves_cmd = app.add_subcommand("curves", "bvp2 extended Gini and Pearson against delta");
  curves_cmd->add_option("--delta-y", curves.delta_y)->capture_default_str();
  curves_cmd->add_option("--delta-min", curves.delta_min)->capture_default_str();
  curves_cmd->add_option("--delta-max", curves.delta_max)->capture_default_str();
  curves_cmd->add_option("--steps", curves.steps)->capture_default_str();
  curves_cmd->add_option("--gamma", curves.gamma)->capture_default_str();

  SurfaceFlags surface;
  auto* surface_cmd = app.add_subcommand("surface", "joint d.d.f. on a rectangular grid");
  surface.family.bind(*surface_cmd);
  surface_cmd->add_option("--x-min", surface.x_min);
  surface_cmd->add_option("--x-max", surface.x_max);
  surface_cmd->add_option("--y-min", surface.y_min);
  surface_cmd->add_option("--y-max", surface.y_max);
  surface_cmd->add_option("--steps", surface.steps, "grid points per axis")->capture_default_str();

  PriceFlags price;
  auto* price_cmd = app.add_subcommand("price", "Gini premiums or capital allocation for a portfolio CSV");
  price_cmd->add_option("--data", price.data, "CSV, one loss column per risk")->required()->check(CLI::ExistingFile);
  price_cmd->add_option("--weight", price.weight)->capture_default_str();
  price_cmd->add_option("--orientation", price.orientation, "survival or distribution")->capture_default_str();
  price_cmd->add_flag("--allocate", price.allocate, "allocate the aggregate premium to the columns");

  std::string suite = "all";
  auto* verify_cmd = app.add_subcommand("verify", "self-checks against independent oracles");
  verify_cmd->add_option("suite", suite, "specfun, distributions, gini, wipm or all")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*corr_cmd) return cmd_corr(corr, g);
    if (*sample_cmd) return cmd_sample(sample_family, sample_n, g);
    if (*curves_cmd) return cmd_curves(curves, g);
    if (*surface_cmd) return cmd_surface(surface, g);
    if (*price_cmd) return cmd_price(price, g);
    if (*verify_cmd) return cmd_verify(suite, g);
  } catch (const UsageError& e) {
    std::cerr << "heavygini: " << e.what() << "\n";
    return kUsage;
  } catch (const hg::Error& e) {
    std::cerr << "heavygini: " << e.what() << "\n";
    return hg::is_numerical_failure(e) ? kNumerical : kUsage;
  } catch (const std::exception& e) {
    std::cerr << "heavygini: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
