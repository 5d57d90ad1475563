#include "heavygini/weights.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "heavygini/error.hpp"
#include "heavygini/io.hpp"
#include "heavygini/specfun.hpp"

namespace hg {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_shape_param(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << what << " must be a positive finite real, got " << v;
    throw DomainError(os.str());
  }
}

double parse_number(std::string_view s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw DomainError("cannot parse number '" + std::string(s) + "' in weight spec");
  }
  return v;
}

}  // namespace

WeightFunction WeightFunction::identity() { return WeightFunction(IdentityWeight{}, false); }

WeightFunction WeightFunction::power(double gamma) {
  require_shape_param(gamma, "power weight exponent");
  return WeightFunction(PowerWeight{gamma}, false);
}

WeightFunction WeightFunction::beta_cdf(double a, double b) {
  require_shape_param(a, "beta weight a");
  require_shape_param(b, "beta weight b");
  return WeightFunction(BetaCdfWeight{a, b}, false);
}

WeightFunction WeightFunction::table(std::vector<double> t, std::vector<double> w) {
  if (t.size() != w.size() || t.size() < 2) {
    throw DomainError("table weight needs at least two (t, w) knots of equal count");
  }
  if (t.front() != 0.0 || t.back() != 1.0) {
    throw DomainError("table weight knots must start at t=0 and end at t=1");
  }
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(w[i] >= 0.0 && w[i] <= 1.0)) throw DomainError("table weight values must lie in [0,1]");
    if (i > 0 && !(t[i] > t[i - 1])) throw DomainError("table weight t must be strictly increasing");
    if (i > 0 && w[i] < w[i - 1]) throw DomainError("table weight must be non-decreasing");
  }
  WeightFunction out(TableWeight{std::move(t), std::move(w)}, false);
  double prev = out.eval(0.0);
  for (int i = 1; i <= 1000; ++i) {
    const double cur = out.eval(i / 1000.0);
    if (cur < prev) throw DomainError("table weight is not monotone on the check grid");
    prev = cur;
  }
  return out;
}

WeightFunction WeightFunction::load_table_csv(const std::filesystem::path& path) {
  const auto csv = io::read_csv(path);
  if (csv.columns.size() != 2) throw DomainError("table weight CSV must have exactly two columns");
  return table(csv.columns[0], csv.columns[1]);
}

WeightFunction WeightFunction::parse(std::string_view text) {
  const auto colon = text.find(':');
  const auto kind = text.substr(0, colon);
  const auto arg = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  if (kind == "identity") return identity();
  if (kind == "power") return power(parse_number(arg));
  if (kind == "beta") {
    const auto comma = arg.find(',');
    if (comma == std::string_view::npos) throw DomainError("beta weight expects 'beta:a,b'");
    return beta_cdf(parse_number(arg.substr(0, comma)), parse_number(arg.substr(comma + 1)));
  }
  if (kind == "table") return load_table_csv(std::filesystem::path(std::string(arg)));
  throw DomainError("unknown weight '" + std::string(text) +
                    "' (expected identity, power:g, beta:a,b or table:file.csv)");
}

double WeightFunction::eval_base(double t) const {
  return std::visit(
      overloaded{
          [t](const IdentityWeight&) { return t; },
          [t](const PowerWeight& p) { return t == 0.0 ? 0.0 : std::pow(t, p.gamma); },
          [t](const BetaCdfWeight& b) { return specfun::reg_inc_beta(t, b.a, b.b); },
          [t](const TableWeight& tab) {
            const auto it = std::upper_bound(tab.t.begin(), tab.t.end(), t);
            if (it == tab.t.end()) return tab.w.back();
            const auto hi = static_cast<std::size_t>(it - tab.t.begin());
            const auto lo = hi - 1;
            const double f = (t - tab.t[lo]) / (tab.t[hi] - tab.t[lo]);
            return tab.w[lo] + f * (tab.w[hi] - tab.w[lo]);
          },
      },
      shape_);
}

double WeightFunction::eval(double t) const {
  if (!(t >= 0.0 && t <= 1.0)) {
    std::ostringstream os;
    os << "weight argument must lie in [0,1], got " << t;
    throw DomainError(os.str());
  }
  return reflected_ ? 1.0 - eval_base(1.0 - t) : eval_base(t);
}

WeightFunction WeightFunction::reflect() const {
  if (std::holds_alternative<IdentityWeight>(shape_)) return *this;
  return WeightFunction(shape_, !reflected_);
}

double WeightFunction::integral() const {
  const double base = std::visit(
      overloaded{
          [](const IdentityWeight&) { return 0.5; },
          [](const PowerWeight& p) { return 1.0 / (p.gamma + 1.0); },
          [](const BetaCdfWeight& b) { return b.b / (b.a + b.b); },
          [](const TableWeight& tab) {
            double s = 0.0;
            for (std::size_t i = 1; i < tab.t.size(); ++i) {
              s += 0.5 * (tab.w[i] + tab.w[i - 1]) * (tab.t[i] - tab.t[i - 1]);
            }
            return s;
          },
      },
      shape_);
  return reflected_ ? 1.0 - base : base;
}

bool WeightFunction::is_power(double* gamma) const {
  if (reflected_) return false;
  if (std::holds_alternative<IdentityWeight>(shape_)) {
    if (gamma) *gamma = 1.0;
    return true;
  }
  if (const auto* p = std::get_if<PowerWeight>(&shape_)) {
    if (gamma) *gamma = p->gamma;
    return true;
  }
  return false;
}

bool WeightFunction::is_beta_cdf(double* a, double* b) const {
  if (reflected_) return false;
  if (const auto* p = std::get_if<BetaCdfWeight>(&shape_)) {
    if (a) *a = p->a;
    if (b) *b = p->b;
    return true;
  }
  return false;
}

std::string WeightFunction::describe() const {
  const std::string base = std::visit(
      overloaded{
          [](const IdentityWeight&) { return std::string("identity"); },
          [](const PowerWeight& p) { return "power:" + io::format_number(p.gamma); },
          [](const BetaCdfWeight& b) {
            return "beta:" + io::format_number(b.a) + "," + io::format_number(b.b);
          },
          [](const TableWeight& tab) { return "table:" + std::to_string(tab.t.size()) + "-knots"; },
      },
      shape_);
  return reflected_ ? "reflect(" + base + ")" : base;
}

}  // namespace hg
