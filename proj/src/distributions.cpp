#include "heavygini/distributions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "heavygini/error.hpp"
#include "heavygini/io.hpp"
#include "heavygini/numerics.hpp"
#include "heavygini/rng.hpp"
#include "heavygini/specfun.hpp"
#include "parallel.hpp"

namespace hg {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

void require_location(double mu_x, double mu_y, double sigma_x, double sigma_y) {
  require(std::isfinite(mu_x) && std::isfinite(mu_y), "locations must be finite");
  require(positive(sigma_x) && positive(sigma_y), "scales must be positive");
}

double standardize_clamped(double v, double mu, double sigma) {
  return std::max(0.0, (v - mu) / sigma);
}

}  // namespace

void PairedSample::validate() const {
  if (xs.size() != ys.size()) throw DomainError("paired sample columns differ in length");
  if (xs.size() < 3) throw DomainError("paired sample needs at least 3 observations");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) {
      throw DomainError("paired sample contains a non-finite value at row " + std::to_string(i));
    }
  }
}

// ----------------------------------------------------------------- margins

void validate(const ParetoIIMargin& m) {
  require(std::isfinite(m.mu), "Pareto location must be finite");
  require(positive(m.sigma), "Pareto scale must be positive");
  require(positive(m.delta), "Pareto tail index must be positive");
}

void validate(const Margin& m) {
  std::visit(overloaded{
                 [](const ParetoIIMargin& p) { validate(p); },
                 [](const NormalMargin& p) {
                   require(std::isfinite(p.mu) && positive(p.sigma), "invalid normal margin");
                 },
                 [](const StudentTMargin& p) {
                   require(std::isfinite(p.mu) && positive(p.sigma) && positive(p.nu),
                           "invalid t margin");
                 },
                 [](const UniformMargin& p) {
                   require(std::isfinite(p.lo) && std::isfinite(p.hi) && p.lo < p.hi,
                           "invalid uniform margin");
                 },
             },
             m);
}

double margin_ddf(const ParetoIIMargin& m, double x) {
  if (x <= m.mu) return 1.0;
  return std::exp(-m.delta * std::log1p((x - m.mu) / m.sigma));
}

double margin_quantile(const ParetoIIMargin& m, double u) {
  if (!(u >= 0.0 && u < 1.0)) throw DomainError("Pareto quantile needs 0 <= u < 1");
  return m.mu + m.sigma * std::expm1(-std::log1p(-u) / m.delta);
}

double margin_mean(const ParetoIIMargin& m) {
  if (!(m.delta > 1.0)) throw MomentError("Pareto mean is infinite for delta <= 1");
  return m.mu + m.sigma / (m.delta - 1.0);
}

double margin_ddf(const Margin& m, double x) {
  return std::visit(overloaded{
                        [x](const ParetoIIMargin& p) { return margin_ddf(p, x); },
                        [x](const NormalMargin& p) {
                          return specfun::normal_cdf(-(x - p.mu) / p.sigma);
                        },
                        [x](const StudentTMargin& p) {
                          return specfun::student_t_cdf(-(x - p.mu) / p.sigma, p.nu);
                        },
                        [x](const UniformMargin& p) {
                          return std::clamp((p.hi - x) / (p.hi - p.lo), 0.0, 1.0);
                        },
                    },
                    m);
}

double margin_quantile(const Margin& m, double u) {
  return std::visit(
      overloaded{
          [u](const ParetoIIMargin& p) { return margin_quantile(p, u); },
          [u](const NormalMargin& p) {
            if (!(u > 0.0 && u < 1.0)) throw DomainError("normal quantile needs 0 < u < 1");
            return p.mu + p.sigma * specfun::normal_quantile(u);
          },
          [u](const StudentTMargin& p) {
            if (!(u > 0.0 && u < 1.0)) throw DomainError("t quantile needs 0 < u < 1");
            return p.mu + p.sigma * specfun::student_t_quantile(u, p.nu);
          },
          [u](const UniformMargin& p) {
            if (!(u >= 0.0 && u <= 1.0)) throw DomainError("uniform quantile needs 0 <= u <= 1");
            return p.lo + (p.hi - p.lo) * u;
          },
      },
      m);
}

double margin_survival_quantile(const Margin& m, double s) {
  return std::visit(
      overloaded{
          [s](const ParetoIIMargin& p) {
            if (!(s > 0.0 && s <= 1.0)) throw DomainError("Pareto survival quantile needs 0 < s <= 1");
            return p.mu + p.sigma * std::expm1(-std::log(s) / p.delta);
          },
          [s](const NormalMargin& p) {
            if (!(s > 0.0 && s < 1.0)) throw DomainError("normal quantile needs 0 < s < 1");
            return p.mu - p.sigma * specfun::normal_quantile(s);
          },
          [s](const StudentTMargin& p) {
            if (!(s > 0.0 && s < 1.0)) throw DomainError("t quantile needs 0 < s < 1");
            return p.mu - p.sigma * specfun::student_t_quantile(s, p.nu);
          },
          [s](const UniformMargin& p) {
            if (!(s >= 0.0 && s <= 1.0)) throw DomainError("uniform quantile needs 0 <= s <= 1");
            return p.hi - (p.hi - p.lo) * s;
          },
      },
      m);
}

double margin_mean(const Margin& m) {
  return std::visit(overloaded{
                        [](const ParetoIIMargin& p) { return margin_mean(p); },
                        [](const NormalMargin& p) { return p.mu; },
                        [](const StudentTMargin& p) {
                          if (!(p.nu > 1.0)) throw MomentError("t mean is undefined for nu <= 1");
                          return p.mu;
                        },
                        [](const UniformMargin& p) { return 0.5 * (p.lo + p.hi); },
                    },
                    m);
}

// ---------------------------------------------------------------- families

void validate(const BivariateFamily& f) {
  std::visit(overloaded{
                 [](const NormalFamily& p) {
                   require_location(p.mu_x, p.mu_y, p.sigma_x, p.sigma_y);
                   require(std::isfinite(p.rho) && std::fabs(p.rho) < 1.0, "need |rho| < 1");
                 },
                 [](const EllipticalTFamily& p) {
                   require_location(p.mu_x, p.mu_y, p.sigma_x, p.sigma_y);
                   require(std::isfinite(p.nu) && p.nu > 1.0, "t degrees of freedom must exceed 1");
                   require(std::isfinite(p.sigma_xy) &&
                               p.sigma_xy * p.sigma_xy < p.sigma_x * p.sigma_x * p.sigma_y * p.sigma_y,
                           "t dispersion matrix must be positive definite");
                 },
                 [](const Bvp1Family& p) {
                   require_location(p.mu_x, p.mu_y, p.sigma_x, p.sigma_y);
                   require(positive(p.delta), "delta must be positive");
                 },
                 [](const Bvp2Family& p) {
                   require_location(p.mu_x, p.mu_y, p.sigma_x, p.sigma_y);
                   require(positive(p.delta) && positive(p.delta_y), "tail indices must be positive");
                 },
                 [](const Bvp3Family& p) {
                   require_location(p.mu_x, p.mu_y, p.sigma_x, p.sigma_y);
                   require(positive(p.delta) && positive(p.delta_x) && positive(p.delta_y),
                           "tail indices must be positive");
                 },
             },
             f);
}

std::string family_name(const BivariateFamily& f) {
  static constexpr std::array<const char*, 5> names{"normal", "t", "bvp1", "bvp2", "bvp3"};
  return names[f.index()];
}

std::string describe(const BivariateFamily& f) {
  std::ostringstream os;
  os << "family=" << family_name(f);
  auto kv = [&os](const char* k, double v) { os << ' ' << k << '=' << io::format_number(v); };
  std::visit(overloaded{
                 [&](const NormalFamily& p) {
                   kv("mu_x", p.mu_x), kv("mu_y", p.mu_y), kv("sigma_x", p.sigma_x);
                   kv("sigma_y", p.sigma_y), kv("rho", p.rho);
                 },
                 [&](const EllipticalTFamily& p) {
                   kv("mu_x", p.mu_x), kv("mu_y", p.mu_y), kv("sigma_x", p.sigma_x);
                   kv("sigma_y", p.sigma_y), kv("sigma_xy", p.sigma_xy), kv("nu", p.nu);
                 },
                 [&](const Bvp1Family& p) {
                   kv("mu_x", p.mu_x), kv("mu_y", p.mu_y), kv("sigma_x", p.sigma_x);
                   kv("sigma_y", p.sigma_y), kv("delta", p.delta);
                 },
                 [&](const Bvp2Family& p) {
                   kv("mu_x", p.mu_x), kv("mu_y", p.mu_y), kv("sigma_x", p.sigma_x);
                   kv("sigma_y", p.sigma_y), kv("delta", p.delta), kv("delta_y", p.delta_y);
                 },
                 [&](const Bvp3Family& p) {
                   kv("mu_x", p.mu_x), kv("mu_y", p.mu_y), kv("sigma_x", p.sigma_x);
                   kv("sigma_y", p.sigma_y), kv("delta", p.delta), kv("delta_x", p.delta_x);
                   kv("delta_y", p.delta_y);
                 },
             },
             f);
  return os.str();
}

BivariateFamily family_from_config(const std::map<std::string, std::string>& kv) {
  auto num = [&kv](const char* key, double fallback) {
    const auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(it->second, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != it->second.size()) {
      throw DomainError(std::string("parameter ") + key + " is not a number: '" + it->second + "'");
    }
    return v;
  };
  const auto it = kv.find("family");
  if (it == kv.end()) throw DomainError("missing 'family'");
  const std::string& name = it->second;

  BivariateFamily f;
  if (name == "normal") {
    NormalFamily p;
    p.rho = num("rho", p.rho);
    f = p;
  } else if (name == "t" || name == "elliptical_t") {
    EllipticalTFamily p;
    p.sigma_xy = num("sigma_xy", p.sigma_xy);
    p.nu = num("nu", p.nu);
    f = p;
  } else if (name == "bvp1") {
    Bvp1Family p;
    p.delta = num("delta", p.delta);
    f = p;
  } else if (name == "bvp2") {
    Bvp2Family p;
    p.delta = num("delta", p.delta);
    p.delta_y = num("delta_y", p.delta_y);
    f = p;
  } else if (name == "bvp3") {
    Bvp3Family p;
    p.delta = num("delta", p.delta);
    p.delta_x = num("delta_x", p.delta_x);
    p.delta_y = num("delta_y", p.delta_y);
    f = p;
  } else {
    throw DomainError("unknown family '" + name + "' (normal, t, bvp1, bvp2, bvp3)");
  }
  std::visit(
      [&](auto& p) {
        p.mu_x = num("mu_x", p.mu_x);
        p.mu_y = num("mu_y", p.mu_y);
        p.sigma_x = num("sigma_x", p.sigma_x);
        p.sigma_y = num("sigma_y", p.sigma_y);
      },
      f);
  validate(f);
  return f;
}

Margin margin_x(const BivariateFamily& f) {
  return std::visit(overloaded{
                        [](const NormalFamily& p) -> Margin { return NormalMargin{p.mu_x, p.sigma_x}; },
                        [](const EllipticalTFamily& p) -> Margin {
                          return StudentTMargin{p.mu_x, p.sigma_x, p.nu};
                        },
                        [](const Bvp1Family& p) -> Margin {
                          return ParetoIIMargin{p.mu_x, p.sigma_x, p.delta};
                        },
                        [](const Bvp2Family& p) -> Margin {
                          return ParetoIIMargin{p.mu_x, p.sigma_x, p.delta};
                        },
                        [](const Bvp3Family& p) -> Margin {
                          return ParetoIIMargin{p.mu_x, p.sigma_x, p.delta_x_star()};
                        },
                    },
                    f);
}

Margin margin_y(const BivariateFamily& f) {
  return std::visit(overloaded{
                        [](const NormalFamily& p) -> Margin { return NormalMargin{p.mu_y, p.sigma_y}; },
                        [](const EllipticalTFamily& p) -> Margin {
                          return StudentTMargin{p.mu_y, p.sigma_y, p.nu};
                        },
                        [](const Bvp1Family& p) -> Margin {
                          return ParetoIIMargin{p.mu_y, p.sigma_y, p.delta};
                        },
                        [](const Bvp2Family& p) -> Margin {
                          return ParetoIIMargin{p.mu_y, p.sigma_y, p.delta_y_star()};
                        },
                        [](const Bvp3Family& p) -> Margin {
                          return ParetoIIMargin{p.mu_y, p.sigma_y, p.delta_y_star()};
                        },
                    },
                    f);
}

// ------------------------------------------------------ bivariate survival

namespace {

// Gauss–Legendre half-node tables (6, 12 and 20 points) used by Genz's BVND.
constexpr std::array<double, 3> kW6{0.1713244923791705, 0.3607615730481384, 0.4679139345726904};
constexpr std::array<double, 3> kX6{-0.9324695142031522, -0.6612093864662647, -0.2386191860831970};
constexpr std::array<double, 6> kW12{0.04717533638651177, 0.1069393259953183, 0.1600783285433464,
                                     0.2031674267230659,  0.2334925365383547, 0.2491470458134029};
constexpr std::array<double, 6> kX12{-0.9815606342467191, -0.9041172563704750, -0.7699026741943050,
                                     -0.5873179542866171, -0.3678314989981802, -0.1252334085114692};
constexpr std::array<double, 10> kW20{0.01761400713915212, 0.04060142980038694, 0.06267204833410906,
                                      0.08327674157670475, 0.1019301198172404,  0.1181945319615184,
                                      0.1316886384491766,  0.1420961093183821,  0.1491729864726037,
                                      0.1527533871307259};
constexpr std::array<double, 10> kX20{-0.9931285991850949, -0.9639719272779138, -0.9122344282513259,
                                      -0.8391169718222188, -0.7463319064601508, -0.6360536807265150,
                                      -0.5108670019508271, -0.3737060887154196, -0.2277858511416451,
                                      -0.07652652113349733};

}  // namespace

double bivariate_normal_upper(double h, double k, double r) {
  using specfun::normal_cdf;
  if (std::isnan(h) || std::isnan(k) || !(std::fabs(r) <= 1.0)) {
    throw DomainError("bivariate normal needs finite correlation in [-1, 1]");
  }
  if (h == INFINITY || k == INFINITY) return 0.0;
  if (h == -INFINITY) return normal_cdf(-k);
  if (k == -INFINITY) return normal_cdf(-h);

  const double* w;
  const double* x;
  std::size_t lg;
  if (std::fabs(r) < 0.3) {
    w = kW6.data(), x = kX6.data(), lg = kW6.size();
  } else if (std::fabs(r) < 0.75) {
    w = kW12.data(), x = kX12.data(), lg = kW12.size();
  } else {
    w = kW20.data(), x = kX20.data(), lg = kW20.size();
  }
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double hk = h * k;
  double bvn = 0.0;
  if (std::fabs(r) < 0.925) {
    const double hs = 0.5 * (h * h + k * k);
    const double asr = std::asin(r);
    for (std::size_t i = 0; i < lg; ++i) {
      double sn = std::sin(asr * (x[i] + 1.0) / 2.0);
      bvn += w[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
      sn = std::sin(asr * (-x[i] + 1.0) / 2.0);
      bvn += w[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
    }
    return bvn * asr / (2.0 * two_pi) + normal_cdf(-h) * normal_cdf(-k);
  }
  if (r < 0.0) {
    k = -k;
    hk = -hk;
  }
  if (std::fabs(r) < 1.0) {
    const double as = (1.0 - r) * (1.0 + r);
    double a = std::sqrt(as);
    const double bs = (h - k) * (h - k);
    const double c = (4.0 - hk) / 8.0;
    const double d = (12.0 - hk) / 16.0;
    bvn = a * std::exp(-(bs / as + hk) / 2.0) *
          (1.0 - c * (bs - as) * (1.0 - d * bs / 5.0) / 3.0 + c * d * as * as / 5.0);
    if (hk > -160.0) {
      const double b = std::sqrt(bs);
      bvn -= std::exp(-hk / 2.0) * std::sqrt(two_pi) * normal_cdf(-b / a) * b *
             (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0);
    }
    a /= 2.0;
    for (std::size_t i = 0; i < lg; ++i) {
      double xs = (a * (x[i] + 1.0)) * (a * (x[i] + 1.0));
      double rs = std::sqrt(1.0 - xs);
      bvn += a * w[i] *
             (std::exp(-bs / (2.0 * xs) - hk / (1.0 + rs)) / rs -
              std::exp(-(bs / xs + hk) / 2.0) * (1.0 + c * xs * (1.0 + d * xs)));
      xs = as * (-x[i] + 1.0) * (-x[i] + 1.0) / 4.0;
      rs = std::sqrt(1.0 - xs);
      bvn += a * w[i] * std::exp(-(bs / xs + hk) / 2.0) *
             (std::exp(-hk * (1.0 - rs) / (2.0 * (1.0 + rs))) / rs - (1.0 + c * xs * (1.0 + d * xs)));
    }
    bvn = -bvn / two_pi;
  }
  if (r > 0.0) return std::clamp(bvn + normal_cdf(-std::max(h, k)), 0.0, 1.0);
  bvn = -bvn;
  if (k > h) {
    if (h < 0.0) {
      bvn += normal_cdf(k) - normal_cdf(h);
    } else {
      bvn += normal_cdf(-h) - normal_cdf(-k);
    }
  }
  return std::clamp(bvn, 0.0, 1.0);
}

namespace {

// P[T1 > a, T2 > b] for a standard bivariate t: average the normal orthant
// probability over the chi-square mixing variable V = e^w. In w the mixing
// density C·exp(νw/2 − e^w/2) is smooth with exponentially thin tails.
double bivariate_t_upper(double a, double b, double r, double nu) {
  const double half = 0.5 * nu;
  const double log_c = -half * std::log(2.0) - specfun::log_gamma(half);
  const double w_lo = (std::log(1e-17 * half) - log_c) / half;
  const double w_hi = std::log(nu + 60.0 * std::sqrt(2.0 * nu) + 200.0);
  auto integrand = [&](double w) {
    const double v = std::exp(w);
    const double s = std::sqrt(v / nu);
    return std::exp(log_c + half * w - 0.5 * v) * bivariate_normal_upper(a * s, b * s, r);
  };
  QuadratureSpec spec;
  spec.abs_tol = 1e-13;
  spec.rel_tol = 1e-11;
  return std::clamp(integrate(integrand, w_lo, w_hi, spec).value, 0.0, 1.0);
}

}  // namespace

double joint_ddf(const BivariateFamily& f, double x, double y) {
  return std::visit(
      overloaded{
          [&](const NormalFamily& p) {
            return bivariate_normal_upper((x - p.mu_x) / p.sigma_x, (y - p.mu_y) / p.sigma_y, p.rho);
          },
          [&](const EllipticalTFamily& p) {
            return bivariate_t_upper((x - p.mu_x) / p.sigma_x, (y - p.mu_y) / p.sigma_y,
                                     p.sigma_xy / (p.sigma_x * p.sigma_y), p.nu);
          },
          [&](const Bvp1Family& p) {
            const double u = standardize_clamped(x, p.mu_x, p.sigma_x);
            const double v = standardize_clamped(y, p.mu_y, p.sigma_y);
            return std::exp(-p.delta * std::log1p(u + v));
          },
          [&](const Bvp2Family& p) {
            const double u = standardize_clamped(x, p.mu_x, p.sigma_x);
            const double v = standardize_clamped(y, p.mu_y, p.sigma_y);
            return std::exp(-p.delta * std::log1p(u + v) - p.delta_y * std::log1p(v));
          },
          [&](const Bvp3Family& p) {
            const double u = standardize_clamped(x, p.mu_x, p.sigma_x);
            const double v = standardize_clamped(y, p.mu_y, p.sigma_y);
            return std::exp(-p.delta * std::log1p(u + v) - p.delta_x * std::log1p(u) -
                            p.delta_y * std::log1p(v));
          },
      },
      f);
}

// ---------------------------------------------------------------- sampling

namespace {

void fill_chunk(const BivariateFamily& f, Rng& rng, double* xs, double* ys, std::size_t n) {
  std::visit(overloaded{
                 [&](const NormalFamily& p) {
                   const double c = std::sqrt((1.0 - p.rho) * (1.0 + p.rho));
                   for (std::size_t i = 0; i < n; ++i) {
                     const auto [z1, z2] = rng.normal_pair();
                     xs[i] = p.mu_x + p.sigma_x * z1;
                     ys[i] = p.mu_y + p.sigma_y * (p.rho * z1 + c * z2);
                   }
                 },
                 [&](const EllipticalTFamily& p) {
                   const double l21 = p.sigma_xy / p.sigma_x;
                   const double l22 = std::sqrt(p.sigma_y * p.sigma_y - l21 * l21);
                   for (std::size_t i = 0; i < n; ++i) {
                     const auto [z1, z2] = rng.normal_pair();
                     const double s = std::sqrt(p.nu / (2.0 * rng.gamma(0.5 * p.nu)));
                     xs[i] = p.mu_x + s * p.sigma_x * z1;
                     ys[i] = p.mu_y + s * (l21 * z1 + l22 * z2);
                   }
                 },
                 [&](const Bvp1Family& p) {
                   for (std::size_t i = 0; i < n; ++i) {
                     const double g = rng.gamma(p.delta);
                     xs[i] = p.mu_x + p.sigma_x * rng.exponential() / g;
                     ys[i] = p.mu_y + p.sigma_y * rng.exponential() / g;
                   }
                 },
                 [&](const Bvp2Family& p) {
                   for (std::size_t i = 0; i < n; ++i) {
                     const double g = rng.gamma(p.delta);
                     const double gy = rng.gamma(p.delta_y);
                     xs[i] = p.mu_x + p.sigma_x * rng.exponential() / g;
                     ys[i] = p.mu_y + p.sigma_y * rng.exponential() / (gy + g);
                   }
                 },
                 [&](const Bvp3Family& p) {
                   for (std::size_t i = 0; i < n; ++i) {
                     const double g = rng.gamma(p.delta);
                     const double gx = rng.gamma(p.delta_x);
                     const double gy = rng.gamma(p.delta_y);
                     xs[i] = p.mu_x + p.sigma_x * rng.exponential() / (gx + g);
                     ys[i] = p.mu_y + p.sigma_y * rng.exponential() / (gy + g);
                   }
                 },
             },
             f);
}

}  // namespace

PairedSample sample(const BivariateFamily& f, std::size_t n, std::uint64_t seed) {
  validate(f);
  if (n == 0) throw DomainError("sample size must be at least 1");
  PairedSample out;
  out.xs.resize(n);
  out.ys.resize(n);
  out.meta.seed = seed;
  out.meta.source = describe(f);
  const std::size_t chunks = (n + kSampleChunk - 1) / kSampleChunk;
  detail::parallel_for(chunks, [&](std::size_t c) {
    Rng rng(derive_seed(seed, c));
    const std::size_t begin = c * kSampleChunk;
    const std::size_t len = std::min(kSampleChunk, n - begin);
    fill_chunk(f, rng, out.xs.data() + begin, out.ys.data() + begin, len);
  });
  return out;
}

// ------------------------------------------------- regression and Pearson

RegressionLine regression_line(const BivariateFamily& f) {
  validate(f);
  return std::visit(
      overloaded{
          [](const NormalFamily& p) {
            const double beta = p.rho * p.sigma_x / p.sigma_y;
            return RegressionLine{p.mu_x - beta * p.mu_y, beta};
          },
          [](const EllipticalTFamily& p) {
            const double beta = p.sigma_xy / (p.sigma_y * p.sigma_y);
            return RegressionLine{p.mu_x - beta * p.mu_y, beta};
          },
          [](const Bvp1Family& p) {
            if (!(p.delta > 1.0)) throw MomentError("E[X] is infinite for delta <= 1");
            const double beta = p.sigma_x / (p.delta * p.sigma_y);
            return RegressionLine{p.mu_x + (p.sigma_x / p.delta) * (1.0 - p.mu_y / p.sigma_y), beta};
          },
          [](const Bvp2Family& p) {
            if (!(p.delta > 1.0)) throw MomentError("E[X] is infinite for delta <= 1");
            const double dys = p.delta_y_star();
            const double alpha0 = p.sigma_x * (dys - 1.0) / (dys * (p.delta - 1.0));
            const double beta = alpha0 / p.sigma_y;
            return RegressionLine{p.mu_x + alpha0 - beta * p.mu_y, beta};
          },
          [](const Bvp3Family&) -> RegressionLine {
            throw NoLinearRegressionError("bvp3 has no linear regression of X on Y");
          },
      },
      f);
}

double pearson_closed_form(const BivariateFamily& f) {
  validate(f);
  return std::visit(
      overloaded{
          [](const NormalFamily& p) { return p.rho; },
          [](const EllipticalTFamily& p) {
            if (!(p.nu > 2.0)) throw MomentError("t variance is infinite for nu <= 2");
            return p.sigma_xy / (p.sigma_x * p.sigma_y);
          },
          [](const Bvp1Family& p) {
            if (!(p.delta > 2.0)) throw MomentError("variance is infinite for delta <= 2");
            return 1.0 / p.delta;
          },
          [](const Bvp2Family& p) {
            if (!(p.delta > 2.0)) throw MomentError("variance of X is infinite for delta <= 2");
            const double dys = p.delta_y_star();
            return std::sqrt((p.delta - 2.0) / (p.delta * dys * (dys - 2.0)));
          },
          [](const Bvp3Family&) -> double {
            throw UnsupportedError("no closed-form Pearson correlation for bvp3");
          },
      },
      f);
}

// ------------------------------------------------------- BVP3 density terms

std::vector<PdfTerm> bvp3_pdf_terms(const Bvp3Family& f, PdfNormalization norm) {
  validate(BivariateFamily{f});
  const double d = f.delta;
  std::vector<PdfTerm> terms{
      {{0, 0, 2}, d * (d + 1.0)},       {{1, 0, 1}, d * f.delta_x}, {{0, 1, 1}, d * f.delta_y},
      {{1, 1, 0}, f.delta_x * f.delta_y}, {{2, 0, 0}, 0.0},           {{0, 2, 0}, 0.0},
  };
  if (norm == PdfNormalization::unit_leading) {
    const double lead = terms.front().coefficient;
    for (auto& t : terms) t.coefficient /= lead;
  }
  return terms;
}

double bvp3_standard_density(const Bvp3Family& f, double x, double y) {
  if (x < 0.0 || y < 0.0) return 0.0;
  const double la = std::log1p(x);
  const double lb = std::log1p(y);
  const double lc = std::log1p(x + y);
  double total = 0.0;
  for (const auto& t : bvp3_pdf_terms(f)) {
    if (t.coefficient == 0.0) continue;
    total += t.coefficient * std::exp(-(f.delta_x + t.triplet[0]) * la -
                                      (f.delta_y + t.triplet[1]) * lb -
                                      (f.delta + t.triplet[2]) * lc);
  }
  return total;
}

}  // namespace hg
