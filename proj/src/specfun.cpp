#include "heavygini/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <math.h>
#include <numbers>
#include <sstream>

#include "heavygini/error.hpp"

namespace hg::specfun {

namespace {

constexpr double kLnSqrt2Pi = 0.918938533204672741780329736406;

// Stirling remainder ln Γ(x) − [(x−½)ln x − x + ln √(2π)], valid for x >= 10.
double stirling_correction(double x) {
  const double r = 1.0 / x;
  const double r2 = r * r;
  return r *
         (1.0 / 12 +
          r2 * (-1.0 / 360 +
                r2 * (1.0 / 1260 +
                      r2 * (-1.0 / 1680 +
                            r2 * (1.0 / 1188 + r2 * (-691.0 / 360360 + r2 * (1.0 / 156)))))));
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << what << " must be a positive finite real, got " << v;
    throw DomainError(os.str());
  }
}

// Modified Lentz evaluation of the incomplete-beta continued fraction.
double beta_continued_fraction(double a, double b, double x) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  constexpr int max_iter = 20000;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= max_iter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) return h;
  }
  throw ConvergenceError("incomplete beta continued fraction did not converge", h, 0.0,
                         static_cast<std::size_t>(max_iter));
}

// Solves I_x(a, b) = target for x in (0, 1); safeguarded Newton.
double inverse_reg_inc_beta(double target, double a, double b) {
  if (target <= 0.0) return 0.0;
  if (target >= 1.0) return 1.0;
  double lo = 0.0;
  double hi = 1.0;
  double x = 0.5;
  for (int it = 0; it < 400; ++it) {
    const double f = reg_inc_beta(x, a, b) - target;
    if (f == 0.0) return x;
    if (f < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    const double dens = beta_pdf(x, a, b);
    double next = (dens > 0.0 && std::isfinite(dens)) ? x - f / dens : -1.0;
    if (!(next > lo && next < hi)) {
      // Bisect, geometrically when the bracket spans many decades.
      next = (lo > 0.0 && hi / lo > 16.0) ? std::sqrt(lo * hi)
             : (lo == 0.0 && hi < 1e-3)   ? hi * 1e-3
                                          : 0.5 * (lo + hi);
    }
    if (std::fabs(next - x) <= 4 * std::numeric_limits<double>::epsilon() * x) return next;
    x = next;
  }
  return x;
}

}  // namespace

double log_gamma(double x) {
  require_positive(x, "log_gamma argument");
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

double ln_beta(double a, double b) {
  require_positive(a, "ln_beta a");
  require_positive(b, "ln_beta b");
  const double p = std::min(a, b);
  const double q = std::max(a, b);
  if (p >= 10.0) {
    const double corr = stirling_correction(p) + stirling_correction(q) - stirling_correction(p + q);
    return -0.5 * std::log(q) + kLnSqrt2Pi + corr + (p - 0.5) * std::log(p / (p + q)) +
           q * std::log1p(-p / (p + q));
  }
  if (q >= 10.0) {
    const double corr = stirling_correction(q) - stirling_correction(p + q);
    return log_gamma(p) + corr + p - p * std::log(p + q) + (q - 0.5) * std::log1p(-p / (p + q));
  }
  return log_gamma(p) + log_gamma(q) - log_gamma(p + q);
}

double reg_inc_beta(double t, double a, double b) {
  require_positive(a, "reg_inc_beta a");
  require_positive(b, "reg_inc_beta b");
  if (!(t >= 0.0 && t <= 1.0)) {
    std::ostringstream os;
    os << "reg_inc_beta argument must lie in [0,1], got " << t;
    throw DomainError(os.str());
  }
  if (t == 0.0) return 0.0;
  if (t == 1.0) return 1.0;
  const double log_front = a * std::log(t) + b * std::log1p(-t) - ln_beta(a, b);
  const double front = std::exp(log_front);
  if (t < (a + 1.0) / (a + b + 2.0)) {
    return std::clamp(front * beta_continued_fraction(a, b, t) / a, 0.0, 1.0);
  }
  return std::clamp(1.0 - front * beta_continued_fraction(b, a, 1.0 - t) / b, 0.0, 1.0);
}

double beta_pdf(double t, double a, double b) {
  require_positive(a, "beta_pdf a");
  require_positive(b, "beta_pdf b");
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("beta_pdf argument must lie in [0,1]");
  if (t == 0.0) return a < 1.0 ? std::numeric_limits<double>::infinity() : (a == 1.0 ? b : 0.0);
  if (t == 1.0) return b < 1.0 ? std::numeric_limits<double>::infinity() : (b == 1.0 ? a : 0.0);
  return std::exp((a - 1.0) * std::log(t) + (b - 1.0) * std::log1p(-t) - ln_beta(a, b));
}

double pochhammer_log(double a, unsigned long k) {
  require_positive(a, "pochhammer_log a");
  if (k == 0) return 0.0;
  if (k <= 32) {
    double s = 0.0;
    for (unsigned long i = 0; i < k; ++i) s += std::log(a + static_cast<double>(i));
    return s;
  }
  return log_gamma(a + static_cast<double>(k)) - log_gamma(a);
}

double HypergeometricSpec::convergence_margin() const {
  double h = 0.0;
  for (double b : lower) h += b;
  for (double a : upper) h -= a;
  return h;
}

namespace {

struct TermStream {
  const HypergeometricSpec& spec;
  double log_abs_z;
  bool alternating;
  double log_term = 0.0;  // ln |t_k|
  double sign = 1.0;
  unsigned long k = 0;

  // Advances t_k -> t_{k+1}; returns ln of the term ratio |t_{k+1} / t_k|.
  double advance() {
    const double kk = static_cast<double>(k);
    double r = log_abs_z - std::log(kk + 1.0);
    for (double a : spec.upper) r += std::log(a + kk);
    for (double b : spec.lower) r -= std::log(b + kk);
    log_term += r;
    if (alternating) sign = -sign;
    ++k;
    return r;
  }
  double term() const { return sign * std::exp(log_term); }
};

double sum_inside_disc(const HypergeometricSpec& spec, const SeriesOptions& opts) {
  TermStream ts{spec, std::log(std::fabs(spec.z)), spec.z < 0.0};
  const double abs_z = std::fabs(spec.z);
  long double sum = 1.0L;
  double last = 1.0;
  double largest = 1.0;
  auto checked = [&]() {
    // Alternating series whose terms dwarf the sum lose digits to rounding.
    const double rounding = largest * 8.0 * std::numeric_limits<long double>::epsilon();
    if (rounding > std::max(opts.rel_tol, 1e-14) * std::fabs(static_cast<double>(sum))) {
      std::ostringstream os;
      os << "hypergeometric series lost precision to cancellation (largest term " << largest
         << ", sum " << static_cast<double>(sum) << ")";
      throw ConvergenceError(os.str(), static_cast<double>(sum), last, ts.k);
    }
    return static_cast<double>(sum);
  };
  while (ts.k < opts.max_terms) {
    const double log_ratio = ts.advance();
    last = ts.term();
    largest = std::max(largest, std::fabs(last));
    sum += last;
    const double ratio = std::exp(log_ratio);
    const double abs_sum = std::fabs(static_cast<double>(sum));
    if (ratio < 1.0 && std::fabs(last) < opts.rel_tol * abs_sum) {
      if (abs_z == 1.0) return checked();  // alternating boundary: error below next term
      const double rho = std::max(ratio, abs_z);
      if (std::fabs(last) * rho / (1.0 - rho) < opts.rel_tol * abs_sum) return checked();
    }
  }
  throw ConvergenceError("hypergeometric series hit the term cap", static_cast<double>(sum), last,
                         ts.k);
}

// z = 1: partial sums S_K = S − c0 K^{-h} − c1 K^{-h-1} − ..., so doubling K
// and eliminating one exponent per column gives a Richardson table.
double sum_at_one(const HypergeometricSpec& spec, const SeriesOptions& opts, double h) {
  TermStream ts{spec, 0.0, false};
  constexpr std::size_t kFirstCheckpoint = 64;
  constexpr std::size_t kMaxColumns = 8;
  std::vector<std::vector<double>> table;
  double sum = 1.0;  // Σ_{k < ts.k + 1} t_k
  double last = 1.0;
  std::size_t next_checkpoint = kFirstCheckpoint;
  while (ts.k + 1 < opts.max_terms) {
    if (ts.k + 1 == next_checkpoint) {
      std::vector<double> row{sum};
      const std::size_t j = table.size();
      const std::size_t cols = std::min(j, kMaxColumns);
      for (std::size_t m = 1; m <= cols; ++m) {
        const double factor = std::pow(2.0, h + static_cast<double>(m) - 1.0);
        row.push_back(row[m - 1] + (row[m - 1] - table[j - 1][m - 1]) / (factor - 1.0));
      }
      table.push_back(std::move(row));
      if (j >= 2) {
        const double cur = table[j].back();
        const double prev = table[j - 1].back();
        if (std::fabs(cur - prev) <= opts.rel_tol * std::fabs(cur)) return cur;
      }
      next_checkpoint *= 2;
    }
    const double log_ratio = ts.advance();
    last = ts.term();
    sum += last;
    // Fast path: the remaining tail (≈ t_k k / h) is already negligible.
    if (log_ratio < 0.0 &&
        std::fabs(last) * (static_cast<double>(ts.k) + 1.0) / h < 0.01 * opts.rel_tol * std::fabs(sum)) {
      return sum;
    }
  }
  throw ConvergenceError("hypergeometric series at z=1 did not converge within the term cap", sum,
                         last, ts.k + 1);
}

}  // namespace

double hyp_pfq(const HypergeometricSpec& spec, const SeriesOptions& opts) {
  for (double a : spec.upper) require_positive(a, "hypergeometric upper parameter");
  for (double b : spec.lower) require_positive(b, "hypergeometric lower parameter");
  if (!(opts.rel_tol > 0.0)) throw DomainError("series rel_tol must be positive");
  if (!std::isfinite(spec.z) || std::fabs(spec.z) > 1.0) {
    throw DomainError("hypergeometric argument must satisfy |z| <= 1");
  }
  if (spec.z == 0.0) return 1.0;
  const std::size_t p = spec.upper.size();
  const std::size_t q = spec.lower.size();
  if (p > q + 1) throw DomainError("pFq with p > q+1 diverges for z != 0");
  if (std::fabs(spec.z) == 1.0 && p == q + 1) {
    const double h = spec.convergence_margin();
    if (!(h > 0.0)) {
      std::ostringstream os;
      os << "pFq at |z|=1 needs convergence margin h > 0, got h=" << h;
      throw ConvergenceError(os.str(), 1.0, 1.0, 0);
    }
    if (spec.z == 1.0) return sum_at_one(spec, opts, h);
  }
  return sum_inside_disc(spec, opts);
}

double gauss_2f1_at_one(double a, double b, double c) {
  if (!(c - a - b > 0.0)) throw DomainError("Gauss summation needs c - a - b > 0");
  return std::exp(log_gamma(c) + log_gamma(c - a - b) - log_gamma(c - a) - log_gamma(c - b));
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    throw DomainError("normal_quantile probability must lie in [0,1]");
  }
  static constexpr std::array<double, 8> a{
      3.3871328727963666080e0,  1.3314166789178437745e+2, 1.9715909503065514427e+3,
      1.3731693765509461125e+4, 4.5921953931549871457e+4, 6.7265770927008700853e+4,
      3.3430575583588128105e+4, 2.5090809287301226727e+3};
  static constexpr std::array<double, 8> b{
      1.0,                      4.2313330701600911252e+1, 6.8718700749205790830e+2,
      5.3941960214247511077e+3, 2.1213794301586595867e+4, 3.9307895800092710610e+4,
      2.8729085735721942674e+4, 5.2264952788528545610e+3};
  static constexpr std::array<double, 8> c{
      1.42343711074968357734e0,  4.63033784615654529590e0,  5.76949722146069140550e0,
      3.64784832476320460504e0,  1.27045825245236838258e0,  2.41780725177450611770e-1,
      2.27238449892691845833e-2, 7.74545014278341407640e-4};
  static constexpr std::array<double, 8> d{
      1.0,                       2.05319162663775882187e0,  1.67638483018380384940e0,
      6.89767334985100004550e-1, 1.48103976427480074590e-1, 1.51986665636164571966e-2,
      5.47593808499534494600e-4, 1.05075007164441684324e-9};
  static constexpr std::array<double, 8> e{
      6.65790464350110377720e0,  5.46378491116411436990e0,  1.78482653991729133580e0,
      2.96560571828504891230e-1, 2.65321895265761230930e-2, 1.24266094738807843860e-3,
      2.71155556874348757815e-5, 2.01033439929228813265e-7};
  static constexpr std::array<double, 8> f{
      1.0,                       5.99832206555887937690e-1, 1.36929880922735805310e-1,
      1.48753612908506148525e-2, 7.86869131145613259100e-4, 1.84631831751005468180e-5,
      1.42151175831644588870e-7, 2.04426310338993978564e-15};
  auto poly = [](const std::array<double, 8>& coef, double x) {
    double s = coef[7];
    for (int i = 6; i >= 0; --i) s = s * x + coef[i];
    return s;
  };
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q * poly(a, r) / poly(b, r);
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = poly(c, r) / poly(d, r);
  } else {
    r -= 5.0;
    val = poly(e, r) / poly(f, r);
  }
  return q < 0.0 ? -val : val;
}

double student_t_cdf(double t, double nu) {
  require_positive(nu, "student_t degrees of freedom");
  if (std::isnan(t)) throw DomainError("student_t_cdf argument is NaN");
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  const double t2 = t * t;
  if (t2 < nu) {
    // Near the centre ν/(ν+t²) is close to 1; use the complementary form.
    const double centre = 0.5 * reg_inc_beta(t2 / (nu + t2), 0.5, 0.5 * nu);
    return t > 0.0 ? 0.5 + centre : 0.5 - centre;
  }
  const double tail = 0.5 * reg_inc_beta(nu / (nu + t2), 0.5 * nu, 0.5);
  return t > 0.0 ? 1.0 - tail : tail;
}

double student_t_quantile(double p, double nu) {
  require_positive(nu, "student_t degrees of freedom");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("student_t_quantile probability must lie in [0,1]");
  if (p == 0.0) return -std::numeric_limits<double>::infinity();
  if (p == 1.0) return std::numeric_limits<double>::infinity();
  if (p == 0.5) return 0.0;
  const double tail = std::min(p, 1.0 - p);
  // P[T > t] = ½ I_x(ν/2, ½) with x = ν/(ν+t²).
  const double target = 2.0 * tail;
  double x;
  double y;  // 1 − x
  if (target < 0.5) {
    x = inverse_reg_inc_beta(target, 0.5 * nu, 0.5);
    y = 1.0 - x;
  } else {
    y = inverse_reg_inc_beta(1.0 - target, 0.5, 0.5 * nu);
    x = 1.0 - y;
  }
  const double t = std::sqrt(nu * y / x);
  return p < 0.5 ? -t : t;
}

}  // namespace hg::specfun
