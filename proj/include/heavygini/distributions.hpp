#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "heavygini/sample.hpp"

namespace hg {

// ---------------------------------------------------------------- margins

/// Pareto of the second kind: d.d.f. (1 + (x−μ)/σ)^{−δ} for x >= μ.
struct ParetoIIMargin {
  double mu = 0.0;
  double sigma = 1.0;
  double delta = 1.0;
};

struct NormalMargin {
  double mu = 0.0;
  double sigma = 1.0;
};

struct StudentTMargin {
  double mu = 0.0;
  double sigma = 1.0;
  double nu = 1.0;
};

struct UniformMargin {
  double lo = 0.0;
  double hi = 1.0;
};

using Margin = std::variant<ParetoIIMargin, NormalMargin, StudentTMargin, UniformMargin>;

void validate(const ParetoIIMargin& m);
void validate(const Margin& m);

double margin_ddf(const ParetoIIMargin& m, double x);
/// μ + σ((1−u)^{−1/δ} − 1); throws DomainError for u outside [0, 1).
double margin_quantile(const ParetoIIMargin& m, double u);
/// μ + σ/(δ−1); throws MomentError when δ <= 1.
double margin_mean(const ParetoIIMargin& m);

double margin_ddf(const Margin& m, double x);
double margin_quantile(const Margin& m, double u);
/// Quantile at 1 − s, computed without forming 1 − s, so the upper tail
/// stays resolvable for s down to the smallest doubles.
double margin_survival_quantile(const Margin& m, double s);
double margin_mean(const Margin& m);

// --------------------------------------------------------------- families

struct NormalFamily {
  double mu_x = 0.0, mu_y = 0.0, sigma_x = 1.0, sigma_y = 1.0, rho = 0.0;
};

/// Bivariate t with dispersion matrix [[σx², σxy], [σxy, σy²]] and ν degrees
/// of freedom. σ's are dispersion entries, not (co)variances.
struct EllipticalTFamily {
  double mu_x = 0.0, mu_y = 0.0, sigma_x = 1.0, sigma_y = 1.0, sigma_xy = 0.0, nu = 3.0;
};

/// Exchangeable-tail bivariate Pareto: (μx + σx E_X/G, μy + σy E_Y/G).
struct Bvp1Family {
  double mu_x = 0.0, mu_y = 0.0, sigma_x = 1.0, sigma_y = 1.0, delta = 3.0;
};

/// (μx + σx E_X/G, μy + σy E_Y/(G_Y + G)); Y has tail index δ + δ_Y.
struct Bvp2Family {
  double mu_x = 0.0, mu_y = 0.0, sigma_x = 1.0, sigma_y = 1.0, delta = 3.0, delta_y = 1.0;

  double delta_y_star() const { return delta + delta_y; }
};

/// (μx + σx E_X/(G_X + G), μy + σy E_Y/(G_Y + G)); no linear regression.
struct Bvp3Family {
  double mu_x = 0.0, mu_y = 0.0, sigma_x = 1.0, sigma_y = 1.0, delta = 1.0, delta_x = 1.0,
         delta_y = 1.0;

  double delta_x_star() const { return delta + delta_x; }
  double delta_y_star() const { return delta + delta_y; }
};

using BivariateFamily =
    std::variant<NormalFamily, EllipticalTFamily, Bvp1Family, Bvp2Family, Bvp3Family>;

/// Throws DomainError on invalid parameters.
void validate(const BivariateFamily& f);

std::string family_name(const BivariateFamily& f);
/// "key=value" pairs, 12 significant digits, in a fixed key order.
std::string describe(const BivariateFamily& f);

/// Builds a family from keys family, mu_x, mu_y, sigma_x, sigma_y, rho,
/// sigma_xy, nu, delta, delta_x, delta_y (missing keys take the defaults
/// above). Validates the result.
BivariateFamily family_from_config(const std::map<std::string, std::string>& kv);

Margin margin_x(const BivariateFamily& f);
Margin margin_y(const BivariateFamily& f);

/// P[X > x, Y > y]. Below a Pareto family's support the standardized
/// coordinate is clamped at 0, which yields the marginal d.d.f.
double joint_ddf(const BivariateFamily& f, double x, double y);

/// Standard bivariate normal P[Z1 > h, Z2 > k] with correlation r (Genz).
double bivariate_normal_upper(double h, double k, double r);

/// n i.i.d. pairs from the stochastic representation of the family. Pairs
/// are generated in fixed-size chunks, chunk c drawing from an engine seeded
/// with derive_seed(seed, c), so output is independent of thread count.
PairedSample sample(const BivariateFamily& f, std::size_t n, std::uint64_t seed);

inline constexpr std::size_t kSampleChunk = 1 << 16;

struct RegressionLine {
  double alpha = 0.0;
  double beta = 0.0;
};

/// E[X | Y] = α + βY. Throws NoLinearRegressionError for BVP3 and
/// MomentError when E[X] is infinite.
RegressionLine regression_line(const BivariateFamily& f);

/// Population Pearson correlation. Throws MomentError when a variance is
/// infinite and UnsupportedError for BVP3.
double pearson_closed_form(const BivariateFamily& f);

// ------------------------------------------------------ BVP3 density terms

/// How the coefficients of the standardized BVP3 density are scaled.
/// raw_mixed_partial is the actual density (∂²F̄/∂x∂y); unit_leading divides
/// every coefficient by the (0,0,2) one so that it equals 1.
enum class PdfNormalization { raw_mixed_partial, unit_leading };

struct PdfTerm {
  std::array<int, 3> triplet;  // exponent shifts on (1+x), (1+y), (1+x+y)
  double coefficient;
};

/// All six triplets with i1 + i2 + i3 = 2, in a fixed order.
std::vector<PdfTerm> bvp3_pdf_terms(const Bvp3Family& f,
                                    PdfNormalization norm = PdfNormalization::raw_mixed_partial);

/// Standardized density Σ d_i (1+x)^{−(δx+i1)} (1+y)^{−(δy+i2)} (1+x+y)^{−(δ+i3)}.
double bvp3_standard_density(const Bvp3Family& f, double x, double y);

}  // namespace hg
