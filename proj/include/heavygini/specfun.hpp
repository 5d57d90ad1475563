#pragma once

#include <cstddef>
#include <vector>

namespace hg::specfun {

/// ln Γ(x) for x > 0. Re-entrant (does not touch `signgam`).
double log_gamma(double x);

/// ln B(a, b). Uses Stirling-corrected differences when either argument is
/// large so that ln B(a, 1) = -ln a keeps full relative accuracy at a = 1e6.
double ln_beta(double a, double b);

/// Regularized incomplete beta I_t(a, b), i.e. the Beta(a, b) c.d.f. at t.
double reg_inc_beta(double t, double a, double b);

/// Density of Beta(a, b) at t (the derivative of reg_inc_beta in t).
double beta_pdf(double t, double a, double b);

/// ln((a)_k) with (a)_0 = 1.
double pochhammer_log(double a, unsigned long k);

struct HypergeometricSpec {
  std::vector<double> upper;  // a_1 .. a_p
  std::vector<double> lower;  // b_1 .. b_q
  double z = 0.0;

  /// Σ lower − Σ upper. The series at |z| = 1 converges absolutely iff h > 0.
  double convergence_margin() const;
};

struct SeriesOptions {
  double rel_tol = 1e-12;
  std::size_t max_terms = 200000;
};

/// Generalized hypergeometric series pFq(upper; lower; z) for positive
/// parameters and |z| <= 1. At z = 1 the slowly converging tail is removed by
/// Richardson extrapolation in the known exponents K^{-h}, K^{-h-1}, ...
///
/// Throws DomainError for invalid parameters, ConvergenceError (carrying the
/// partial sum and last term) when h <= 0 on |z| = 1 or the term cap is hit.
double hyp_pfq(const HypergeometricSpec& spec, const SeriesOptions& opts = {});

/// Gauss's closed form ₂F₁(a, b; c; 1) = Γ(c)Γ(c−a−b) / (Γ(c−a)Γ(c−b)), c−a−b > 0.
double gauss_2f1_at_one(double a, double b, double c);

/// Standard normal c.d.f. and its inverse (Wichura's AS 241).
double normal_cdf(double x);
double normal_quantile(double p);

/// Student-t c.d.f. and quantile with nu > 0 degrees of freedom.
double student_t_cdf(double t, double nu);
double student_t_quantile(double p, double nu);

}  // namespace hg::specfun
