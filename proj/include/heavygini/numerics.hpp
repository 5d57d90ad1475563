#pragma once

#include <cstddef>
#include <functional>

namespace hg {

struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  std::size_t max_subdivisions = 10000;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t subdivisions = 0;
};

/// Globally adaptive 21-point Gauss–Kronrod quadrature on a finite [a, b]:
/// the interval with the largest error estimate is bisected until the summed
/// estimate drops below max(abs_tol, rel_tol·|I|). The integrand is never
/// evaluated at the endpoints, so integrable endpoint singularities are fine.
///
/// Throws QuadratureError (carrying the achieved estimate) when the
/// subdivision cap is hit first.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureSpec& spec = {});

}  // namespace hg
