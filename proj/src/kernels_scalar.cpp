#include "heavygini/kernels.hpp"

namespace hg::kernels::scalar {

double sum(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i];
  return s;
}

double centered_dot(const double* x, const double* w, std::size_t n, double center) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += (x[i] - center) * w[i];
  return s;
}

CenteredMoments centered_moments(const double* x, const double* y, std::size_t n, double mx,
                                 double my) {
  CenteredMoments m;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    m.sxx += dx * dx;
    m.syy += dy * dy;
    m.sxy += dx * dy;
  }
  return m;
}

double weighted_sum(const double* x, const double* c, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += c[i] * x[i];
  return s;
}

double weighted_centered_dot(const double* x, const double* c, const double* w, std::size_t n,
                             double center) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += c[i] * (x[i] - center) * w[i];
  return s;
}

}  // namespace hg::kernels::scalar
