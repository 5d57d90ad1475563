#include "heavygini/numerics.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "heavygini/error.hpp"

namespace hg {

namespace {

// Kronrod abscissae on [0, 1) of the symmetric rule; odd indices are the
// 10-point Gauss nodes.
constexpr std::array<double, 11> kXgk{
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

constexpr std::array<double, 11> kWgk{
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077715211040010, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

constexpr std::array<double, 5> kWg{
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gauss_kronrod(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  std::array<double, 10> f1{};
  std::array<double, 10> f2{};
  double kronrod = fc * kWgk[10];
  double gauss = 0.0;
  double abs_k = std::fabs(kronrod);
  for (std::size_t j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = f(center - dx);
    f2[j] = f(center + dx);
    kronrod += kWgk[j] * (f1[j] + f2[j]);
    abs_k += kWgk[j] * (std::fabs(f1[j]) + std::fabs(f2[j]));
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1[j] + f2[j]);
  }
  // QUADPACK's error scaling: the raw |K21 − G10| is sharpened against the
  // integrand's spread about its mean, and floored at rounding level.
  const double mean = 0.5 * kronrod;
  double spread = kWgk[10] * std::fabs(fc - mean);
  for (std::size_t j = 0; j < 10; ++j) {
    spread += kWgk[j] * (std::fabs(f1[j] - mean) + std::fabs(f2[j] - mean));
  }
  const double width = std::fabs(half);
  spread *= width;
  double error = std::fabs((kronrod - gauss) * half);
  if (spread != 0.0 && error != 0.0) error = spread * std::min(1.0, std::pow(200.0 * error / spread, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  error = std::max(error, 50.0 * eps * abs_k * width);
  const double value = kronrod * half;
  if (!std::isfinite(value)) {
    std::ostringstream os;
    os << "non-finite integrand on [" << a << ", " << b << "]";
    throw QuadratureError(os.str(), value, error);
  }
  return {a, b, value, error};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureSpec& spec) {
  if (!(spec.abs_tol > 0.0) || !(spec.rel_tol > 0.0) || spec.max_subdivisions == 0) {
    throw DomainError("quadrature tolerances must be positive and the subdivision cap non-zero");
  }
  if (!(std::isfinite(a) && std::isfinite(b))) throw DomainError("quadrature interval must be finite");
  if (a == b) return {};

  std::priority_queue<Segment> heap;
  heap.push(gauss_kronrod(f, a, b));
  double total = heap.top().value;
  double total_error = heap.top().error;
  std::size_t subdivisions = 1;
  // Error parked on segments too narrow to split further.
  double frozen_value = 0.0;
  double frozen_error = 0.0;

  while (total_error + frozen_error > std::max(spec.abs_tol, spec.rel_tol * std::fabs(total))) {
    if (heap.empty()) break;
    if (subdivisions >= spec.max_subdivisions) {
      std::ostringstream os;
      os << "adaptive quadrature hit " << spec.max_subdivisions
         << " subdivisions (estimate " << total << ", error " << total_error + frozen_error << ")";
      throw QuadratureError(os.str(), total, total_error + frozen_error);
    }
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    total -= worst.value;
    total_error -= worst.error;
    if (!(mid > worst.a && mid < worst.b)) {
      total += worst.value;
      frozen_value += worst.value;
      frozen_error += worst.error;
      continue;
    }
    const Segment left = gauss_kronrod(f, worst.a, mid);
    const Segment right = gauss_kronrod(f, mid, worst.b);
    total += left.value + right.value;
    total_error += left.error + right.error;
    heap.push(left);
    heap.push(right);
    ++subdivisions;
    // Re-sum periodically; the running totals drift under heavy cancellation.
    if (subdivisions % 256 == 0) {
      auto copy = heap;
      total = frozen_value;
      total_error = 0.0;
      while (!copy.empty()) {
        total += copy.top().value;
        total_error += copy.top().error;
        copy.pop();
      }
    }
  }
  return {total, total_error + frozen_error, subdivisions};
}

}  // namespace hg
