#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "heavygini/kernels.hpp"

using Catch::Matchers::WithinRel;
using Catch::Matchers::WithinAbs;
namespace k = hg::kernels;

namespace {

// Straight long-double loops, independent of both kernel sets.
struct Reference {
  long double sum = 0, cdot = 0, sxx = 0, syy = 0, sxy = 0, wsum = 0, wcdot = 0;
};

Reference reference(const std::vector<double>& x, const std::vector<double>& y,
                    const std::vector<double>& c, double cx, double cy) {
  Reference r;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const long double dx = static_cast<long double>(x[i]) - cx;
    const long double dy = static_cast<long double>(y[i]) - cy;
    r.sum += x[i];
    r.cdot += dx * y[i];
    r.sxx += dx * dx;
    r.syy += dy * dy;
    r.sxy += dx * dy;
    r.wsum += static_cast<long double>(c[i]) * x[i];
    r.wcdot += static_cast<long double>(c[i]) * dx * y[i];
  }
  return r;
}

}  // namespace

TEST_CASE("kernel sets agree with a long-double reference", "[kernels]") {
  std::mt19937_64 gen(31);
  std::lognormal_distribution<double> heavy(0.0, 1.5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> counts(0, 4);

  std::vector<k::Isa> isas{k::Isa::scalar};
  if (k::isa_available(k::Isa::avx2)) isas.push_back(k::Isa::avx2);

  for (std::size_t n : {0ul, 1ul, 3ul, 4ul, 7ul, 15ul, 16ul, 17ul, 1000ul, 100003ul}) {
    std::vector<double> x(n), y(n), c(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = heavy(gen);
      y[i] = unit(gen);
      c[i] = counts(gen);
    }
    const double cx = 1.7, cy = 0.5;
    const Reference ref = reference(x, y, c, cx, cy);
    const double tol = 1e-12;
    for (k::Isa isa : isas) {
      INFO(k::isa_name(isa) << " n=" << n);
      const auto& t = k::table_for(isa);
      CHECK_THAT(t.sum(x.data(), n), WithinAbs(double(ref.sum), tol * (1.0 + std::fabs(double(ref.sum)))));
      CHECK_THAT(t.centered_dot(x.data(), y.data(), n, cx),
                 WithinAbs(double(ref.cdot), tol * (1.0 + double(ref.sxx))));
      const auto m = t.centered_moments(x.data(), y.data(), n, cx, cy);
      CHECK_THAT(m.sxx, WithinAbs(double(ref.sxx), tol * (1.0 + double(ref.sxx))));
      CHECK_THAT(m.syy, WithinAbs(double(ref.syy), tol * (1.0 + double(ref.syy))));
      CHECK_THAT(m.sxy, WithinAbs(double(ref.sxy), tol * (1.0 + double(ref.sxx))));
      CHECK_THAT(t.weighted_sum(x.data(), c.data(), n),
                 WithinAbs(double(ref.wsum), tol * (1.0 + std::fabs(double(ref.wsum)))));
      CHECK_THAT(t.weighted_centered_dot(x.data(), c.data(), y.data(), n, cx),
                 WithinAbs(double(ref.wcdot), tol * (1.0 + 4.0 * double(ref.sxx))));
    }
  }
}

TEST_CASE("scalar and SIMD kernels agree to rounding", "[kernels]") {
  if (!k::isa_available(k::Isa::avx2)) SKIP("AVX2 not available on this CPU");
  std::mt19937_64 gen(4);
  std::normal_distribution<double> nd;
  const std::size_t n = 250001;
  std::vector<double> x(n), w(n);
  for (auto& v : x) v = nd(gen);
  for (auto& v : w) v = std::fabs(nd(gen));
  const auto& s = k::table_for(k::Isa::scalar);
  const auto& v = k::table_for(k::Isa::avx2);
  CHECK_THAT(v.centered_dot(x.data(), w.data(), n, 0.1),
             WithinRel(s.centered_dot(x.data(), w.data(), n, 0.1), 1e-11));
  CHECK_THAT(v.sum(w.data(), n), WithinRel(s.sum(w.data(), n), 1e-13));
}

TEST_CASE("dispatch can be forced to the reference path", "[kernels]") {
  const k::Isa before = k::active_isa();
  k::set_active_isa(k::Isa::scalar);
  CHECK(k::active_isa() == k::Isa::scalar);
  const std::vector<double> x{1.0, 2.0, 3.0, 4.0, 5.0};
  CHECK(k::sum(x) == 15.0);
  CHECK(k::centered_dot(x, x, 3.0) == 10.0);
  k::set_active_isa(before);
  CHECK(k::sum(x) == 15.0);
}
