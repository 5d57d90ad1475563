#pragma once

// Data-parallel reductions behind the empirical estimators. Every kernel has a
// scalar reference implementation and, on x86-64, an AVX2+FMA variant picked
// at runtime from CPUID. Results of the two agree to rounding, not bitwise;
// within one process the choice is fixed, so repeated calls are reproducible.

#include <cstddef>
#include <span>
#include <string_view>

namespace hg::kernels {

enum class Isa { scalar, avx2 };

struct CenteredMoments {
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
};

struct KernelTable {
  double (*sum)(const double*, std::size_t);
  double (*centered_dot)(const double*, const double*, std::size_t, double);
  CenteredMoments (*centered_moments)(const double*, const double*, std::size_t, double, double);
  double (*weighted_sum)(const double*, const double*, std::size_t);
  double (*weighted_centered_dot)(const double*, const double*, const double*, std::size_t,
                                  double);
};

/// Kernel table for a specific ISA; throws UnsupportedError if the CPU or
/// build lacks it.
const KernelTable& table_for(Isa isa);

bool isa_available(Isa isa);

/// ISA used by the free functions below. Defaults to the widest available;
/// the environment variable HEAVYGINI_ISA=scalar forces the reference path.
Isa active_isa();
void set_active_isa(Isa isa);
std::string_view isa_name(Isa isa);

/// Σ x_i
double sum(std::span<const double> x);

/// Σ (x_i − center) · w_i
double centered_dot(std::span<const double> x, std::span<const double> w, double center);

/// Σ (x−mx)², Σ (y−my)², Σ (x−mx)(y−my)
CenteredMoments centered_moments(std::span<const double> x, std::span<const double> y, double mx,
                                 double my);

/// Σ c_i x_i
double weighted_sum(std::span<const double> x, std::span<const double> c);

/// Σ c_i (x_i − center) w_i
double weighted_centered_dot(std::span<const double> x, std::span<const double> c,
                             std::span<const double> w, double center);

namespace scalar {
double sum(const double* x, std::size_t n);
double centered_dot(const double* x, const double* w, std::size_t n, double center);
CenteredMoments centered_moments(const double* x, const double* y, std::size_t n, double mx,
                                 double my);
double weighted_sum(const double* x, const double* c, std::size_t n);
double weighted_centered_dot(const double* x, const double* c, const double* w, std::size_t n,
                             double center);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define HEAVYGINI_HAVE_AVX2_KERNELS 1
namespace avx2 {
double sum(const double* x, std::size_t n);
double centered_dot(const double* x, const double* w, std::size_t n, double center);
CenteredMoments centered_moments(const double* x, const double* y, std::size_t n, double mx,
                                 double my);
double weighted_sum(const double* x, const double* c, std::size_t n);
double weighted_centered_dot(const double* x, const double* c, const double* w, std::size_t n,
                             double center);
}  // namespace avx2
#endif

}  // namespace hg::kernels
