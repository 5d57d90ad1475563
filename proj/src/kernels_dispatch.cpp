#include <atomic>
#include <cstdlib>
#include <string>

#include "heavygini/error.hpp"
#include "heavygini/kernels.hpp"

namespace hg::kernels {

namespace {

constexpr KernelTable kScalarTable{scalar::sum, scalar::centered_dot, scalar::centered_moments,
                                   scalar::weighted_sum, scalar::weighted_centered_dot};

#ifdef HEAVYGINI_HAVE_AVX2_KERNELS
constexpr KernelTable kAvx2Table{avx2::sum, avx2::centered_dot, avx2::centered_moments,
                                 avx2::weighted_sum, avx2::weighted_centered_dot};
#endif

Isa detect_default() {
  if (const char* env = std::getenv("HEAVYGINI_ISA")) {
    if (std::string(env) == "scalar") return Isa::scalar;
  }
  return isa_available(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& active_slot() {
  static std::atomic<Isa> slot{detect_default()};
  return slot;
}

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) throw DomainError("kernel inputs must have equal length");
}

}  // namespace

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#ifdef HEAVYGINI_HAVE_AVX2_KERNELS
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table_for(Isa isa) {
  if (!isa_available(isa)) {
    throw UnsupportedError(std::string("kernel ISA not available: ") + std::string(isa_name(isa)));
  }
#ifdef HEAVYGINI_HAVE_AVX2_KERNELS
  if (isa == Isa::avx2) return kAvx2Table;
#endif
  return kScalarTable;
}

Isa active_isa() { return active_slot().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  table_for(isa);  // validates availability
  active_slot().store(isa, std::memory_order_relaxed);
}

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

double sum(std::span<const double> x) { return table_for(active_isa()).sum(x.data(), x.size()); }

double centered_dot(std::span<const double> x, std::span<const double> w, double center) {
  check_lengths(x.size(), w.size());
  return table_for(active_isa()).centered_dot(x.data(), w.data(), x.size(), center);
}

CenteredMoments centered_moments(std::span<const double> x, std::span<const double> y, double mx,
                                 double my) {
  check_lengths(x.size(), y.size());
  return table_for(active_isa()).centered_moments(x.data(), y.data(), x.size(), mx, my);
}

double weighted_sum(std::span<const double> x, std::span<const double> c) {
  check_lengths(x.size(), c.size());
  return table_for(active_isa()).weighted_sum(x.data(), c.data(), x.size());
}

double weighted_centered_dot(std::span<const double> x, std::span<const double> c,
                             std::span<const double> w, double center) {
  check_lengths(x.size(), c.size());
  check_lengths(x.size(), w.size());
  return table_for(active_isa()).weighted_centered_dot(x.data(), c.data(), w.data(), x.size(),
                                                       center);
}

}  // namespace hg::kernels
