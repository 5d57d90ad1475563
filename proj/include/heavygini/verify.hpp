#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hg::verify {

enum class Suite { specfun, distributions, gini, wipm, all };

/// "specfun", "distributions", "gini", "wipm" or "all"; throws DomainError otherwise.
Suite parse_suite(std::string_view name);
std::string_view suite_name(Suite s);

struct CheckResult {
  std::string suite;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs the self-checks of one suite (or all of them) in a fixed order.
/// Stochastic checks draw from streams derived from `seed`.
std::vector<CheckResult> run(Suite s, std::uint64_t seed = 42);

}  // namespace hg::verify
