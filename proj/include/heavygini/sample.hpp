#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hg {

struct Provenance {
  std::uint64_t seed = 0;
  std::string source;
};

/// Paired observations (x_i, y_i).
struct PairedSample {
  std::vector<double> xs;
  std::vector<double> ys;
  Provenance meta;

  std::size_t size() const noexcept { return xs.size(); }

  /// Throws DomainError unless both columns have the same length >= 3 and
  /// every value is finite.
  void validate() const;
};

}  // namespace hg
