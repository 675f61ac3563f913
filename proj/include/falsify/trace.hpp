#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace falsify {

// Uniformly sampled multi-variable output signal. Sample k of every column
// holds the value at time k*dt; t0 is always 0.
struct Trace {
  double dt = 1.0;
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;  // one per name, equal lengths

  std::size_t samples() const { return columns.empty() ? 0 : columns.front().size(); }
  double duration() const { return samples() <= 1 ? 0.0 : static_cast<double>(samples() - 1) * dt; }

  const std::vector<double>& column(std::string_view name) const {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == name) return columns[i];
    }
    throw std::invalid_argument("trace has no variable named '" + std::string(name) + "'");
  }

  // Enforces the type invariants: dt > 0, equal column lengths >= 1, finite values.
  void validate() const;
};

}  // namespace falsify
