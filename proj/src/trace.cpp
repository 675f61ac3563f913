#include <cmath>

#include "falsify/trace.hpp"

namespace falsify {

void Trace::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("trace dt must be > 0");
  if (names.size() != columns.size()) throw std::invalid_argument("trace name/column count mismatch");
  if (columns.empty() || columns.front().empty())
    throw std::invalid_argument("trace must have at least one variable and one sample");
  const std::size_t n = columns.front().size();
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].size() != n)
      throw std::invalid_argument("trace column '" + names[i] + "' has mismatched length");
    for (double v : columns[i]) {
      if (!std::isfinite(v))
        throw std::invalid_argument("trace column '" + names[i] + "' contains a non-finite value");
    }
  }
}

}  // namespace falsify
