#include <cmath>
#include <cstdint>
#include <limits>

#include "falsify/stl.hpp"

namespace falsify::stl {

namespace {

using detail::Node;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Grid index range [lo, hi] of a window relative to the base sample; bounds
// are closed and membership uses the grid times k*dt with a small slack
// against dt rounding. hi may exceed the remaining trace; callers clamp.
struct IndexWindow {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
};

IndexWindow index_window(const Interval& w, double dt, std::int64_t last) {
  constexpr double kSlack = 1e-9;
  IndexWindow out;
  out.lo = static_cast<std::int64_t>(std::ceil(w.lo / dt - kSlack));
  out.hi = w.bounded() ? static_cast<std::int64_t>(std::floor(w.hi / dt + kSlack)) : last;
  if (out.lo < 0) out.lo = 0;
  return out;
}

std::vector<double> rob_signal(const Node& node, const Trace& trace, Exec exec) {
  const std::int64_t n = static_cast<std::int64_t>(trace.samples());
  std::vector<double> out(static_cast<std::size_t>(n));

  switch (node.op) {
    case Op::Atom: {
      // Resolve columns once; Atom::margin would redo the name lookup per sample.
      std::vector<const std::vector<double>*> cols;
      cols.reserve(node.atom.coeffs.size());
      for (const auto& [name, coeff] : node.atom.coeffs) cols.push_back(&trace.column(name));
      const double constant = node.atom.constant;
      const auto& coeffs = node.atom.coeffs;
      for_each_index(n, exec, [&](std::int64_t s) {
        double g = constant;
        for (std::size_t i = 0; i < coeffs.size(); ++i)
          g += coeffs[i].second * (*cols[i])[static_cast<std::size_t>(s)];
        out[static_cast<std::size_t>(s)] = g;
      });
      break;
    }
    case Op::Not: {
      std::vector<double> child = rob_signal(*node.left, trace, exec);
      for_each_index(n, exec, [&](std::int64_t s) { out[s] = -child[s]; });
      break;
    }
    case Op::And:
    case Op::Or: {
      std::vector<double> lhs = rob_signal(*node.left, trace, exec);
      std::vector<double> rhs = rob_signal(*node.right, trace, exec);
      const bool is_and = node.op == Op::And;
      for_each_index(n, exec, [&](std::int64_t s) {
        out[s] = is_and ? std::min(lhs[s], rhs[s]) : std::max(lhs[s], rhs[s]);
      });
      break;
    }
    case Op::Eventually:
    case Op::Always: {
      std::vector<double> child = rob_signal(*node.left, trace, exec);
      const IndexWindow w = index_window(node.window, trace.dt, n - 1);
      const bool is_max = node.op == Op::Eventually;
      for_each_index(n, exec, [&](std::int64_t s) {
        const std::int64_t jhi = std::min(s + w.hi, n - 1);
        double acc = is_max ? -kInf : kInf;  // empty window: sup = -inf, inf = +inf
        for (std::int64_t j = s + w.lo; j <= jhi; ++j)
          acc = is_max ? std::max(acc, child[j]) : std::min(acc, child[j]);
        out[s] = acc;
      });
      break;
    }
    case Op::Until: {
      std::vector<double> lhs = rob_signal(*node.left, trace, exec);
      std::vector<double> rhs = rob_signal(*node.right, trace, exec);
      const IndexWindow w = index_window(node.window, trace.dt, n - 1);
      for_each_index(n, exec, [&](std::int64_t s) {
        const std::int64_t jhi = std::min(s + w.hi, n - 1);
        double best = -kInf;
        double lhs_min = kInf;  // running min of lhs over [s, j]
        for (std::int64_t j = s; j <= jhi; ++j) {
          lhs_min = std::min(lhs_min, lhs[j]);
          if (j >= s + w.lo) best = std::max(best, std::min(rhs[j], lhs_min));
        }
        out[s] = best;
      });
      break;
    }
  }
  return out;
}

std::vector<char> sat_signal(const Node& node, const Trace& trace, Exec exec) {
  const std::int64_t n = static_cast<std::int64_t>(trace.samples());
  std::vector<char> out(static_cast<std::size_t>(n));

  switch (node.op) {
    case Op::Atom: {
      std::vector<const std::vector<double>*> cols;
      cols.reserve(node.atom.coeffs.size());
      for (const auto& [name, coeff] : node.atom.coeffs) cols.push_back(&trace.column(name));
      const double constant = node.atom.constant;
      const auto& coeffs = node.atom.coeffs;
      const bool strict = node.atom.strict;
      for_each_index(n, exec, [&](std::int64_t s) {
        double g = constant;
        for (std::size_t i = 0; i < coeffs.size(); ++i)
          g += coeffs[i].second * (*cols[i])[static_cast<std::size_t>(s)];
        out[static_cast<std::size_t>(s)] = strict ? g > 0.0 : g >= 0.0;
      });
      break;
    }
    case Op::Not: {
      std::vector<char> child = sat_signal(*node.left, trace, exec);
      for_each_index(n, exec, [&](std::int64_t s) { out[s] = !child[s]; });
      break;
    }
    case Op::And:
    case Op::Or: {
      std::vector<char> lhs = sat_signal(*node.left, trace, exec);
      std::vector<char> rhs = sat_signal(*node.right, trace, exec);
      const bool is_and = node.op == Op::And;
      for_each_index(n, exec, [&](std::int64_t s) {
        out[s] = is_and ? (lhs[s] && rhs[s]) : (lhs[s] || rhs[s]);
      });
      break;
    }
    case Op::Eventually:
    case Op::Always: {
      std::vector<char> child = sat_signal(*node.left, trace, exec);
      const IndexWindow w = index_window(node.window, trace.dt, n - 1);
      const bool exists = node.op == Op::Eventually;
      for_each_index(n, exec, [&](std::int64_t s) {
        const std::int64_t jhi = std::min(s + w.hi, n - 1);
        char acc = exists ? 0 : 1;  // empty window: exists = false, forall = true
        for (std::int64_t j = s + w.lo; j <= jhi; ++j) {
          if (exists ? child[j] != 0 : child[j] == 0) {
            acc = exists ? 1 : 0;
            break;
          }
        }
        out[s] = acc;
      });
      break;
    }
    case Op::Until: {
      std::vector<char> lhs = sat_signal(*node.left, trace, exec);
      std::vector<char> rhs = sat_signal(*node.right, trace, exec);
      const IndexWindow w = index_window(node.window, trace.dt, n - 1);
      for_each_index(n, exec, [&](std::int64_t s) {
        const std::int64_t jhi = std::min(s + w.hi, n - 1);
        char found = 0;
        bool lhs_all = true;  // lhs holds over [s, j]
        for (std::int64_t j = s; j <= jhi && !found; ++j) {
          lhs_all = lhs_all && lhs[j] != 0;
          if (j >= s + w.lo && rhs[j] != 0 && lhs_all) found = 1;
        }
        out[s] = found;
      });
      break;
    }
  }
  return out;
}

void check_trace(const Formula& f, const Trace& trace) {
  trace.validate();
  const double h = horizon(f);
  if (trace.duration() < h - 1e-9) {
    throw EvalError("trace too short: duration " + std::to_string(trace.duration()) +
                    " s < formula horizon " + std::to_string(h) + " s");
  }
}

}  // namespace

double robustness(const Formula& f, const Trace& trace, Exec exec) {
  check_trace(f, trace);
  return rob_signal(f.root(), trace, exec)[0];
}

bool boolean_sat(const Formula& f, const Trace& trace, Exec exec) {
  check_trace(f, trace);
  return sat_signal(f.root(), trace, exec)[0] != 0;
}

std::vector<double> robustness_signal(const Formula& f, const Trace& trace, Exec exec) {
  check_trace(f, trace);
  return rob_signal(f.root(), trace, exec);
}

}  // namespace falsify::stl
