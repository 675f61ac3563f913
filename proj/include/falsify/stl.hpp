#pragma once

#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "falsify/exec.hpp"
#include "falsify/trace.hpp"

namespace falsify::stl {

// Upper bound sentinel: the window extends to the end of the trace.
inline constexpr double kHorizon = std::numeric_limits<double>::infinity();

struct Interval {
  double lo = 0.0;
  double hi = kHorizon;

  bool bounded() const { return hi != kHorizon; }
  bool operator==(const Interval&) const = default;
};

// Linear predicate g(y) > 0 (strict) or g(y) >= 0 (nonstrict) with
// g(y) = sum coeff[v] * y_v + constant. Coefficients are kept sorted by
// variable name with exact zeros dropped, so structural equality is canonical.
struct Atom {
  std::vector<std::pair<std::string, double>> coeffs;
  double constant = 0.0;
  bool strict = true;

  double margin(const Trace& trace, std::size_t at) const;
  bool operator==(const Atom&) const = default;
};

enum class Op { Atom, Not, And, Or, Until, Eventually, Always };

class Formula;

namespace detail {
struct Node {
  Op op = Op::Atom;
  stl::Atom atom;          // Op::Atom only
  Interval window;         // temporal operators only
  std::shared_ptr<const Node> left;   // unary child / left operand
  std::shared_ptr<const Node> right;  // And/Or/Until right operand
};
}  // namespace detail

// Immutable STL formula tree; cheap to copy and safe to share across threads.
class Formula {
 public:
  static Formula atom(Atom a);
  static Formula negation(Formula f);
  static Formula conjunction(Formula lhs, Formula rhs);
  static Formula disjunction(Formula lhs, Formula rhs);
  static Formula until(Interval window, Formula lhs, Formula rhs);
  static Formula eventually(Interval window, Formula f);
  static Formula always(Interval window, Formula f);

  const detail::Node& root() const { return *root_; }
  bool operator==(const Formula& other) const;

 private:
  explicit Formula(std::shared_ptr<const detail::Node> root) : root_(std::move(root)) {}
  std::shared_ptr<const detail::Node> root_;
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, int line, int column);
  int line;
  int column;
};

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Textual front end. Grammar (whitespace insignificant):
//   formula := or ;  or := and ('||' and)* ;  and := until ('&&' until)*
//   until   := unary ('U' interval unary)*            (left-associative)
//   unary   := '!' unary | ('G'|'F') [interval] unary | primary
//   primary := '(' or ')' | linexpr ('<'|'<='|'>'|'>=') linexpr
//   linexpr := ['+'|'-'] term (('+'|'-') term)* ; term := NUM ['*' IDENT] | IDENT
//   interval := '[' (NUM|'inf') ',' (NUM|'inf') ']'
// Bare G/F stand for the window [0, inf) truncated to the trace end.
Formula parse_formula(std::string_view text);

// Canonical printer; parse(to_string(f)) == f, value-exact.
std::string to_string(const Formula& f);

// Minimal trace duration (seconds) so every shifted sub-evaluation stays in
// range; unbounded windows contribute 0 (they truncate to the trace end).
double horizon(const Formula& f);

// Robust semantics over the trace's sample grid: sup/inf become max/min over
// the grid times inside each (closed) window. Requires duration >= horizon.
double robustness(const Formula& f, const Trace& trace, Exec exec = Exec::Parallel);

// Boolean semantics on the same grid; differs from sign-of-robustness only
// for nonstrict atoms sitting exactly at 0.
bool boolean_sat(const Formula& f, const Trace& trace, Exec exec = Exec::Parallel);

// Full per-start-index robustness signal of f (entry s = robustness of the
// trace shifted by s samples). Exposed for tests and the kernel benchmark.
std::vector<double> robustness_signal(const Formula& f, const Trace& trace, Exec exec);

}  // namespace falsify::stl
