#include <algorithm>
#include <cmath>
#include <sstream>

#include "falsify/numfmt.hpp"
#include "falsify/stl.hpp"

namespace falsify::stl {

namespace {

using detail::Node;
using NodePtr = std::shared_ptr<const Node>;

void check_interval(const Interval& w) {
  if (!(w.lo >= 0.0)) throw std::invalid_argument("interval lower bound must be >= 0");
  if (w.bounded() && !(w.lo <= w.hi)) throw std::invalid_argument("interval bounds out of order");
  if (std::isnan(w.lo) || std::isnan(w.hi)) throw std::invalid_argument("interval bound is NaN");
}

NodePtr make(Node n) { return std::make_shared<const Node>(std::move(n)); }

}  // namespace

double Atom::margin(const Trace& trace, std::size_t at) const {
  double g = constant;
  for (const auto& [name, coeff] : coeffs) g += coeff * trace.column(name)[at];
  return g;
}

Formula Formula::atom(Atom a) {
  std::erase_if(a.coeffs, [](const auto& c) { return c.second == 0.0; });
  std::sort(a.coeffs.begin(), a.coeffs.end());
  if (a.coeffs.empty() && a.constant == 0.0)
    throw std::invalid_argument("atom needs at least one coefficient or a nonzero constant");
  for (const auto& [name, coeff] : a.coeffs) {
    if (!std::isfinite(coeff)) throw std::invalid_argument("non-finite coefficient for '" + name + "'");
  }
  if (!std::isfinite(a.constant)) throw std::invalid_argument("non-finite atom constant");
  return Formula(make({.op = Op::Atom, .atom = std::move(a)}));
}

Formula Formula::negation(Formula f) {
  return Formula(make({.op = Op::Not, .left = std::move(f.root_)}));
}

Formula Formula::conjunction(Formula lhs, Formula rhs) {
  return Formula(make({.op = Op::And, .left = std::move(lhs.root_), .right = std::move(rhs.root_)}));
}

Formula Formula::disjunction(Formula lhs, Formula rhs) {
  return Formula(make({.op = Op::Or, .left = std::move(lhs.root_), .right = std::move(rhs.root_)}));
}

Formula Formula::until(Interval window, Formula lhs, Formula rhs) {
  check_interval(window);
  return Formula(make(
      {.op = Op::Until, .window = window, .left = std::move(lhs.root_), .right = std::move(rhs.root_)}));
}

Formula Formula::eventually(Interval window, Formula f) {
  check_interval(window);
  return Formula(make({.op = Op::Eventually, .window = window, .left = std::move(f.root_)}));
}

Formula Formula::always(Interval window, Formula f) {
  check_interval(window);
  return Formula(make({.op = Op::Always, .window = window, .left = std::move(f.root_)}));
}

namespace {

bool equal(const Node& a, const Node& b) {
  if (a.op != b.op) return false;
  switch (a.op) {
    case Op::Atom:
      return a.atom == b.atom;
    case Op::Not:
      return equal(*a.left, *b.left);
    case Op::And:
    case Op::Or:
      return equal(*a.left, *b.left) && equal(*a.right, *b.right);
    case Op::Until:
      return a.window == b.window && equal(*a.left, *b.left) && equal(*a.right, *b.right);
    case Op::Eventually:
    case Op::Always:
      return a.window == b.window && equal(*a.left, *b.left);
  }
  return false;
}

double node_horizon(const Node& n) {
  const double hi = n.window.bounded() ? n.window.hi : 0.0;
  switch (n.op) {
    case Op::Atom:
      return 0.0;
    case Op::Not:
      return node_horizon(*n.left);
    case Op::And:
    case Op::Or:
      return std::max(node_horizon(*n.left), node_horizon(*n.right));
    case Op::Until:
      return hi + std::max(node_horizon(*n.left), node_horizon(*n.right));
    case Op::Eventually:
    case Op::Always:
      return hi + node_horizon(*n.left);
  }
  return 0.0;
}

// Precedence levels for printing: || < && < U < unary.
int prec(Op op) {
  switch (op) {
    case Op::Or: return 1;
    case Op::And: return 2;
    case Op::Until: return 3;
    default: return 4;
  }
}

std::string print_interval(const Interval& w) {
  std::string out = "[" + format_double(w.lo) + ",";
  out += w.bounded() ? format_double(w.hi) : "inf";
  return out + "]";
}

std::string print_atom(const Atom& a) {
  std::string out;
  bool first = true;
  for (const auto& [name, coeff] : a.coeffs) {
    double c = coeff;
    if (first) {
      if (c < 0) { out += "-"; c = -c; }
    } else {
      out += c < 0 ? " - " : " + ";
      c = std::fabs(c);
    }
    if (c != 1.0) out += format_double(c) + "*";
    out += name;
    first = false;
  }
  if (a.constant != 0.0 || first) {
    double c = a.constant;
    if (!first) {
      out += c < 0 ? " - " : " + ";
      c = std::fabs(c);
    } else if (c < 0) {
      out += "-";
      c = -c;
    }
    out += format_double(c);
  }
  return out + (a.strict ? " > 0" : " >= 0");
}

void print(const Node& n, std::string& out) {
  auto child = [&out](const Node& c, int min_prec) {
    const bool parens = prec(c.op) < min_prec;
    if (parens) out += "(";
    print(c, out);
    if (parens) out += ")";
  };
  switch (n.op) {
    case Op::Atom:
      out += print_atom(n.atom);
      return;
    case Op::Not:
      out += "!";
      child(*n.left, 5);  // parenthesize even atoms: !(x > 0)
      return;
    case Op::And:
      child(*n.left, 2);
      out += " && ";
      child(*n.right, 3);
      return;
    case Op::Or:
      child(*n.left, 1);
      out += " || ";
      child(*n.right, 2);
      return;
    case Op::Until:
      child(*n.left, 3);
      out += " U" + print_interval(n.window) + " ";
      child(*n.right, 4);
      return;
    case Op::Eventually:
    case Op::Always:
      out += n.op == Op::Eventually ? "F" : "G";
      if (n.window.lo != 0.0 || n.window.bounded()) out += print_interval(n.window);
      out += "(";
      print(*n.left, out);
      out += ")";
      return;
  }
}

}  // namespace

bool Formula::operator==(const Formula& other) const { return equal(*root_, *other.root_); }

double horizon(const Formula& f) { return node_horizon(f.root()); }

std::string to_string(const Formula& f) {
  std::string out;
  print(f.root(), out);
  return out;
}

ParseError::ParseError(const std::string& msg, int line_, int column_)
    : std::runtime_error(msg + " (line " + std::to_string(line_) + ", column " +
                         std::to_string(column_) + ")"),
      line(line_),
      column(column_) {}

}  // namespace falsify::stl
