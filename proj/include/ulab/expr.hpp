#pragma once

#include "ulab/function.hpp"
#include "ulab/group.hpp"
#include "ulab/numeric.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ulab {

/// Free syntax for the function algebra generated by a base function c,
/// the constant 1, sums, products, shifts by ambient elements and rational
/// scalings. Immutable; copies share structure. Equality is literal tree
/// equality, no normalization.
class Expr {
 public:
  enum class Kind { Const, One, Sum, Product, Shift, Scale };

  static Expr constant();
  static Expr one();
  static Expr sum(Expr left, Expr right);
  static Expr product(Expr left, Expr right);
  /// Throws ConfigError if h's arity disagrees with shifts already in body.
  static Expr shift(std::vector<std::int64_t> h, Expr body);
  static Expr scale(Rational q, Expr body);

  Kind kind() const noexcept;
  const Expr& left() const;
  const Expr& right() const;
  const Expr& body() const;
  const std::vector<std::int64_t>& shift_element() const;
  const Rational& scalar() const;

  /// Arity of the ambient elements carried by shifts, if any shift occurs.
  std::optional<std::size_t> ambient_rank() const noexcept;
  std::size_t node_count() const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Grammar: c | 1 | (E + E) | (E * E) | T[h1,...,hd] E | p/q E.
/// When ambient_rank is given, every shift must have that arity.
Expr parse_expr(const std::string& text, std::optional<std::size_t> ambient_rank = std::nullopt);
std::string format_expr(const Expr& e);

/// Tagged JSON AST, e.g. {"op":"shift","h":[1],"body":{"op":"const"}}.
std::string expr_to_json(const Expr& e);
Expr expr_from_json(const std::string& text);

/// Structural bound: 1 for c and 1, additive over sums, multiplicative over
/// products, |q| times the body for scalings, unchanged by shifts.
Rational sup_bound(const Expr& e);

/// Evaluates e at f, pushing each shift element through q.
/// Requires f.bound() <= 1 and f.group() == q.target().
template <class T>
BasicTable<T> evaluate(const Expr& e, const BasicTable<T>& f, const QuotientMap& q);

extern template BasicTable<double> evaluate(const Expr&, const BasicTable<double>&, const QuotientMap&);
extern template BasicTable<Rational> evaluate(const Expr&, const BasicTable<Rational>&, const QuotientMap&);

/// Random expression of depth at most max_depth; shift coordinates in
/// [-shift_range, shift_range], scalars p/q with |p| <= 3, 1 <= q <= 4.
Expr random_expr(CounterRng& rng, int max_depth, std::size_t ambient_rank, std::int64_t shift_range = 8);

}  // namespace ulab
