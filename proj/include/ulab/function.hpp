#pragma once

#include "ulab/errors.hpp"
#include "ulab/group.hpp"
#include "ulab/numeric.hpp"

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace ulab {

/// Largest group order for which exact rational tables are allowed.
inline constexpr std::size_t kExactMaxOrder = 64;

/// A bounded function on a finite abelian group under counting measure.
/// values()[i] is the value at group().element_at(i); bound() is a
/// certified upper bound on every |value|.
template <class T>
class BasicTable {
 public:
  struct Unchecked {};

  BasicTable(FiniteAbelianGroup group, std::vector<T> values, T bound)
      : BasicTable(Unchecked{}, std::move(group), std::move(values), std::move(bound)) {
    if (values_.size() != group_.order())
      throw ConfigError("function has " + std::to_string(values_.size()) + " values, group " +
                        group_.literal() + " has order " + std::to_string(group_.order()));
    if (!(bound_ >= T(0))) throw ConfigError("function bound must be >= 0");
    for (const T& v : values_) {
      if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(v)) throw ConfigError("function values must be finite");
      }
      if (abs_value(v) > bound_) throw ConfigError("function value exceeds its declared bound");
    }
  }

  /// Skips validation; callers guarantee the invariants.
  BasicTable(Unchecked, FiniteAbelianGroup group, std::vector<T> values, T bound)
      : group_(std::move(group)), values_(std::move(values)), bound_(std::move(bound)) {}

  const FiniteAbelianGroup& group() const noexcept { return group_; }
  const std::vector<T>& values() const& noexcept { return values_; }
  std::vector<T> values() && { return std::move(values_); }
  const T& bound() const noexcept { return bound_; }
  std::size_t size() const noexcept { return values_.size(); }
  const T& operator[](std::size_t i) const { return values_[i]; }
  const T& at(const GroupElement& e) const { return values_[group_.index_of(e)]; }

  static T abs_value(const T& v) { return v < T(0) ? T(-v) : v; }

 private:
  FiniteAbelianGroup group_;
  std::vector<T> values_;
  T bound_;
};

using FunctionTable = BasicTable<double>;
using ExactTable = BasicTable<Rational>;

/// Bound is 1 when every |value| <= 1, otherwise the largest |value|.
FunctionTable make_table(const FiniteAbelianGroup& group, std::vector<double> values);
FunctionTable constant_table(const FiniteAbelianGroup& group, double c);
/// Exact copy of a double table; throws ConfigError above kExactMaxOrder.
ExactTable to_exact(const FunctionTable& f);
FunctionTable to_double(const ExactTable& f);

namespace detail {
template <class T>
void require_same_group(const BasicTable<T>& f, const BasicTable<T>& g) {
  if (!(f.group() == g.group()))
    throw ConfigError("functions live on different groups (" + f.group().literal() + " vs " +
                      g.group().literal() + ")");
}
template <class T>
T from_rational(const Rational& q) {
  if constexpr (std::is_same_v<T, Rational>) return q;
  else return to_double(q);
}
}  // namespace detail

/// result[x] = f[x + g], by element index.
template <class T>
BasicTable<T> shift_index(const BasicTable<T>& f, std::size_t g) {
  const auto tr = f.group().translation(g);
  std::vector<T> out(f.size());
  for (std::size_t x = 0; x < f.size(); ++x) out[x] = f[tr[x]];
  return BasicTable<T>(typename BasicTable<T>::Unchecked{}, f.group(), std::move(out), f.bound());
}

template <class T>
BasicTable<T> shift(const BasicTable<T>& f, const GroupElement& g) {
  if (!f.group().contains(g))
    throw ConfigError("shift " + format_element(g) + " does not belong to group " + f.group().literal());
  return shift_index(f, f.group().index_of(g));
}

template <class T>
T mean(const BasicTable<T>& f) {
  return pairwise_mean(f.values());
}

/// result[x] = average of f over the coset x + H. Each coset average is
/// summed once in canonical order, so the result is exactly H-invariant.
template <class T>
BasicTable<T> coset_average(const BasicTable<T>& f, const Subgroup& h) {
  if (!(h.parent() == f.group())) throw ConfigError("subgroup does not belong to the function's group");
  const auto cells = cosets(f.group(), h);
  std::vector<T> out(f.size());
  std::vector<T> buf;
  for (const auto& cell : cells) {
    buf.clear();
    for (auto x : cell) buf.push_back(f[x]);
    const T avg = pairwise_mean(buf);
    for (auto x : cell) out[x] = avg;
  }
  return BasicTable<T>(typename BasicTable<T>::Unchecked{}, f.group(), std::move(out), f.bound());
}

template <class T>
BasicTable<T> pointwise_sum(const BasicTable<T>& f, const BasicTable<T>& g) {
  detail::require_same_group(f, g);
  std::vector<T> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i] + g[i];
  return BasicTable<T>(typename BasicTable<T>::Unchecked{}, f.group(), std::move(out), T(f.bound() + g.bound()));
}

template <class T>
BasicTable<T> pointwise_product(const BasicTable<T>& f, const BasicTable<T>& g) {
  detail::require_same_group(f, g);
  std::vector<T> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i] * g[i];
  return BasicTable<T>(typename BasicTable<T>::Unchecked{}, f.group(), std::move(out), T(f.bound() * g.bound()));
}

template <class T>
BasicTable<T> pointwise_scale(const BasicTable<T>& f, const Rational& q) {
  const T s = detail::from_rational<T>(q);
  const T abs_s = BasicTable<T>::abs_value(s);
  std::vector<T> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = s * f[i];
  return BasicTable<T>(typename BasicTable<T>::Unchecked{}, f.group(), std::move(out), T(abs_s * f.bound()));
}

/// Function JSON format: {"group":[m1,...], "values":[...], "bound":b}.
std::string function_to_json(const FunctionTable& f);
FunctionTable function_from_json(const std::string& text);
/// One row per element: coordinates then value.
std::string function_to_csv(const FunctionTable& f);

}  // namespace ulab
