#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ulab {

/// Coordinates of an element of Z_{m1} x ... x Z_{md}.
struct GroupElement {
  std::vector<std::int64_t> coords;

  friend bool operator==(const GroupElement&, const GroupElement&) = default;
  friend auto operator<=>(const GroupElement&, const GroupElement&) = default;
};

/// Z_{m1} x ... x Z_{md}. Elements are numbered in lexicographic order of
/// their coordinates (last coordinate fastest); that index is the canonical
/// order used for every table and every deterministic reduction.
class FiniteAbelianGroup {
 public:
  /// Trivial group.
  FiniteAbelianGroup() = default;

  const std::vector<std::int64_t>& moduli() const noexcept { return moduli_; }
  std::size_t rank() const noexcept { return moduli_.size(); }
  std::size_t order() const noexcept { return order_; }
  bool is_cyclic() const noexcept { return moduli_.size() == 1; }

  GroupElement zero() const { return GroupElement{std::vector<std::int64_t>(rank(), 0)}; }
  bool contains(const GroupElement& e) const;
  /// Builds an element from arbitrary integers, reducing each coordinate.
  GroupElement reduce(std::vector<std::int64_t> coords) const;

  GroupElement add(const GroupElement& a, const GroupElement& b) const;
  GroupElement negate(const GroupElement& a) const;
  GroupElement scale(const GroupElement& a, std::int64_t n) const;

  std::size_t index_of(const GroupElement& e) const;
  GroupElement element_at(std::size_t index) const;

  std::size_t add_index(std::size_t a, std::size_t b) const;
  /// Index of a + n*b.
  std::size_t add_scaled_index(std::size_t a, std::size_t b, std::int64_t n) const;
  /// translate[x] = index of (x + g), for every x in canonical order.
  std::vector<std::size_t> translation(std::size_t g) const;

  /// "4,2,2" style literal; the empty string is the trivial group.
  std::string literal() const;

  friend bool operator==(const FiniteAbelianGroup& a, const FiniteAbelianGroup& b) {
    return a.moduli_ == b.moduli_;
  }

 private:
  friend FiniteAbelianGroup make_group(const std::vector<std::int64_t>& moduli);
  std::vector<std::int64_t> moduli_;
  std::vector<std::size_t> strides_;
  std::size_t order_ = 1;
};

/// Throws ConfigError for a modulus < 1 or an order above limits().max_group_order.
FiniteAbelianGroup make_group(const std::vector<std::int64_t>& moduli);
/// Parses "12" or "4,2,2"; "" and "1" give the trivial group / Z_1.
FiniteAbelianGroup parse_group(const std::string& literal);

GroupElement add(const FiniteAbelianGroup& group, const GroupElement& a, const GroupElement& b);

/// An enumerated subgroup. indices() is sorted, so elements() is in
/// canonical order.
class Subgroup {
 public:
  const FiniteAbelianGroup& parent() const noexcept { return parent_; }
  const std::vector<GroupElement>& generators() const noexcept { return generators_; }
  const std::vector<std::size_t>& indices() const noexcept { return indices_; }
  std::vector<GroupElement> elements() const;
  std::size_t order() const noexcept { return indices_.size(); }
  bool contains_index(std::size_t i) const { return member_[i]; }
  bool contains(const GroupElement& e) const;
  bool is_subgroup_of(const Subgroup& other) const;
  bool is_full() const noexcept { return order() == parent_.order(); }

  friend bool operator==(const Subgroup& a, const Subgroup& b) {
    return a.parent_ == b.parent_ && a.indices_ == b.indices_;
  }

 private:
  friend Subgroup subgroup_closure(const FiniteAbelianGroup&, const std::vector<GroupElement>&);
  FiniteAbelianGroup parent_;
  std::vector<GroupElement> generators_;
  std::vector<std::size_t> indices_;
  std::vector<bool> member_;
};

Subgroup subgroup_closure(const FiniteAbelianGroup& group,
                          const std::vector<GroupElement>& generators);
Subgroup full_subgroup(const FiniteAbelianGroup& group);
Subgroup trivial_subgroup(const FiniteAbelianGroup& group);

/// Partition of the group into cosets x + H, as element indices. Cells are
/// ordered by their least element and each cell is sorted.
std::vector<std::vector<std::size_t>> cosets(const FiniteAbelianGroup& group, const Subgroup& h);

/// coset_id[x] = position of the coset of x in cosets(group, h).
std::vector<std::size_t> coset_ids(const FiniteAbelianGroup& group, const Subgroup& h);

/// A finitely generated countable abelian group Z^a x Z_{t1} x ...
/// torsion[i] == 0 marks a free coordinate.
struct AmbientGroup {
  std::vector<std::int64_t> torsion;

  std::size_t rank() const noexcept { return torsion.size(); }
  bool is_free() const;
  /// Reduces torsion coordinates; throws ConfigError on an arity mismatch.
  std::vector<std::int64_t> normalize(std::vector<std::int64_t> coords) const;
  /// "Z^2", "F3^4" style token.
  std::string literal() const;

  friend bool operator==(const AmbientGroup&, const AmbientGroup&) = default;
};

/// Accepts "Z", "Z^d", "Fp^d" (p prime) and "Zm^d" (cyclic torsion).
AmbientGroup parse_ambient(const std::string& token);

/// Coordinate i of the ambient group maps to coordinate i of the target,
/// reduced mod the target modulus. Ambient coordinates beyond the target's
/// rank are dropped.
class QuotientMap {
 public:
  QuotientMap(AmbientGroup source, FiniteAbelianGroup target);

  const AmbientGroup& source() const noexcept { return source_; }
  const FiniteAbelianGroup& target() const noexcept { return target_; }

  GroupElement apply(const std::vector<std::int64_t>& ambient_element) const;

 private:
  AmbientGroup source_;
  FiniteAbelianGroup target_;
};

GroupElement quotient_apply(const QuotientMap& q, const std::vector<std::int64_t>& g);

/// Z^d -> (Z_N)^d, the standard family for a free ambient group.
QuotientMap reduction_map(const AmbientGroup& ambient, std::int64_t n);

std::string format_element(const GroupElement& e);

}  // namespace ulab
