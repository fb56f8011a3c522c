#include "ulab/group.hpp"

#include "ulab/errors.hpp"
#include "ulab/limits.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace ulab {
namespace {

std::int64_t reduce_mod(std::int64_t x, std::int64_t m) {
  const std::int64_t r = x % m;
  return r < 0 ? r + m : r;
}

std::vector<std::int64_t> parse_int_list(const std::string& text, char sep) {
  std::vector<std::int64_t> out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception&) {
      throw ConfigError("malformed integer '" + item + "' in '" + text + "'");
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used != item.size()) throw ConfigError("malformed integer '" + item + "' in '" + text + "'");
    out.push_back(v);
  }
  return out;
}

bool is_prime(std::int64_t p) {
  if (p < 2) return false;
  for (std::int64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

}  // namespace

FiniteAbelianGroup make_group(const std::vector<std::int64_t>& moduli) {
  FiniteAbelianGroup g;
  std::uint64_t order = 1;
  for (auto m : moduli) {
    if (m < 1) throw ConfigError("group modulus must be >= 1, got " + std::to_string(m));
    if (order > limits().max_group_order / static_cast<std::uint64_t>(m))
      throw ConfigError("group order exceeds the configured maximum of " +
                        std::to_string(limits().max_group_order));
    order *= static_cast<std::uint64_t>(m);
  }
  if (order > limits().max_group_order)
    throw ConfigError("group order exceeds the configured maximum of " +
                      std::to_string(limits().max_group_order));
  g.moduli_ = moduli;
  g.order_ = static_cast<std::size_t>(order);
  g.strides_.assign(moduli.size(), 1);
  for (std::size_t i = moduli.size(); i-- > 1;)
    g.strides_[i - 1] = g.strides_[i] * static_cast<std::size_t>(moduli[i]);
  return g;
}

FiniteAbelianGroup parse_group(const std::string& literal) {
  return make_group(parse_int_list(literal, ','));
}

bool FiniteAbelianGroup::contains(const GroupElement& e) const {
  if (e.coords.size() != rank()) return false;
  for (std::size_t i = 0; i < rank(); ++i)
    if (e.coords[i] < 0 || e.coords[i] >= moduli_[i]) return false;
  return true;
}

GroupElement FiniteAbelianGroup::reduce(std::vector<std::int64_t> coords) const {
  if (coords.size() != rank())
    throw ConfigError("element has " + std::to_string(coords.size()) +
                      " coordinates, group has rank " + std::to_string(rank()));
  for (std::size_t i = 0; i < rank(); ++i) coords[i] = reduce_mod(coords[i], moduli_[i]);
  return GroupElement{std::move(coords)};
}

GroupElement FiniteAbelianGroup::add(const GroupElement& a, const GroupElement& b) const {
  if (!contains(a) || !contains(b)) throw ConfigError("element does not belong to group " + literal());
  GroupElement out = a;
  for (std::size_t i = 0; i < rank(); ++i) {
    out.coords[i] += b.coords[i];
    if (out.coords[i] >= moduli_[i]) out.coords[i] -= moduli_[i];
  }
  return out;
}

GroupElement FiniteAbelianGroup::negate(const GroupElement& a) const {
  if (!contains(a)) throw ConfigError("element does not belong to group " + literal());
  GroupElement out = a;
  for (std::size_t i = 0; i < rank(); ++i) out.coords[i] = reduce_mod(-a.coords[i], moduli_[i]);
  return out;
}

GroupElement FiniteAbelianGroup::scale(const GroupElement& a, std::int64_t n) const {
  if (!contains(a)) throw ConfigError("element does not belong to group " + literal());
  GroupElement out = a;
  for (std::size_t i = 0; i < rank(); ++i) {
    const auto m = static_cast<__int128>(moduli_[i]);
    auto v = (static_cast<__int128>(a.coords[i]) * n) % m;
    if (v < 0) v += m;
    out.coords[i] = static_cast<std::int64_t>(v);
  }
  return out;
}

std::size_t FiniteAbelianGroup::index_of(const GroupElement& e) const {
  if (!contains(e)) throw ConfigError("element does not belong to group " + literal());
  std::size_t idx = 0;
  for (std::size_t i = 0; i < rank(); ++i) idx += static_cast<std::size_t>(e.coords[i]) * strides_[i];
  return idx;
}

GroupElement FiniteAbelianGroup::element_at(std::size_t index) const {
  if (index >= order_) throw ConfigError("element index out of range");
  GroupElement e{std::vector<std::int64_t>(rank())};
  for (std::size_t i = 0; i < rank(); ++i) {
    e.coords[i] = static_cast<std::int64_t>(index / strides_[i]);
    index %= strides_[i];
  }
  return e;
}

std::size_t FiniteAbelianGroup::add_index(std::size_t a, std::size_t b) const {
  std::size_t out = 0;
  for (std::size_t i = 0; i < rank(); ++i) {
    const auto m = static_cast<std::size_t>(moduli_[i]);
    const std::size_t ca = a / strides_[i], cb = b / strides_[i];
    a %= strides_[i];
    b %= strides_[i];
    std::size_t c = ca + cb;
    if (c >= m) c -= m;
    out += c * strides_[i];
  }
  return out;
}

std::size_t FiniteAbelianGroup::add_scaled_index(std::size_t a, std::size_t b, std::int64_t n) const {
  std::size_t out = 0;
  for (std::size_t i = 0; i < rank(); ++i) {
    const auto m = static_cast<__int128>(moduli_[i]);
    const auto ca = static_cast<__int128>(a / strides_[i]);
    const auto cb = static_cast<__int128>(b / strides_[i]);
    a %= strides_[i];
    b %= strides_[i];
    auto c = (ca + cb * n) % m;
    if (c < 0) c += m;
    out += static_cast<std::size_t>(c) * strides_[i];
  }
  return out;
}

std::vector<std::size_t> FiniteAbelianGroup::translation(std::size_t g) const {
  std::vector<std::size_t> out(order_);
  if (rank() == 1) {
    const std::size_t m = order_;
    for (std::size_t x = 0; x < m; ++x) {
      const std::size_t y = x + g;
      out[x] = y >= m ? y - m : y;
    }
    return out;
  }
  // contrib[i][c] = ((c + g_i) mod m_i) * stride_i; odometer over x.
  const GroupElement ge = element_at(g);
  std::vector<std::vector<std::size_t>> contrib(rank());
  for (std::size_t i = 0; i < rank(); ++i) {
    const auto m = moduli_[i];
    contrib[i].resize(static_cast<std::size_t>(m));
    for (std::int64_t c = 0; c < m; ++c)
      contrib[i][static_cast<std::size_t>(c)] =
          static_cast<std::size_t>(reduce_mod(c + ge.coords[i], m)) * strides_[i];
  }
  std::vector<std::size_t> x(rank(), 0);
  for (std::size_t idx = 0; idx < order_; ++idx) {
    std::size_t target = 0;
    for (std::size_t i = 0; i < rank(); ++i) target += contrib[i][x[i]];
    out[idx] = target;
    for (std::size_t i = rank(); i-- > 0;) {
      if (++x[i] < static_cast<std::size_t>(moduli_[i])) break;
      x[i] = 0;
    }
  }
  return out;
}

std::string FiniteAbelianGroup::literal() const {
  std::string out;
  for (std::size_t i = 0; i < moduli_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(moduli_[i]);
  }
  return out;
}

GroupElement add(const FiniteAbelianGroup& group, const GroupElement& a, const GroupElement& b) {
  return group.add(a, b);
}

std::vector<GroupElement> Subgroup::elements() const {
  std::vector<GroupElement> out;
  out.reserve(indices_.size());
  for (auto i : indices_) out.push_back(parent_.element_at(i));
  return out;
}

bool Subgroup::contains(const GroupElement& e) const {
  return parent_.contains(e) && member_[parent_.index_of(e)];
}

bool Subgroup::is_subgroup_of(const Subgroup& other) const {
  if (!(parent_ == other.parent_)) return false;
  return std::all_of(indices_.begin(), indices_.end(),
                     [&](std::size_t i) { return other.member_[i]; });
}

Subgroup subgroup_closure(const FiniteAbelianGroup& group, const std::vector<GroupElement>& generators) {
  std::vector<std::size_t> gens;
  for (const auto& g : generators) {
    if (!group.contains(g))
      throw ConfigError("generator " + format_element(g) + " does not belong to group " + group.literal());
    gens.push_back(group.index_of(g));
  }
  Subgroup h;
  h.parent_ = group;
  h.generators_ = generators;
  h.member_.assign(group.order(), false);
  std::deque<std::size_t> frontier{0};
  h.member_[0] = true;
  while (!frontier.empty()) {
    const std::size_t x = frontier.front();
    frontier.pop_front();
    h.indices_.push_back(x);
    for (auto g : gens) {
      const std::size_t y = group.add_index(x, g);
      if (!h.member_[y]) {
        h.member_[y] = true;
        frontier.push_back(y);
      }
    }
  }
  std::sort(h.indices_.begin(), h.indices_.end());
  return h;
}

Subgroup full_subgroup(const FiniteAbelianGroup& group) {
  std::vector<GroupElement> gens;
  for (std::size_t i = 0; i < group.rank(); ++i) {
    GroupElement e = group.zero();
    if (group.moduli()[i] > 1) {
      e.coords[i] = 1;
      gens.push_back(e);
    }
  }
  return subgroup_closure(group, gens);
}

Subgroup trivial_subgroup(const FiniteAbelianGroup& group) { return subgroup_closure(group, {}); }

std::vector<std::size_t> coset_ids(const FiniteAbelianGroup& group, const Subgroup& h) {
  if (!(h.parent() == group)) throw ConfigError("subgroup does not belong to group " + group.literal());
  constexpr auto kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> id(group.order(), kUnset);
  std::size_t next = 0;
  for (std::size_t x = 0; x < group.order(); ++x) {
    if (id[x] != kUnset) continue;
    for (auto hi : h.indices()) id[group.add_index(x, hi)] = next;
    ++next;
  }
  return id;
}

std::vector<std::vector<std::size_t>> cosets(const FiniteAbelianGroup& group, const Subgroup& h) {
  const auto id = coset_ids(group, h);
  std::vector<std::vector<std::size_t>> cells(group.order() / h.order());
  for (std::size_t x = 0; x < group.order(); ++x) cells[id[x]].push_back(x);
  return cells;
}

bool AmbientGroup::is_free() const {
  return std::all_of(torsion.begin(), torsion.end(), [](auto t) { return t == 0; });
}

std::vector<std::int64_t> AmbientGroup::normalize(std::vector<std::int64_t> coords) const {
  if (coords.size() != rank())
    throw ConfigError("ambient element has " + std::to_string(coords.size()) +
                      " coordinates, ambient group " + literal() + " has rank " + std::to_string(rank()));
  for (std::size_t i = 0; i < rank(); ++i)
    if (torsion[i] != 0) coords[i] = reduce_mod(coords[i], torsion[i]);
  return coords;
}

std::string AmbientGroup::literal() const {
  std::string out;
  std::size_t i = 0;
  while (i < torsion.size()) {
    std::size_t j = i;
    while (j < torsion.size() && torsion[j] == torsion[i]) ++j;
    if (!out.empty()) out += 'x';
    const auto t = torsion[i];
    out += t == 0 ? "Z" : (is_prime(t) ? "F" : "Z") + std::to_string(t);
    out += "^" + std::to_string(j - i);
    i = j;
  }
  return out.empty() ? "Z^0" : out;
}

AmbientGroup parse_ambient(const std::string& token) {
  AmbientGroup g;
  std::stringstream ss(token);
  std::string part;
  bool any = false;
  while (std::getline(ss, part, 'x')) {
    any = true;
    if (part.empty()) throw ConfigError("malformed ambient group '" + token + "'");
    const char kind = part[0];
    if (kind != 'Z' && kind != 'F') throw ConfigError("malformed ambient group '" + token + "'");
    const auto caret = part.find('^');
    const std::string mod = part.substr(1, caret == std::string::npos ? std::string::npos : caret - 1);
    std::int64_t dim = 1;
    if (caret != std::string::npos) {
      auto v = parse_int_list(part.substr(caret + 1), ',');
      if (v.size() != 1 || v[0] < 0) throw ConfigError("malformed ambient rank in '" + token + "'");
      dim = v[0];
    }
    std::int64_t t = 0;
    if (!mod.empty()) {
      auto v = parse_int_list(mod, ',');
      if (v.size() != 1 || v[0] < 1) throw ConfigError("malformed torsion in '" + token + "'");
      t = v[0];
      if (kind == 'F' && !is_prime(t)) throw ConfigError("F" + mod + " needs a prime modulus");
    } else if (kind == 'F') {
      throw ConfigError("F needs a prime modulus, e.g. F3^4");
    }
    g.torsion.insert(g.torsion.end(), static_cast<std::size_t>(dim), t);
  }
  if (!any) throw ConfigError("empty ambient group token");
  return g;
}

QuotientMap::QuotientMap(AmbientGroup source, FiniteAbelianGroup target)
    : source_(std::move(source)), target_(std::move(target)) {
  if (target_.rank() > source_.rank())
    throw ConfigError("quotient target " + target_.literal() + " has higher rank than ambient " +
                      source_.literal());
  for (std::size_t i = 0; i < target_.rank(); ++i) {
    const auto t = source_.torsion[i];
    if (t != 0 && t % target_.moduli()[i] != 0)
      throw ConfigError("coordinate reduction Z_" + std::to_string(t) + " -> Z_" +
                        std::to_string(target_.moduli()[i]) + " is not a homomorphism");
  }
}

GroupElement QuotientMap::apply(const std::vector<std::int64_t>& ambient_element) const {
  auto c = source_.normalize(ambient_element);
  c.resize(target_.rank());
  return target_.reduce(std::move(c));
}

GroupElement quotient_apply(const QuotientMap& q, const std::vector<std::int64_t>& g) { return q.apply(g); }

QuotientMap reduction_map(const AmbientGroup& ambient, std::int64_t n) {
  return QuotientMap(ambient, make_group(std::vector<std::int64_t>(ambient.rank(), n)));
}

std::string format_element(const GroupElement& e) {
  std::string out = "(";
  for (std::size_t i = 0; i < e.coords.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(e.coords[i]);
  }
  return out + ")";
}

}  // namespace ulab
