#include "ulab/gowers.hpp"

#include "ulab/errors.hpp"
#include "ulab/limits.hpp"
#include "ulab/parallel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <optional>

namespace ulab {
namespace {

void check_request(const FiniteAbelianGroup& group, const Subgroup& shifts, int k) {
  if (k < 0 || k > limits().max_k)
    throw ConfigError("k must lie in [0, " + std::to_string(limits().max_k) + "], got " + std::to_string(k));
  if (!(shifts.parent() == group)) throw ConfigError("shift subgroup does not belong to the function's group");
}

void check_budget(double cost, const char* what) {
  if (cost > limits().op_budget)
    throw BudgetError(std::string(what) + " needs ~" + format_double(cost) +
                      " operations, above the budget of " + format_double(limits().op_budget));
}

/// Compensated summation for double, plain for exact types.
template <class T>
class Accumulator {
 public:
  void add(const T& x) { sum_ += x; }
  T value() const { return sum_; }

 private:
  T sum_ = T(0);
};

template <>
class Accumulator<double> {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) comp_ += (sum_ - t) + x;
    else comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

template <class T>
T int_as(std::size_t n) {
  return T(static_cast<long long>(n));
}

/// Recursive derivative engine over raw value vectors.
template <class T>
class FastEngine {
 public:
  FastEngine(const FiniteAbelianGroup& group, const Subgroup& shifts)
      : group_(group), shifts_(shifts), cells_(cosets(group, shifts)) {
    constexpr double kCacheEntries = 1 << 22;
    if (static_cast<double>(shifts.order()) * static_cast<double>(group.order()) <= kCacheEntries) {
      for (auto h : shifts.indices()) translations_.push_back(group.translation(h));
    }
  }

  /// Average of f * T_h f over the group, for the j-th element h of `over`.
  T power(const std::vector<T>& f, int k, bool top_level) const {
    if (k == 0) return pairwise_mean(f);
    if (k == 1) return base(f);
    return average_over(shifts_, f, k - 1, top_level);
  }

  /// E_{h in over} power(f * T_h f, inner_k).
  T average_over(const Subgroup& over, const std::vector<T>& f, int inner_k, bool parallel) const {
    auto term = [&](std::size_t j) {
      const std::size_t h = over.indices()[j];
      std::vector<T> d(f.size());
      const std::vector<std::size_t>* tr = cached(over, j);
      if (tr) {
        for (std::size_t x = 0; x < f.size(); ++x) d[x] = f[x] * f[(*tr)[x]];
      } else {
        const auto local = group_.translation(h);
        for (std::size_t x = 0; x < f.size(); ++x) d[x] = f[x] * f[local[x]];
      }
      return power(d, inner_k, false);
    };
    std::vector<T> terms;
    if (parallel) {
      terms = parallel_map(over.order(), term);
    } else {
      terms.reserve(over.order());
      for (std::size_t j = 0; j < over.order(); ++j) terms.push_back(term(j));
    }
    return pairwise_mean(terms);
  }

 private:
  T base(const std::vector<T>& f) const {
    std::vector<T> squares;
    squares.reserve(cells_.size());
    std::vector<T> buf;
    for (const auto& cell : cells_) {
      buf.clear();
      for (auto x : cell) buf.push_back(f[x]);
      const T avg = pairwise_mean(buf);
      squares.push_back(avg * avg);
    }
    return pairwise_mean(squares);
  }

  const std::vector<std::size_t>* cached(const Subgroup& over, std::size_t j) const {
    if (translations_.empty() || !(&over == &shifts_)) return nullptr;
    return &translations_[j];
  }

  const FiniteAbelianGroup& group_;
  const Subgroup& shifts_;
  std::vector<std::vector<std::size_t>> cells_;
  std::vector<std::vector<std::size_t>> translations_;
};

}  // namespace

std::string engine_name(Engine e) {
  switch (e) {
    case Engine::Naive: return "naive";
    case Engine::Fast: return "fast";
    case Engine::Fourier: return "fourier";
  }
  return "fast";
}

Engine parse_engine(const std::string& name) {
  if (name == "naive") return Engine::Naive;
  if (name == "fast") return Engine::Fast;
  if (name == "fourier") return Engine::Fourier;
  throw ConfigError("unknown engine '" + name + "' (expected naive, fast or fourier)");
}

double naive_cost(std::size_t order, std::size_t shifts, int k) {
  return static_cast<double>(order) * std::pow(static_cast<double>(shifts), k) * std::ldexp(1.0, k);
}

double fast_cost(std::size_t order, std::size_t shifts, int k) {
  return static_cast<double>(order) * std::pow(static_cast<double>(shifts), std::max(k - 1, 0));
}

template <class T>
T gowers_power_naive(const BasicTable<T>& f, const Subgroup& shifts, int k) {
  const auto& group = f.group();
  check_request(group, shifts, k);
  check_budget(naive_cost(group.order(), shifts.order(), k), "naive norm evaluation");
  if (k == 0) return mean(f);

  const std::size_t corners = std::size_t{1} << k;
  const auto& kidx = shifts.indices();
  std::vector<std::size_t> choice(static_cast<std::size_t>(k), 0);
  std::vector<std::size_t> offset(corners, 0);
  std::vector<T> row(group.order());
  Accumulator<T> total;
  for (;;) {
    // offset[w] = sum of the chosen directions selected by the bits of w.
    for (std::size_t w = 1; w < corners; ++w) {
      const int top = std::bit_width(w) - 1;
      offset[w] = group.add_index(offset[w ^ (std::size_t{1} << top)], kidx[choice[static_cast<std::size_t>(top)]]);
    }
    for (std::size_t x = 0; x < group.order(); ++x) {
      T prod = f[x];
      for (std::size_t w = 1; w < corners; ++w) prod *= f[group.add_index(x, offset[w])];
      row[x] = prod;
    }
    total.add(pairwise_sum(std::span<const T>(row)));
    std::size_t i = 0;
    while (i < choice.size() && ++choice[i] == kidx.size()) choice[i++] = 0;
    if (i == choice.size()) break;
  }
  T count = int_as<T>(group.order());
  for (int i = 0; i < k; ++i) count *= int_as<T>(kidx.size());
  return total.value() / count;
}

template <class T>
T gowers_power(const BasicTable<T>& f, const Subgroup& shifts, int k) {
  check_request(f.group(), shifts, k);
  check_budget(fast_cost(f.group().order(), shifts.order(), k), "norm evaluation");
  FastEngine<T> engine(f.group(), shifts);
  return engine.power(f.values(), k, true);
}

template <class T>
T relative_gowers_power(const BasicTable<T>& f, const Subgroup& shifts, const Subgroup& top, int k1) {
  if (k1 < 1) throw ConfigError("relative norm needs k1 >= 1");
  check_request(f.group(), shifts, k1);
  if (!(top.parent() == f.group())) throw ConfigError("top subgroup does not belong to the function's group");
  check_budget(static_cast<double>(top.order()) * fast_cost(f.group().order(), shifts.order(), k1 - 1) +
                   static_cast<double>(f.group().order()),
               "relative norm evaluation");
  FastEngine<T> engine(f.group(), shifts);
  return engine.average_over(top, f.values(), k1 - 1, true);
}

template double gowers_power_naive(const BasicTable<double>&, const Subgroup&, int);
template Rational gowers_power_naive(const BasicTable<Rational>&, const Subgroup&, int);
template double gowers_power(const BasicTable<double>&, const Subgroup&, int);
template Rational gowers_power(const BasicTable<Rational>&, const Subgroup&, int);
template double relative_gowers_power(const BasicTable<double>&, const Subgroup&, const Subgroup&, int);
template Rational relative_gowers_power(const BasicTable<Rational>&, const Subgroup&, const Subgroup&, int);

double power_to_norm(double average, int k, double scale) {
  if (k == 0) return average;
  const double tol = limits().tolerance * std::max(1.0, scale);
  if (average < 0) {
    if (average < -tol)
      throw ConsistencyError("cube average " + format_double(average) + " is negative beyond tolerance");
    return 0.0;
  }
  return std::pow(average, std::ldexp(1.0, -k));
}

namespace {
double power_scale(const FunctionTable& f, int k) { return std::pow(f.bound(), std::ldexp(1.0, k)); }
}  // namespace

double gowers_norm_naive(const NormRequest& r) {
  return power_to_norm(gowers_power_naive(r.f, r.shifts, r.k), r.k, power_scale(r.f, r.k));
}

double gowers_norm(const NormRequest& r) {
  return power_to_norm(gowers_power(r.f, r.shifts, r.k), r.k, power_scale(r.f, r.k));
}

double relative_gowers_norm(const FunctionTable& f, const Subgroup& shifts, const Subgroup& top, int k1) {
  return power_to_norm(relative_gowers_power(f, shifts, top, k1), k1, power_scale(f, k1));
}

std::vector<std::complex<double>> fourier_coefficients(const FunctionTable& f) {
  const auto& group = f.group();
  double per_point = 1.0;
  for (auto m : group.moduli()) per_point += static_cast<double>(m);
  check_budget(static_cast<double>(group.order()) * per_point, "Fourier transform");
  std::vector<std::complex<double>> a(f.values().begin(), f.values().end());
  std::size_t stride = group.order();
  for (std::size_t axis = 0; axis < group.rank(); ++axis) {
    const auto m = static_cast<std::size_t>(group.moduli()[axis]);
    stride /= m;
    if (m == 1) continue;
    std::vector<std::complex<double>> roots(m);
    for (std::size_t t = 0; t < m; ++t)
      roots[t] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(m));
    std::vector<std::complex<double>> line(m), out(m);
    const std::size_t block = stride * m;
    for (std::size_t base = 0; base < group.order(); base += block) {
      for (std::size_t off = 0; off < stride; ++off) {
        for (std::size_t x = 0; x < m; ++x) line[x] = a[base + off + x * stride];
        for (std::size_t r = 0; r < m; ++r) {
          std::complex<double> acc = 0.0;
          for (std::size_t x = 0; x < m; ++x) acc += line[x] * roots[(r * x) % m];
          out[r] = acc / static_cast<double>(m);
        }
        for (std::size_t r = 0; r < m; ++r) a[base + off + r * stride] = out[r];
      }
    }
  }
  return a;
}

double u2_fourier(const FunctionTable& f) {
  const auto coeffs = fourier_coefficients(f);
  std::vector<double> fourth(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const double n2 = std::norm(coeffs[i]);
    fourth[i] = n2 * n2;
  }
  return std::pow(pairwise_sum(std::span<const double>(fourth)), 0.25);
}

}  // namespace ulab
