#include "ulab/harness.hpp"

#include "ulab/errors.hpp"
#include "ulab/gowers.hpp"
#include "ulab/limits.hpp"
#include "ulab/parallel.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>
#include <tuple>

namespace ulab {
namespace {

bool pure_torsion(const AmbientGroup& a) {
  return std::none_of(a.torsion.begin(), a.torsion.end(), [](auto t) { return t == 0; });
}

std::int64_t parse_int(const std::string& text, const std::string& context) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    throw ConfigError("malformed integer '" + text + "' in " + context);
  }
  if (used != text.size()) throw ConfigError("malformed integer '" + text + "' in " + context);
  return v;
}

std::uint64_t group_stream(const FiniteAbelianGroup& g) {
  std::uint64_t h = 0x51ed270b27bd4d61ULL;
  for (auto m : g.moduli()) h = CounterRng::mix(h ^ static_cast<std::uint64_t>(m));
  return h ^ g.rank();
}

}  // namespace

QuotientFamily::QuotientFamily(AmbientGroup ambient, std::vector<std::int64_t> labels)
    : ambient_(std::move(ambient)), labels_(std::move(labels)) {
  if (ambient_.rank() == 0) throw ConfigError("ambient group must have positive rank");
  if (labels_.empty()) throw ConfigError("quotient schedule is empty");
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] < 1) throw ConfigError("quotient labels must be >= 1");
    if (i && labels_[i] <= labels_[i - 1]) throw ConfigError("quotient labels must be strictly increasing");
  }
  if (pure_torsion(ambient_) && static_cast<std::size_t>(labels_.back()) > ambient_.rank())
    throw ConfigError("label " + std::to_string(labels_.back()) + " exceeds the rank of ambient " +
                      ambient_.literal());
}

QuotientMap QuotientFamily::map(std::int64_t label) const {
  if (pure_torsion(ambient_)) {
    std::vector<std::int64_t> moduli(ambient_.torsion.begin(), ambient_.torsion.begin() + label);
    return QuotientMap(ambient_, make_group(moduli));
  }
  std::vector<std::int64_t> moduli;
  for (auto t : ambient_.torsion) moduli.push_back(t == 0 ? label : t);
  return QuotientMap(ambient_, make_group(moduli));
}

std::vector<std::int64_t> default_schedule(const AmbientGroup& ambient) {
  if (pure_torsion(ambient)) {
    std::vector<std::int64_t> out;
    for (std::int64_t n = 1; n <= std::min<std::int64_t>(5, static_cast<std::int64_t>(ambient.rank())); ++n)
      out.push_back(n);
    return out;
  }
  return {16, 32, 64, 128, 256};
}

std::vector<std::int64_t> parse_schedule(const std::string& text) {
  std::vector<std::int64_t> out;
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    const auto lo = parse_int(text.substr(0, dots), "schedule '" + text + "'");
    const auto hi = parse_int(text.substr(dots + 2), "schedule '" + text + "'");
    if (lo < 1 || hi < lo) throw ConfigError("schedule range '" + text + "' is empty or non-positive");
    for (auto n = lo; n <= hi; n *= 2) out.push_back(n);
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_int(item, "schedule '" + text + "'"));
  if (out.empty()) throw ConfigError("empty schedule");
  return out;
}

FunctionFamily FunctionFamily::parse(const std::string& spec, std::uint64_t default_seed) {
  FunctionFamily ff;
  const auto colon = spec.find(':');
  ff.kind_ = spec.substr(0, colon);
  static const std::vector<std::string> kKinds = {"constant",      "random_sign", "random_uniform",
                                                  "interval",      "linear_cos",  "quadratic_cos"};
  if (std::find(kKinds.begin(), kKinds.end(), ff.kind_) == kKinds.end())
    throw ConfigError("unknown generator '" + ff.kind_ + "'");
  ff.seed_ = default_seed;
  if (colon != std::string::npos) {
    std::stringstream ss(spec.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos || eq == 0) throw ConfigError("malformed generator parameter '" + item + "'");
      ff.params_[item.substr(0, eq)] = item.substr(eq + 1);
    }
  }
  for (const auto& [key, value] : ff.params_) {
    static const std::map<std::string, std::vector<std::string>> kAllowed = {
        {"constant", {"c"}},       {"random_sign", {"seed"}}, {"random_uniform", {"seed"}},
        {"interval", {"alpha"}},   {"linear_cos", {"a"}},     {"quadratic_cos", {}}};
    const auto& allowed = kAllowed.at(ff.kind_);
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError("generator " + ff.kind_ + " has no parameter '" + key + "'");
  }
  if (auto it = ff.params_.find("seed"); it != ff.params_.end()) {
    ff.seed_ = static_cast<std::uint64_t>(parse_int(it->second, "generator '" + spec + "'"));
    ff.params_.erase(it);
  }
  if (ff.kind_ == "constant" && std::abs(ff.number("c", 1.0)) > 1.0)
    throw ConfigError("constant generator needs |c| <= 1");
  if (ff.kind_ == "interval") {
    const double a = ff.number("alpha", 0.5);
    if (!(a >= 0.0 && a <= 1.0)) throw ConfigError("interval generator needs alpha in [0,1]");
  }
  return ff;
}

double FunctionFamily::number(const std::string& key, double fallback) const {
  const auto it = params_.find(key);
  if (it == params_.end()) return fallback;
  try {
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("malformed number '" + it->second + "' for parameter " + key);
  }
}

std::string FunctionFamily::spec() const {
  std::string out = kind_;
  std::vector<std::string> parts;
  for (const auto& [k, v] : params_) parts.push_back(k + "=" + v);
  if (kind_ == "random_sign" || kind_ == "random_uniform") parts.push_back("seed=" + std::to_string(seed_));
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "," : ":") + parts[i];
  return out;
}

FunctionTable FunctionFamily::realize(const FiniteAbelianGroup& group) const {
  const std::size_t n = group.order();
  std::vector<double> v(n);
  if (kind_ == "constant") {
    std::fill(v.begin(), v.end(), number("c", 1.0));
  } else if (kind_ == "random_sign" || kind_ == "random_uniform") {
    const CounterRng rng(seed_, group_stream(group));
    for (std::size_t x = 0; x < n; ++x) {
      const auto bits = rng.at(x);
      v[x] = kind_ == "random_sign" ? ((bits >> 63) ? 1.0 : -1.0)
                                    : -1.0 + 2.0 * static_cast<double>(bits >> 11) * 0x1.0p-53;
    }
  } else if (kind_ == "interval") {
    const auto cut = static_cast<std::size_t>(std::ceil(number("alpha", 0.5) * static_cast<double>(n)));
    for (std::size_t x = 0; x < n; ++x) v[x] = x < cut ? 1.0 : -1.0;
  } else {
    if (!group.is_cyclic()) throw ConfigError(kind_ + " generator needs a cyclic group");
    const auto m = static_cast<std::int64_t>(n);
    const double a = number("a", 1.0);
    for (std::int64_t x = 0; x < m; ++x) {
      double phase = 0.0;
      if (kind_ == "linear_cos") {
        phase = a * static_cast<double>(x) / static_cast<double>(m);
      } else {
        const auto sq = static_cast<std::int64_t>((static_cast<__int128>(x) * x) % m);
        phase = static_cast<double>(sq) / static_cast<double>(m);
      }
      v[static_cast<std::size_t>(x)] = std::cos(2.0 * std::numbers::pi * phase);
    }
  }
  return FunctionTable(group, std::move(v), 1.0);
}

std::vector<TraceRecord> run_trace(const Expr& e, const QuotientFamily& qf, const FunctionFamily& ff,
                                   const std::vector<int>& ks) {
  if (ks.empty()) throw ConfigError("trace needs at least one k");
  if (auto r = e.ambient_rank(); r && *r != qf.ambient().rank())
    throw ConfigError("expression shift arity does not match ambient " + qf.ambient().literal());
  const std::string text = format_expr(e);
  std::vector<std::pair<std::int64_t, int>> jobs;
  for (auto n : qf.labels())
    for (int k : ks) jobs.emplace_back(n, k);

  auto records = parallel_map(jobs.size(), [&](std::size_t i) {
    const auto [n, k] = jobs[i];
    const auto q = qf.map(n);
    TraceRecord rec;
    rec.n = n;
    rec.group = q.target().literal();
    rec.k = k;
    rec.expr = text;
    const auto start = std::chrono::steady_clock::now();
    try {
      const auto value = evaluate(e, ff.realize(q.target()), q);
      rec.value = gowers_norm(NormRequest{value, full_subgroup(q.target()), k});
    } catch (const BudgetError&) {
      rec.skipped = true;
      rec.engine = "skipped";
      rec.value = std::nan("");
    }
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
  });
  std::stable_sort(records.begin(), records.end(), [](const TraceRecord& a, const TraceRecord& b) {
    return std::tie(a.n, a.k, a.expr) < std::tie(b.n, b.k, b.expr);
  });
  return records;
}

std::vector<Bracket> trace_summary(const std::vector<TraceRecord>& records, double tail_fraction) {
  if (records.empty()) throw ConfigError("trace summary needs at least one record");
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) throw ConfigError("tail fraction must lie in (0,1]");
  std::map<std::pair<std::string, int>, std::vector<const TraceRecord*>> groups;
  std::vector<std::pair<std::string, int>> order;
  for (const auto& r : records) {
    if (r.skipped) continue;
    auto key = std::make_pair(r.expr, r.k);
    if (!groups.count(key)) order.push_back(key);
    groups[key].push_back(&r);
  }
  std::vector<Bracket> out;
  for (const auto& key : order) {
    auto rs = groups[key];
    std::stable_sort(rs.begin(), rs.end(), [](auto* a, auto* b) { return a->n < b->n; });
    const auto tail = static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(rs.size()) - 1e-12));
    const std::size_t take = std::clamp<std::size_t>(tail, 1, rs.size());
    Bracket b{key.first, key.second, INFINITY, -INFINITY, take};
    for (std::size_t i = rs.size() - take; i < rs.size(); ++i) {
      b.min_tail = std::min(b.min_tail, rs[i]->value);
      b.max_tail = std::max(b.max_tail, rs[i]->value);
    }
    out.push_back(b);
  }
  std::sort(out.begin(), out.end(), [](const Bracket& a, const Bracket& b) {
    return std::tie(a.expr, a.k) < std::tie(b.expr, b.k);
  });
  return out;
}

std::string trace_to_csv(const std::vector<TraceRecord>& records, bool with_timing) {
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  std::string out = "N,group,k,expr,value,engine,seconds\n";
  for (const auto& r : records) {
    out += std::to_string(r.n) + "," + quote(r.group) + "," + std::to_string(r.k) + "," + quote(r.expr) + "," +
           format_double(r.value) + "," + r.engine + "," + (with_timing ? format_double(r.seconds) : "0") + "\n";
  }
  return out;
}

std::string trace_to_json(const std::vector<TraceRecord>& records, const std::vector<Bracket>& summary,
                          bool with_timing) {
  nlohmann::ordered_json j;
  auto& recs = j["records"] = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    nlohmann::ordered_json e;
    e["N"] = r.n;
    e["group"] = r.group;
    e["k"] = r.k;
    e["expr"] = r.expr;
    e["value"] = r.skipped ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(r.value);
    e["engine"] = r.engine;
    e["seconds"] = with_timing ? r.seconds : 0.0;
    recs.push_back(e);
  }
  auto& sum = j["summary"] = nlohmann::ordered_json::array();
  for (const auto& b : summary) {
    nlohmann::ordered_json e;
    e["expr"] = b.expr;
    e["k"] = b.k;
    e["min_tail"] = b.min_tail;
    e["max_tail"] = b.max_tail;
    e["tail_count"] = b.tail_count;
    sum.push_back(e);
  }
  return j.dump();
}

double progression_average(const FunctionTable& f, int k, const GroupElement& n) {
  if (k < 1) throw ConfigError("progression length k must be >= 1");
  const auto& g = f.group();
  const std::size_t ni = g.index_of(n);
  std::vector<double> row(f.size());
  for (std::size_t x = 0; x < f.size(); ++x) {
    double prod = f[x];
    for (int j = 1; j < k; ++j) prod *= f[g.add_scaled_index(x, ni, j)];
    row[x] = prod;
  }
  return pairwise_mean(row);
}

double ap_average(const FunctionTable& f, int k) {
  if (k < 1) throw ConfigError("progression length k must be >= 1");
  const double cost = static_cast<double>(f.size()) * static_cast<double>(f.size()) * k;
  if (cost > limits().op_budget) throw BudgetError("progression count exceeds the operation budget");
  const auto& g = f.group();
  std::vector<double> per_n(f.size());
  for (std::size_t n = 0; n < f.size(); ++n) per_n[n] = progression_average(f, k, g.element_at(n));
  return pairwise_mean(per_n);
}

std::optional<Witness> szemeredi_witness(const FunctionTable& f, int k, double delta) {
  if (!(delta > 0)) throw ConfigError("delta must be positive");
  if (k < 1) throw ConfigError("progression length k must be >= 1");
  const auto& g = f.group();
  for (std::size_t n = (k >= 2 ? 1 : 0); n < f.size(); ++n) {
    const auto e = g.element_at(n);
    const double v = progression_average(f, k, e);
    if (v >= delta) return Witness{e, v};
  }
  return std::nullopt;
}

VonNeumannResult vonneumann_check(const FunctionTable& f, int k) {
  const auto& g = f.group();
  const auto p = static_cast<std::int64_t>(g.order());
  bool prime = g.is_cyclic() && p >= 2;
  for (std::int64_t d = 2; prime && d * d <= p; ++d) prime = p % d != 0;
  if (!prime) throw ConfigError("von Neumann check needs a cyclic group of prime order");
  if (k < 2 || k > 4) throw ConfigError("von Neumann check needs 2 <= k <= 4");
  if (k >= 3 && p < k) throw ConfigError("von Neumann check needs p >= k for k >= 3");
  if (f.bound() > 1.0) throw ConfigError("von Neumann check needs a function bounded by 1");
  VonNeumannResult r;
  r.lhs = std::abs(ap_average(f, k));
  r.rhs = gowers_norm(NormRequest{f, full_subgroup(g), k - 1});
  r.ok = r.lhs <= r.rhs + limits().tolerance;
  return r;
}

}  // namespace ulab
