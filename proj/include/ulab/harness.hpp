#pragma once

#include "ulab/expr.hpp"
#include "ulab/function.hpp"
#include "ulab/group.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ulab {

/// Maps from an ambient group onto growing finite quotients S_N. Free
/// coordinates reduce mod N; for a pure torsion ambient (Z_p)^d the label
/// n selects the projection onto the first n coordinates.
class QuotientFamily {
 public:
  QuotientFamily(AmbientGroup ambient, std::vector<std::int64_t> labels);

  const AmbientGroup& ambient() const noexcept { return ambient_; }
  const std::vector<std::int64_t>& labels() const noexcept { return labels_; }
  QuotientMap map(std::int64_t label) const;

 private:
  AmbientGroup ambient_;
  std::vector<std::int64_t> labels_;
};

/// {16,32,64,128,256} for ambients with a free part, {1..min(5,d)} for (Z_p)^d.
std::vector<std::int64_t> default_schedule(const AmbientGroup& ambient);
/// "16..256" (doubling) or an explicit list "16,32,64".
std::vector<std::int64_t> parse_schedule(const std::string& text);

/// A seeded recipe realizing a [-1,1]-valued table on any quotient.
/// Spec strings: "constant:c=1", "random_sign:seed=7", "random_uniform:seed=7",
/// "interval:alpha=0.5", "linear_cos:a=1", "quadratic_cos".
class FunctionFamily {
 public:
  static FunctionFamily parse(const std::string& spec, std::uint64_t default_seed = 0);

  FunctionTable realize(const FiniteAbelianGroup& group) const;
  const std::string& kind() const noexcept { return kind_; }
  std::string spec() const;

 private:
  std::string kind_;
  std::map<std::string, std::string> params_;
  std::uint64_t seed_ = 0;
  double number(const std::string& key, double fallback) const;
};

struct TraceRecord {
  std::int64_t n = 0;
  std::string group;
  int k = 0;
  std::string expr;
  double value = 0.0;
  std::string engine = "fast";
  double seconds = 0.0;
  bool skipped = false;
};

/// One record per (label, k): the norm of e evaluated at f_N, shifts = S_N.
/// Budget refusals yield skipped records. Output sorted by (N, k, expr).
std::vector<TraceRecord> run_trace(const Expr& e, const QuotientFamily& qf, const FunctionFamily& ff,
                                   const std::vector<int>& ks);

struct Bracket {
  std::string expr;
  int k = 0;
  double min_tail = 0.0;
  double max_tail = 0.0;
  std::size_t tail_count = 0;
  double width() const { return max_tail - min_tail; }
};

/// Per (expr, k), min and max over the last ceil(tail_fraction * count)
/// non-skipped records in label order.
std::vector<Bracket> trace_summary(const std::vector<TraceRecord>& records, double tail_fraction);

/// Columns N,group,k,expr,value,engine,seconds. seconds is written as 0
/// unless with_timing is set, so default output is reproducible.
std::string trace_to_csv(const std::vector<TraceRecord>& records, bool with_timing = false);
std::string trace_to_json(const std::vector<TraceRecord>& records, const std::vector<Bracket>& summary,
                          bool with_timing = false);

/// E_x prod_{j<k} f(x + j n).
double progression_average(const FunctionTable& f, int k, const GroupElement& n);
/// E_{x,n} prod_{j<k} f(x + j n).
double ap_average(const FunctionTable& f, int k);

struct Witness {
  GroupElement n;
  double value = 0.0;
};

/// First n in canonical order (n = 0 excluded for k >= 2) whose
/// progression average reaches delta.
std::optional<Witness> szemeredi_witness(const FunctionTable& f, int k, double delta);

struct VonNeumannResult {
  double lhs = 0.0;
  double rhs = 0.0;
  bool ok = false;
};

/// |ap_average(f, k)| against the U^{k-1} norm on Z_p.
VonNeumannResult vonneumann_check(const FunctionTable& f, int k);

}  // namespace ulab
