#include "ulab/cli.hpp"

#include "ulab/errors.hpp"
#include "ulab/expr.hpp"
#include "ulab/gowers.hpp"
#include "ulab/harness.hpp"
#include "ulab/limits.hpp"
#include "ulab/refine.hpp"
#include "ulab/selftest.hpp"

#include "CLI11.hpp"

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace ulab::cli {
namespace {

using json = nlohmann::ordered_json;

/// Every option of every subcommand; CLI11 fills it in.
struct RunConfig {
  std::string group;
  std::string values;
  std::string function_file;
  std::string gen;
  std::string expr = "c";
  std::string ambient;
  std::vector<int> ks;
  std::string schedule;
  double tail = 0.5;
  std::uint64_t seed = 0;
  std::string engine = "fast";
  std::string shifts = "full";
  std::string top;
  std::string h0 = "trivial";
  int k1 = 2;
  double target = kDefaultGapTolerance;
  double delta = 0.1;
  double budget = 1e9;
  double tolerance = 1e-9;
  unsigned threads = 0;
  std::string format;
  std::string output;
  bool timing = false;
};

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ConfigError("malformed value '" + item + "'");
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used != item.size()) throw ConfigError("malformed value '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

FunctionTable load_function(const RunConfig& c) {
  const int sources = !c.function_file.empty() + !c.values.empty() + !c.gen.empty();
  if (sources != 1) throw ConfigError("give exactly one of --function, --values or --gen");
  if (!c.function_file.empty()) return function_from_json(read_file(c.function_file));
  if (c.group.empty()) throw ConfigError("--values and --gen need --group");
  const auto g = parse_group(c.group);
  if (!c.values.empty()) return make_table(g, parse_values(c.values));
  return FunctionFamily::parse(c.gen, c.seed).realize(g);
}

/// "full", "trivial", or generators "a,b;c,d".
Subgroup parse_subgroup(const FiniteAbelianGroup& g, const std::string& text) {
  if (text == "full") return full_subgroup(g);
  if (text == "trivial" || text.empty()) return trivial_subgroup(g);
  std::vector<GroupElement> gens;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    std::vector<std::int64_t> coords;
    for (double v : parse_values(item)) coords.push_back(static_cast<std::int64_t>(v));
    gens.push_back(g.reduce(coords));
  }
  return subgroup_closure(g, gens);
}

json subgroup_json(const Subgroup& h) {
  json gens = json::array();
  for (const auto& g : h.generators()) gens.push_back(g.coords);
  return json{{"generators", gens}, {"order", h.order()}};
}

std::string resolve_format(const RunConfig& c, const std::string& fallback) {
  const std::string f = c.format.empty() ? fallback : c.format;
  if (f != "json" && f != "csv") throw ConfigError("--format must be json or csv");
  return f;
}

void emit(const RunConfig& c, std::ostream& out, std::string doc) {
  if (doc.empty() || doc.back() != '\n') doc += '\n';
  if (c.output.empty()) {
    out << doc;
    return;
  }
  std::ofstream file(c.output, std::ios::binary);
  if (!file) throw ConfigError("cannot write '" + c.output + "'");
  file << doc;
}

std::string cmd_norm(const RunConfig& c) {
  const auto f = load_function(c);
  const auto shifts = parse_subgroup(f.group(), c.shifts);
  const auto engine = parse_engine(c.engine);
  const std::vector<int> ks = c.ks.empty() ? std::vector<int>{2} : c.ks;
  json docs = json::array();
  for (int k : ks) {
    json d;
    d["k"] = k;
    d["shift_subgroup"] = subgroup_json(shifts);
    if (!c.top.empty()) {
      if (engine != Engine::Fast) throw ConfigError("relative norms use the fast engine");
      const auto top = parse_subgroup(f.group(), c.top);
      d["top_subgroup"] = subgroup_json(top);
      d["value"] = relative_gowers_norm(f, shifts, top, k);
    } else {
      d["top_subgroup"] = nullptr;
      switch (engine) {
        case Engine::Naive: d["value"] = gowers_norm_naive({f, shifts, k}); break;
        case Engine::Fast: d["value"] = gowers_norm({f, shifts, k}); break;
        case Engine::Fourier:
          if (k != 2 || !shifts.is_full()) throw ConfigError("the Fourier engine computes U^2 with full shifts only");
          d["value"] = u2_fourier(f);
          break;
      }
    }
    d["engine"] = engine_name(engine);
    docs.push_back(d);
  }
  return ks.size() == 1 ? docs[0].dump() : docs.dump();
}

std::string cmd_eval(const RunConfig& c) {
  const auto f = load_function(c);
  const AmbientGroup ambient =
      c.ambient.empty() ? AmbientGroup{std::vector<std::int64_t>(f.group().rank(), 0)} : parse_ambient(c.ambient);
  const auto e = parse_expr(c.expr, ambient.rank());
  const auto value = evaluate(e, f, QuotientMap(ambient, f.group()));
  if (resolve_format(c, "json") == "csv") return function_to_csv(value);
  json d;
  d["expr"] = format_expr(e);
  d["ast"] = json::parse(expr_to_json(e));
  d["sup_bound"] = format_rational(sup_bound(e));
  d["function"] = json::parse(function_to_json(value));
  return d.dump();
}

std::string cmd_trace(const RunConfig& c) {
  const auto ambient = parse_ambient(c.ambient.empty() ? "Z^1" : c.ambient);
  const auto labels = c.schedule.empty() ? default_schedule(ambient) : parse_schedule(c.schedule);
  const QuotientFamily qf(ambient, labels);
  const auto ff = FunctionFamily::parse(c.gen.empty() ? "random_sign" : c.gen, c.seed);
  const auto e = parse_expr(c.expr, ambient.rank());
  const std::vector<int> ks = c.ks.empty() ? std::vector<int>{2} : c.ks;
  const auto records = run_trace(e, qf, ff, ks);
  if (resolve_format(c, "csv") == "csv") return trace_to_csv(records, c.timing);
  return trace_to_json(records, trace_summary(records, c.tail), c.timing);
}

std::string cmd_refine(const RunConfig& c) {
  const auto f = load_function(c);
  const auto h0 = parse_subgroup(f.group(), c.h0);
  RefineOptions o;
  o.seed = c.seed;
  return refinement_to_json(refine_chain(f, h0, c.k1, c.target, o));
}

std::string cmd_ap(const RunConfig& c) {
  const auto f = load_function(c);
  const int k = c.ks.empty() ? 3 : c.ks.front();
  json d;
  d["k"] = k;
  d["lambda"] = ap_average(f, k);
  if (auto w = szemeredi_witness(f, k, c.delta)) {
    d["witness"] = json{{"n", w->n.coords}, {"value", w->value}};
  } else {
    d["witness"] = nullptr;
  }
  d["delta"] = c.delta;
  try {
    const auto vn = vonneumann_check(f, k);
    d["vonneumann"] = json{{"lhs", vn.lhs}, {"rhs", vn.rhs}, {"ok", vn.ok}};
  } catch (const ConfigError&) {
    d["vonneumann"] = nullptr;
  }
  return d.dump();
}

unsigned env_threads() {
  if (const char* v = std::getenv("UNIFORMITY_LAB_THREADS")) {
    try {
      return static_cast<unsigned>(std::stoul(v));
    } catch (const std::exception&) {
      throw ConfigError(std::string("UNIFORMITY_LAB_THREADS is not a number: ") + v);
    }
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Gowers uniformity norms on finite abelian groups", "ulab"};
  app.set_config("--config", "", "TOML/INI config file; command-line flags take precedence");
  app.require_subcommand(1);
  bool dump_config = false;
  std::string threads_flag;

  auto add_common = [&](CLI::App* sub) {
    sub->fallthrough();
    sub->add_option("--group", c.group, "Group literal, e.g. 12 or 4,2,2");
    sub->add_option("--values", c.values, "Comma-separated function values in canonical order");
    sub->add_option("--function", c.function_file, "Function JSON file");
    sub->add_option("--gen", c.gen, "Generator spec, e.g. random_sign:seed=7");
  };
  app.add_option("--seed", c.seed, "Seed for generators and sampling");
  app.add_option("--budget", c.budget, "Operation budget per computation");
  app.add_option("--tolerance", c.tolerance, "Numerical tolerance for clamping and checks");
  app.add_option("--threads", threads_flag, "Worker cap (env UNIFORMITY_LAB_THREADS)");
  app.add_option("--format", c.format, "Output format: json or csv");
  app.add_option("--output", c.output, "Write the result document to a file");
  app.add_flag("--dump-config", dump_config, "Print the normalized configuration and exit")->configurable(false);

  auto* norm = app.add_subcommand("norm", "Absolute or relative uniformity norm");
  add_common(norm);
  norm->add_option("--k", c.ks, "Norm order(s)")->delimiter(',');
  norm->add_option("--engine", c.engine, "naive | fast | fourier");
  norm->add_option("--shifts", c.shifts, "Shift subgroup: full, trivial, or generators a,b;c,d");
  norm->add_option("--top", c.top, "Top-level subgroup for the relative norm");

  auto* eval = app.add_subcommand("eval", "Evaluate an expression at a function");
  add_common(eval);
  eval->add_option("--expr", c.expr, "Expression text");
  eval->add_option("--ambient", c.ambient, "Ambient group token, e.g. Z^1");

  auto* trace = app.add_subcommand("trace", "Norm trace along a quotient family");
  trace->fallthrough();
  trace->add_option("--gen", c.gen, "Generator spec");
  trace->add_option("--expr", c.expr, "Expression text");
  trace->add_option("--ambient", c.ambient, "Ambient group token, e.g. Z^1 or F3^5");
  trace->add_option("--k", c.ks, "Norm order(s)")->delimiter(',');
  trace->add_option("--schedule", c.schedule, "Labels: 16..256 (doubling) or 16,32,64");
  trace->add_option("--tail", c.tail, "Tail fraction for the bracket summary");
  trace->add_flag("--timing", c.timing, "Record wall time in the output");

  auto* refine = app.add_subcommand("refine", "Greedy subgroup refinement");
  add_common(refine);
  refine->add_option("--k1", c.k1, "Norm order of the relative norm");
  refine->add_option("--h0", c.h0, "Initial subgroup");
  refine->add_option("--target", c.target, "Target gap");

  auto* ap = app.add_subcommand("ap", "Progression averages and witness search");
  add_common(ap);
  ap->add_option("--k", c.ks, "Progression length")->delimiter(',');
  ap->add_option("--delta", c.delta, "Witness threshold");

  auto* selftest = app.add_subcommand("selftest", "Run the invariant suite");
  selftest->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  if (dump_config) {
    out << app.config_to_str(false, false);
    return kOk;
  }

  try {
    Limits l = limits();
    l.op_budget = c.budget;
    l.tolerance = c.tolerance;
    l.threads = threads_flag.empty() ? env_threads() : static_cast<unsigned>(std::stoul(threads_flag));
    c.threads = l.threads;
    if (!(c.budget > 0)) throw ConfigError("--budget must be positive");
    if (!(c.tolerance >= 0)) throw ConfigError("--tolerance must be non-negative");
    ScopedLimits scoped(l);

    if (*norm) emit(c, out, cmd_norm(c));
    else if (*eval) emit(c, out, cmd_eval(c));
    else if (*trace) emit(c, out, cmd_trace(c));
    else if (*refine) emit(c, out, cmd_refine(c));
    else if (*ap) emit(c, out, cmd_ap(c));
    else if (*selftest) {
      const auto results = run_selftest(c.seed);
      emit(c, out, selftest_to_json(results));
      for (const auto& r : results)
        if (!r.ok) return kFailure;
    }
    return kOk;
  } catch (const BudgetError& e) {
    err << "budget: " << e.what() << '\n';
    return kBudgetRefused;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace ulab::cli
