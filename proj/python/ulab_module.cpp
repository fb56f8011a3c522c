#include "ulab/errors.hpp"
#include "ulab/expr.hpp"
#include "ulab/function.hpp"
#include "ulab/gowers.hpp"
#include "ulab/group.hpp"
#include "ulab/harness.hpp"
#include "ulab/limits.hpp"
#include "ulab/refine.hpp"
#include "ulab/selftest.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace ulab;

namespace {

using Coords = std::vector<std::int64_t>;

Subgroup subgroup_of(const FiniteAbelianGroup& g, const std::optional<std::vector<Coords>>& gens) {
  if (!gens) return full_subgroup(g);
  std::vector<GroupElement> elems;
  for (const auto& c : *gens) elems.push_back(GroupElement{c});
  return subgroup_closure(g, elems);
}

AmbientGroup ambient_for(const FunctionTable& f, const std::string& ambient) {
  return ambient.empty() ? AmbientGroup{Coords(f.group().rank(), 0)} : parse_ambient(ambient);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Gowers uniformity norms on finite abelian groups";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  auto config = py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", config.ptr());
  py::register_exception<BudgetError>(m, "BudgetError", base.ptr());
  py::register_exception<ConsistencyError>(m, "ConsistencyError", base.ptr());

  py::class_<FiniteAbelianGroup>(m, "Group")
      .def(py::init([](const Coords& moduli) { return make_group(moduli); }), py::arg("moduli"))
      .def_static("parse", &parse_group, py::arg("text"))
      .def_property_readonly("moduli", &FiniteAbelianGroup::moduli)
      .def_property_readonly("order", &FiniteAbelianGroup::order)
      .def_property_readonly("rank", &FiniteAbelianGroup::rank)
      .def("element_at", [](const FiniteAbelianGroup& g, std::size_t i) { return g.element_at(i).coords; })
      .def("index_of", [](const FiniteAbelianGroup& g, const Coords& c) { return g.index_of(GroupElement{c}); })
      .def("add", [](const FiniteAbelianGroup& g, const Coords& a, const Coords& b) {
        return g.add(GroupElement{a}, GroupElement{b}).coords;
      })
      .def("__eq__", [](const FiniteAbelianGroup& a, const FiniteAbelianGroup& b) { return a == b; })
      .def("__repr__", [](const FiniteAbelianGroup& g) { return "Group(" + g.literal() + ")"; });

  py::class_<Subgroup>(m, "Subgroup")
      .def_property_readonly("order", &Subgroup::order)
      .def_property_readonly("generators",
                             [](const Subgroup& s) {
                               std::vector<Coords> out;
                               for (const auto& e : s.generators()) out.push_back(e.coords);
                               return out;
                             })
      .def("elements",
           [](const Subgroup& s) {
             std::vector<Coords> out;
             for (const auto& e : s.elements()) out.push_back(e.coords);
             return out;
           })
      .def("contains", [](const Subgroup& s, const Coords& c) { return s.contains(GroupElement{c}); })
      .def_property_readonly("is_full", &Subgroup::is_full)
      .def("__eq__", [](const Subgroup& a, const Subgroup& b) { return a == b; });

  m.def("subgroup", &subgroup_of, py::arg("group"), py::arg("generators"),
        "Subgroup generated by the given elements (None means the whole group).");
  m.def("full_subgroup", &full_subgroup);
  m.def("trivial_subgroup", &trivial_subgroup);

  py::class_<FunctionTable>(m, "Table")
      .def(py::init([](const FiniteAbelianGroup& g, std::vector<double> v) { return make_table(g, std::move(v)); }),
           py::arg("group"), py::arg("values"))
      .def_property_readonly("group", &FunctionTable::group)
      .def_property_readonly("values", [](const FunctionTable& f) { return f.values(); })
      .def_property_readonly("bound", &FunctionTable::bound)
      .def("to_json", &function_to_json)
      .def("to_csv", &function_to_csv)
      .def_static("from_json", &function_from_json)
      .def("__len__", [](const FunctionTable& f) { return f.values().size(); });

  m.def("generate", [](const std::string& spec, const FiniteAbelianGroup& g) {
    return FunctionFamily::parse(spec).realize(g);
  }, py::arg("spec"), py::arg("group"), "Realize a generator spec such as 'random_sign:seed=7'.");

  m.def("gowers_norm",
        [](const FunctionTable& f, int k, const std::optional<std::vector<Coords>>& shifts, const std::string& engine) {
          const NormRequest r{f, subgroup_of(f.group(), shifts), k};
          switch (parse_engine(engine)) {
            case Engine::Naive: return gowers_norm_naive(r);
            case Engine::Fourier:
              if (k != 2 || !r.shifts.is_full()) throw ConfigError("fourier engine needs k = 2 and full shifts");
              return u2_fourier(f);
            default: return gowers_norm(r);
          }
        },
        py::arg("f"), py::arg("k"), py::arg("shifts") = py::none(), py::arg("engine") = "fast");
  m.def("gowers_power",
        [](const FunctionTable& f, int k, const std::optional<std::vector<Coords>>& shifts) {
          return gowers_power(f, subgroup_of(f.group(), shifts), k);
        },
        py::arg("f"), py::arg("k"), py::arg("shifts") = py::none());
  m.def("relative_gowers_norm",
        [](const FunctionTable& f, int k1, const std::vector<Coords>& top,
           const std::optional<std::vector<Coords>>& shifts) {
          return relative_gowers_norm(f, subgroup_of(f.group(), shifts), subgroup_of(f.group(), top), k1);
        },
        py::arg("f"), py::arg("k1"), py::arg("top"), py::arg("shifts") = py::none());
  m.def("u2_fourier", &u2_fourier, py::arg("f"));

  py::class_<Expr>(m, "Expr")
      .def_property_readonly("node_count", &Expr::node_count)
      .def("to_json", &expr_to_json)
      .def_static("from_json", &expr_from_json)
      .def("sup_bound", [](const Expr& e) { return format_rational(sup_bound(e)); })
      .def("__str__", &format_expr)
      .def("__repr__", [](const Expr& e) { return "Expr('" + format_expr(e) + "')"; })
      .def("__eq__", [](const Expr& a, const Expr& b) { return a == b; });
  m.def("parse_expr", &parse_expr, py::arg("text"), py::arg("ambient_rank") = py::none());
  m.def("evaluate",
        [](const Expr& e, const FunctionTable& f, const std::string& ambient) {
          return evaluate(e, f, QuotientMap(ambient_for(f, ambient), f.group()));
        },
        py::arg("expr"), py::arg("f"), py::arg("ambient") = "");

  m.def("refine_chain",
        [](const FunctionTable& f, int k1, double target, const std::optional<std::vector<Coords>>& h0) {
          const Subgroup start = h0 ? subgroup_of(f.group(), h0) : trivial_subgroup(f.group());
          return py::module_::import("json").attr("loads")(refinement_to_json(refine_chain(f, start, k1, target)));
        },
        py::arg("f"), py::arg("k1") = 2, py::arg("target") = kDefaultGapTolerance, py::arg("h0") = py::none(),
        "Greedy refinement; returns the result document as a dict.");

  m.def("run_trace",
        [](const std::string& gen, const std::vector<int>& ks, const std::string& expr, const std::string& ambient,
           const std::string& schedule, double tail) {
          const auto amb = parse_ambient(ambient);
          const QuotientFamily qf(amb, schedule.empty() ? default_schedule(amb) : parse_schedule(schedule));
          const auto rs = run_trace(parse_expr(expr, amb.rank()), qf, FunctionFamily::parse(gen), ks);
          return py::module_::import("json").attr("loads")(trace_to_json(rs, trace_summary(rs, tail)));
        },
        py::arg("gen"), py::arg("ks"), py::arg("expr") = "c", py::arg("ambient") = "Z^1", py::arg("schedule") = "",
        py::arg("tail") = 0.5, "Norm trace along a quotient family; returns records and summary.");

  m.def("ap_average", &ap_average, py::arg("f"), py::arg("k"));
  m.def("progression_average",
        [](const FunctionTable& f, int k, const Coords& n) { return progression_average(f, k, GroupElement{n}); },
        py::arg("f"), py::arg("k"), py::arg("n"));
  m.def("szemeredi_witness",
        [](const FunctionTable& f, int k, double delta) -> py::object {
          const auto w = szemeredi_witness(f, k, delta);
          if (!w) return py::none();
          return py::make_tuple(w->n.coords, w->value);
        },
        py::arg("f"), py::arg("k"), py::arg("delta"));
  m.def("vonneumann_check",
        [](const FunctionTable& f, int k) {
          const auto r = vonneumann_check(f, k);
          return py::dict(py::arg("lhs") = r.lhs, py::arg("rhs") = r.rhs, py::arg("ok") = r.ok);
        },
        py::arg("f"), py::arg("k"));

  m.def("selftest",
        [](std::uint64_t seed) { return py::module_::import("json").attr("loads")(selftest_to_json(run_selftest(seed))); },
        py::arg("seed") = 0);

  m.def("set_threads", [](unsigned n) {
    Limits l = limits();
    l.threads = n;
    set_limits(l);
  }, py::arg("n"), "Worker cap; 0 means machine parallelism.");
  m.def("set_budget", [](double ops) {
    Limits l = limits();
    l.op_budget = ops;
    set_limits(l);
  }, py::arg("ops"));
}
