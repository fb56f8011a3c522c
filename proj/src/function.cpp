#include "ulab/function.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>

namespace ulab {

FunctionTable make_table(const FiniteAbelianGroup& group, std::vector<double> values) {
  double bound = 1.0;
  for (double v : values)
    if (std::isfinite(v)) bound = std::max(bound, std::abs(v));
  return FunctionTable(group, std::move(values), bound);
}

FunctionTable constant_table(const FiniteAbelianGroup& group, double c) {
  return FunctionTable(group, std::vector<double>(group.order(), c), std::abs(c));
}

ExactTable to_exact(const FunctionTable& f) {
  if (f.size() > kExactMaxOrder)
    throw ConfigError("exact mode needs group order <= " + std::to_string(kExactMaxOrder));
  std::vector<Rational> values(f.values().begin(), f.values().end());
  return ExactTable(ExactTable::Unchecked{}, f.group(), std::move(values), Rational(f.bound()));
}

FunctionTable to_double(const ExactTable& f) {
  std::vector<double> values;
  values.reserve(f.size());
  for (const auto& v : f.values()) values.push_back(ulab::to_double(v));
  return FunctionTable(FunctionTable::Unchecked{}, f.group(), std::move(values), ulab::to_double(f.bound()));
}

std::string function_to_json(const FunctionTable& f) {
  nlohmann::ordered_json j;
  j["group"] = f.group().moduli();
  std::vector<double> values = f.values();
  for (auto& v : values)
    if (v == 0.0) v = 0.0;  // drop negative zeros
  j["values"] = values;
  j["bound"] = f.bound();
  return j.dump();
}

FunctionTable function_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
    auto moduli = j.at("group").get<std::vector<std::int64_t>>();
    auto values = j.at("values").get<std::vector<double>>();
    auto group = make_group(moduli);
    if (j.contains("bound")) return FunctionTable(group, std::move(values), j.at("bound").get<double>());
    return make_table(group, std::move(values));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed function JSON: ") + e.what());
  }
}

std::string function_to_csv(const FunctionTable& f) {
  std::string out;
  for (std::size_t i = 0; i < f.group().rank(); ++i) out += "x" + std::to_string(i) + ",";
  out += "value\n";
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (auto c : f.group().element_at(i).coords) out += std::to_string(c) + ",";
    out += format_double(f[i] == 0.0 ? 0.0 : f[i]) + "\n";
  }
  return out;
}

}  // namespace ulab
