#include "sumlab/serialize.hpp"

#include <cstdio>
#include <sstream>

#include "sumlab/errors.hpp"

namespace sumlab {

namespace {

void check_schema(const Json& doc) {
  if (!doc.is_object()) throw ParseError("expected a JSON object");
  if (doc.contains("schema_version") && doc.at("schema_version") != kSchemaVersion) {
    throw ParseError("unsupported schema_version " + doc.at("schema_version").dump());
  }
}

/// Wraps nlohmann type/key errors as ParseError.
template <class F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed JSON document: ") + e.what());
  }
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

}  // namespace

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

Json measure_to_json(const SystemSpec& system, const DiscreteMeasure& measure) {
  Json atoms = Json::array();
  for (const auto& [p, w] : measure.atoms()) {
    atoms.push_back({{"point", format_point(system, p)}, {"weight", to_string(w)}});
  }
  return {{"schema_version", kSchemaVersion},
          {"system", system.describe()},
          {"atom_count", measure.size()},
          {"atoms", std::move(atoms)}};
}

std::pair<SystemSpec, DiscreteMeasure> measure_from_json(const Json& doc) {
  check_schema(doc);
  return guarded([&] {
    auto system = parse_system_spec(doc.at("system").get<std::string>());
    std::vector<std::pair<SystemPoint, Rational>> atoms;
    for (const auto& a : doc.at("atoms")) {
      atoms.emplace_back(parse_point(system, a.at("point").get<std::string>()),
                         parse_rational(a.at("weight").get<std::string>()));
    }
    return std::pair{system, DiscreteMeasure::from_atoms(std::move(atoms))};
  });
}

Json cube_to_json(const CubeConfig& cube) {
  Json entries = Json::array();
  for (const auto& e : cube.entries()) entries.push_back(format_point(cube.system(), e));
  return {{"schema_version", kSchemaVersion},
          {"k", cube.dimension()},
          {"system", cube.system().describe()},
          {"entries", std::move(entries)}};
}

CubeConfig cube_from_json(const Json& doc, const SystemSpec* fallback) {
  check_schema(doc);
  return guarded([&] {
    std::optional<SystemSpec> system;
    if (doc.contains("system")) system = parse_system_spec(doc.at("system").get<std::string>());
    if (fallback) {
      if (system && !(*system == *fallback)) {
        throw ValidationError("cube system " + system->describe() + " differs from " + fallback->describe());
      }
      system = *fallback;
    }
    if (!system) throw ParseError("cube document names no system");
    const int k = doc.at("k").get<int>();
    std::vector<SystemPoint> entries;
    for (const auto& e : doc.at("entries")) {
      entries.push_back(e.is_string() ? parse_point(*system, e.get<std::string>())
                                      : parse_point(*system, e.dump()));
    }
    return CubeConfig(*system, k, std::move(entries));
  });
}

Json omega_to_json(const OmegaVerdict& v) {
  return {{"member", v.member},
          {"witnesses", v.witnesses},
          {"eps", v.eps},
          {"horizon", v.horizon},
          {"min_hits", v.min_hits}};
}

OmegaVerdict omega_from_json(const Json& doc) {
  return guarded([&] {
    return OmegaVerdict{doc.at("member").get<bool>(), doc.at("witnesses").get<std::vector<std::int64_t>>(),
                        doc.at("eps").get<double>(), doc.at("horizon").get<std::int64_t>(),
                        doc.at("min_hits").get<std::int64_t>()};
  });
}

Json erdos_to_json(const ErdosVerdict& v) {
  Json axes = Json::array();
  for (std::size_t i = 0; i < v.axes.size(); ++i) {
    auto a = omega_to_json(v.axes[i]);
    a["axis"] = i + 1;
    axes.push_back(std::move(a));
  }
  return {{"schema_version", kSchemaVersion},
          {"is_erdos", v.is_erdos},
          {"eps", v.eps},
          {"horizon", v.horizon},
          {"min_hits", v.min_hits},
          {"axes", std::move(axes)}};
}

ErdosVerdict erdos_from_json(const Json& doc) {
  check_schema(doc);
  return guarded([&] {
    ErdosVerdict v{doc.at("is_erdos").get<bool>(), {}, doc.at("eps").get<double>(),
                   doc.at("horizon").get<std::int64_t>(), doc.at("min_hits").get<std::int64_t>()};
    for (const auto& a : doc.at("axes")) v.axes.push_back(omega_from_json(a));
    return v;
  });
}

Json density_to_json(const DensityReport& report, const FolnerWindowFamily& windows) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < report.values.size(); ++i) {
    const auto& w = windows.windows()[i];
    rows.push_back({{"lo", w.lo}, {"hi", w.hi}, {"density", to_string(report.values[i])}});
  }
  return {{"schema_version", kSchemaVersion},
          {"windows", std::move(rows)},
          {"estimate", to_string(report.estimate)},
          {"non_monotone", report.non_monotone}};
}

Json correspondence_to_json(const Correspondence& c) {
  return {{"schema_version", kSchemaVersion},
          {"point", serialize(c.point)},
          {"cylinder", {{"coordinate", c.cylinder.coordinate}, {"bit", c.cylinder.bit}}}};
}

Correspondence correspondence_from_json(const Json& doc) {
  check_schema(doc);
  return guarded([&] {
    const auto& cyl = doc.at("cylinder");
    return Correspondence{parse_symbolic_point(doc.at("point").get<std::string>()),
                          CylinderSet{cyl.at("coordinate").get<std::int64_t>(), cyl.at("bit").get<std::uint8_t>()}};
  });
}

Json greedy_to_json(const GreedyResult& result, const SumsetChecks& checks) {
  return {{"schema_version", kSchemaVersion},
          {"mode", "greedy"},
          {"anchors", result.tuple.anchors},
          {"sets", result.tuple.sets},
          {"achieved_sizes", result.achieved_sizes},
          {"target_met", result.target_met},
          {"checks", {{"acceptable", checks.acceptable}, {"all_sums_verified", checks.all_sums_verified}}},
          {"budget_spent", result.candidates_spent},
          {"anchors_tried", result.anchors_tried},
          {"budget_exhausted", result.budget_exhausted}};
}

SumsetDocument sumset_from_json(const Json& doc) {
  check_schema(doc);
  return guarded([&] {
    const auto& checks = doc.at("checks");
    return SumsetDocument{doc.at("anchors").get<std::vector<std::int64_t>>(),
                          doc.at("sets").get<SetTuple>(),
                          doc.at("achieved_sizes").get<std::vector<std::size_t>>(),
                          doc.at("target_met").get<bool>(),
                          {checks.at("acceptable").get<bool>(), checks.at("all_sums_verified").get<bool>()},
                          doc.at("budget_spent").get<std::int64_t>()};
  });
}

std::string birkhoff_csv(const std::vector<BirkhoffSample>& trace) {
  std::ostringstream out;
  out << "n,average\n";
  for (const auto& s : trace) out << s.n << ',' << format_double(s.average) << '\n';
  return out.str();
}

}  // namespace sumlab
