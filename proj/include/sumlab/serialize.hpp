#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "sumlab/correspondence.hpp"
#include "sumlab/cube.hpp"
#include "sumlab/measure.hpp"
#include "sumlab/setspec.hpp"
#include "sumlab/sumset.hpp"

namespace sumlab {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// {"schema_version", "system", "atoms": [{"point", "weight": "p/q"}]}.
/// Points use the canonical text of `system`.
Json measure_to_json(const SystemSpec& system, const DiscreteMeasure& measure);
/// Returns the system declared in the document alongside the measure.
std::pair<SystemSpec, DiscreteMeasure> measure_from_json(const Json& doc);

/// {"schema_version", "k", "system", "entries": ["p", …]}.
Json cube_to_json(const CubeConfig& cube);
/// `fallback` supplies the system when the document omits it; when both are
/// present they must agree.
CubeConfig cube_from_json(const Json& doc, const SystemSpec* fallback = nullptr);

Json omega_to_json(const OmegaVerdict& verdict);
OmegaVerdict omega_from_json(const Json& doc);

Json erdos_to_json(const ErdosVerdict& verdict);
ErdosVerdict erdos_from_json(const Json& doc);

Json density_to_json(const DensityReport& report, const FolnerWindowFamily& windows);

Json correspondence_to_json(const Correspondence& c);
Correspondence correspondence_from_json(const Json& doc);

struct SumsetChecks {
  bool acceptable = false;
  bool all_sums_verified = false;
};

Json greedy_to_json(const GreedyResult& result, const SumsetChecks& checks);

/// Recovers the anchors and sets of a greedy report.
struct SumsetDocument {
  std::vector<std::int64_t> anchors;
  SetTuple sets;
  std::vector<std::size_t> achieved_sizes;
  bool target_met = false;
  SumsetChecks checks;
  std::int64_t budget_spent = 0;
};
SumsetDocument sumset_from_json(const Json& doc);

/// "n,average" header followed by one row per sample.
std::string birkhoff_csv(const std::vector<BirkhoffSample>& trace);

/// Parses a JSON document, converting syntax errors to ParseError.
Json parse_json(const std::string& text);

}  // namespace sumlab
