#include <cstdio>
#include <string>

#include "mirrorplace/errors.hpp"
#include "mirrorplace/io.hpp"

namespace mirrorplace {

using nlohmann::json;

namespace {

json position(const NodeRecord& node) { return json::array({*node.longitude, *node.latitude}); }

}  // namespace

json to_geojson(const Topology& topology, const Placement& placement) {
  const std::size_t n = topology.size();
  if (placement.assignment.size() != n)
    throw ValidationError("placement covers " + std::to_string(placement.assignment.size()) +
                          " nodes but the topology has " + std::to_string(n));
  std::string missing;
  for (const NodeRecord& node : topology.nodes())
    if (!node.has_coordinates()) missing += (missing.empty() ? "" : ", ") + std::to_string(node.id);
  if (!missing.empty()) throw ValidationError("nodes without coordinates: " + missing);

  std::vector<bool> is_server(n, false);
  for (NodeId s : placement.servers) {
    if (s >= n) throw ValidationError("server " + std::to_string(s) + " is not a node");
    is_server[s] = true;
  }

  json features = json::array();
  for (const NodeRecord& node : topology.nodes()) {
    features.push_back({{"type", "Feature"},
                        {"geometry", {{"type", "Point"}, {"coordinates", position(node)}}},
                        {"properties",
                         {{"id", node.id},
                          {"label", node.label},
                          {"role", is_server[node.id] ? "server" : "customer"},
                          {"priority", node.priority}}}});
  }
  for (NodeId i = 0; i < n; ++i) {
    const NodeId s = placement.assignment[i];
    if (s >= n) throw ValidationError("node " + std::to_string(i) + " assigned to a non-node");
    if (s == i) continue;
    features.push_back(
        {{"type", "Feature"},
         {"geometry",
          {{"type", "LineString"},
           {"coordinates", json::array({position(topology.node(i)), position(topology.node(s))})}}},
         {"properties", {{"customer", i}, {"server", s}}}});
  }
  return {{"type", "FeatureCollection"}, {"features", std::move(features)}};
}

void export_geojson(const Topology& topology, const Placement& placement,
                    const std::filesystem::path& path) {
  write_text_file(path, to_geojson(topology, placement).dump(2) + "\n");
}

json to_json(const FitnessReport& r) {
  return {{"maximum", r.maximum}, {"q95", r.quantile95}, {"median", r.median}, {"mean", r.mean}};
}

json to_json(const Placement& p) {
  return {{"servers", p.servers}, {"assignment", p.assignment}, {"fitness", to_json(p.fitness)}};
}

json to_json(const RunTrace& trace) {
  json records = json::array();
  for (const TraceRecord& r : trace.records)
    records.push_back(
        {{"iteration", r.iteration}, {"servers", r.servers}, {"fitness", to_json(r.fitness)}});
  return {{"termination", std::string(to_string(trace.termination))}, {"records", std::move(records)}};
}

json to_json(const SweepResult& result) {
  json algorithms = json::array();
  for (Algorithm a : result.algorithms) algorithms.push_back(std::string(to_string(a)));
  json cells = json::array();
  for (const SweepCell& c : result.cells) {
    json per = json::array();
    for (const FitnessReport& r : c.per_scenario) per.push_back(to_json(r));
    json cell = {{"algorithm", std::string(to_string(c.algorithm))},
                 {"k", c.k},
                 {"mean", to_json(c.mean)},
                 {"per_scenario", std::move(per)},
                 {"improvement_percent", nullptr}};
    if (c.improvement_percent) cell["improvement_percent"] = *c.improvement_percent;
    cells.push_back(std::move(cell));
  }
  json runs = json::array();
  for (const SweepRun& r : result.runs)
    runs.push_back({{"scenario", result.scenarios.at(r.scenario)},
                    {"algorithm", std::string(to_string(r.algorithm))},
                    {"k", r.k},
                    {"seed", r.seed},
                    {"servers", r.servers},
                    {"fitness", to_json(r.fitness)},
                    {"termination", std::string(to_string(r.termination))},
                    {"trace_length", r.trace_length}});
  return {{"scenarios", result.scenarios},
          {"algorithms", std::move(algorithms)},
          {"k_values", result.k_values},
          {"seeds", result.seeds},
          {"metric", std::string(to_string(result.metric))},
          {"cells", std::move(cells)},
          {"runs", std::move(runs)}};
}

json to_json(const Saturation& s) {
  return {{"k", s.k}, {"saturated", s.saturated}, {"improvements", s.improvements}};
}

json to_json(const SimReport& r) {
  json servers = json::array();
  for (const ServerStats& s : r.per_server)
    servers.push_back(
        {{"server", s.server}, {"requests", s.requests}, {"hits", s.hits}, {"misses", s.misses}});
  return {{"cache_miss_ratio", r.cache_miss_ratio},
          {"average_request_distance", r.average_request_distance},
          {"total_requests", r.total_requests},
          {"hits", r.hits},
          {"misses", r.misses},
          {"per_server", std::move(servers)}};
}

std::string sweep_csv(const SweepResult& result) {
  std::string out = "k";
  for (Algorithm a : result.algorithms) out += "," + std::string(to_string(a));
  out += "\n";
  char buf[32];
  for (std::size_t k : result.k_values) {
    out += std::to_string(k);
    for (Algorithm a : result.algorithms) {
      std::snprintf(buf, sizeof buf, "%.10g", result.cell(a, k).mean.value(result.metric));
      out += ",";
      out += buf;
    }
    out += "\n";
  }
  return out;
}

}  // namespace mirrorplace
