#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mirrorplace/analysis.hpp"
#include "mirrorplace/caching_sim.hpp"
#include "mirrorplace/objective.hpp"
#include "mirrorplace/placement.hpp"
#include "mirrorplace/topology.hpp"

namespace mirrorplace {

// Native scenario files ----------------------------------------------------

/// {name, nodes: [{id, label, lat, lon, priority, customer_count}],
///  edges: [{source, target, bandwidth, utilization, delay}],
///  defaults: {utilization, delay, bandwidth}}. Optional fields may be
/// absent or null. Throws ValidationError on schema violations.
Topology scenario_from_json(const nlohmann::json& doc);
nlohmann::json scenario_to_json(const Topology& topology);

/// Parses a scenario JSON file; ParseError carries the line of a syntax error.
Topology load_scenario_file(const std::filesystem::path& path);
void save_scenario_file(const Topology& topology, const std::filesystem::path& path);

// GraphML --------------------------------------------------------------------

struct GraphmlOptions {
  /// Adds a great-circle delay term to every edge whose endpoints both carry
  /// coordinates. Off by default: all lengths are then exactly one hop.
  bool euclidean_lengths = false;
  QualityWeights weights;
};

struct GraphmlImport {
  Topology topology;
  std::vector<std::string> warnings;
  std::size_t dropped_nodes = 0;    // outside the largest component
  std::size_t collapsed_edges = 0;  // duplicates and self-loops removed
};

/// Topology Zoo style GraphML (node keys `label`, `Latitude`, `Longitude`).
/// Optional edge keys `bandwidth`, `utilization` and `delay` are honored.
/// Parallel edges collapse to the one with the smallest virtual length and
/// self-loops are dropped. Only the largest connected component is kept.
GraphmlImport import_graphml(const std::filesystem::path& path, const GraphmlOptions& options = {});
GraphmlImport import_graphml_text(std::string_view text, std::string name,
                                  const GraphmlOptions& options = {});

/// Dispatches on the extension: `.graphml` or `.xml` imports GraphML (warnings
/// are discarded), anything else is read as a scenario JSON file.
Topology load_topology(const std::filesystem::path& path, const GraphmlOptions& options = {});

// GeoJSON --------------------------------------------------------------------

/// FeatureCollection with one Point per node (role server or customer,
/// priority, label) and one LineString per customer-to-server assignment.
/// Throws ValidationError listing the nodes without coordinates.
nlohmann::json to_geojson(const Topology& topology, const Placement& placement);
void export_geojson(const Topology& topology, const Placement& placement,
                    const std::filesystem::path& path);

// Result serialization -------------------------------------------------------

nlohmann::json to_json(const FitnessReport& report);
nlohmann::json to_json(const Placement& placement);
nlohmann::json to_json(const RunTrace& trace);
nlohmann::json to_json(const SweepResult& result);
nlohmann::json to_json(const Saturation& saturation);
nlohmann::json to_json(const SimReport& report);

/// Table of mean primary-metric values: one row per k, one column per algorithm.
std::string sweep_csv(const SweepResult& result);

/// Hex FNV-1a digest of the canonical (sorted-key, compact) JSON dump.
std::string config_hash(const nlohmann::json& config);

/// Reads AlgorithmConfig parameter overrides from a JSON object, e.g.
/// {"dragoon": {"max_iterations": 50}, "genetic": {"population_size": 40}}.
void apply_config(const nlohmann::json& doc, AlgorithmConfig& config);
void apply_config(const nlohmann::json& doc, SimulationConfig& sim, ProfileOptions& profiles);
nlohmann::json config_to_json(const AlgorithmConfig& config);

/// Writes `content` to `path`, creating parent directories.
void write_text_file(const std::filesystem::path& path, std::string_view content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace mirrorplace
