#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "mirrorplace/errors.hpp"
#include "mirrorplace/io.hpp"

namespace mirrorplace {

using nlohmann::json;

namespace {

std::string where(std::string_view context, std::string_view key) {
  return std::string(context) + "." + std::string(key);
}

const json* field(const json& object, std::string_view key) {
  auto it = object.find(key);
  if (it == object.end() || it->is_null()) return nullptr;
  return &*it;
}

double get_number(const json& value, const std::string& path) {
  if (!value.is_number()) throw ValidationError(path + " must be a number");
  return value.get<double>();
}

std::optional<double> optional_number(const json& object, std::string_view key,
                                      std::string_view context) {
  const json* v = field(object, key);
  if (!v) return std::nullopt;
  return get_number(*v, where(context, key));
}

std::uint64_t get_unsigned(const json& value, const std::string& path) {
  if (value.is_number_unsigned()) return value.get<std::uint64_t>();
  if (value.is_number_integer() && value.get<std::int64_t>() >= 0)
    return static_cast<std::uint64_t>(value.get<std::int64_t>());
  throw ValidationError(path + " must be a non-negative integer");
}

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + byte, '\n'));
}

void put_optional(json& object, const char* key, const std::optional<double>& value) {
  if (value) object[key] = *value;
}

}  // namespace

Topology scenario_from_json(const json& doc) {
  if (!doc.is_object()) throw ValidationError("scenario must be a JSON object");
  std::string name;
  if (const json* v = field(doc, "name")) {
    if (!v->is_string()) throw ValidationError("scenario.name must be a string");
    name = v->get<std::string>();
  }

  const json* nodes_json = field(doc, "nodes");
  if (!nodes_json || !nodes_json->is_array()) throw ValidationError("scenario.nodes must be an array");
  std::vector<NodeRecord> nodes;
  for (std::size_t i = 0; i < nodes_json->size(); ++i) {
    const json& n = (*nodes_json)[i];
    const std::string ctx = "scenario.nodes[" + std::to_string(i) + "]";
    if (!n.is_object()) throw ValidationError(ctx + " must be an object");
    NodeRecord node;
    const json* id = field(n, "id");
    if (!id) throw ValidationError(ctx + ".id is required");
    node.id = get_unsigned(*id, ctx + ".id");
    if (const json* label = field(n, "label")) {
      if (!label->is_string()) throw ValidationError(ctx + ".label must be a string");
      node.label = label->get<std::string>();
    }
    node.latitude = optional_number(n, "lat", ctx);
    node.longitude = optional_number(n, "lon", ctx);
    if (node.latitude.has_value() != node.longitude.has_value())
      throw ValidationError(ctx + " must give both lat and lon or neither");
    if (const json* p = field(n, "priority")) node.priority = get_number(*p, ctx + ".priority");
    if (const json* c = field(n, "customer_count"))
      node.customer_count = get_unsigned(*c, ctx + ".customer_count");
    nodes.push_back(std::move(node));
  }
  std::stable_sort(nodes.begin(), nodes.end(),
                   [](const NodeRecord& a, const NodeRecord& b) { return a.id < b.id; });

  std::vector<EdgeRecord> edges;
  if (const json* edges_json = field(doc, "edges")) {
    if (!edges_json->is_array()) throw ValidationError("scenario.edges must be an array");
    for (std::size_t i = 0; i < edges_json->size(); ++i) {
      const json& e = (*edges_json)[i];
      const std::string ctx = "scenario.edges[" + std::to_string(i) + "]";
      if (!e.is_object()) throw ValidationError(ctx + " must be an object");
      EdgeRecord edge;
      const json* s = field(e, "source");
      const json* t = field(e, "target");
      if (!s || !t) throw ValidationError(ctx + " needs source and target");
      edge.source = get_unsigned(*s, ctx + ".source");
      edge.target = get_unsigned(*t, ctx + ".target");
      edge.bandwidth = optional_number(e, "bandwidth", ctx);
      edge.utilization = optional_number(e, "utilization", ctx);
      edge.delay = optional_number(e, "delay", ctx);
      edges.push_back(edge);
    }
  }

  QualityWeights weights;
  if (const json* d = field(doc, "defaults")) {
    if (!d->is_object()) throw ValidationError("scenario.defaults must be an object");
    if (auto v = optional_number(*d, "utilization", "scenario.defaults")) weights.utilization = *v;
    if (auto v = optional_number(*d, "delay", "scenario.defaults")) weights.delay = *v;
    if (auto v = optional_number(*d, "bandwidth", "scenario.defaults")) weights.bandwidth = *v;
  }
  return Topology(std::move(name), std::move(nodes), std::move(edges), weights);
}

json scenario_to_json(const Topology& topology) {
  json doc;
  doc["name"] = topology.name();
  json nodes = json::array();
  for (const NodeRecord& n : topology.nodes()) {
    json node;
    node["id"] = n.id;
    node["label"] = n.label;
    put_optional(node, "lat", n.latitude);
    put_optional(node, "lon", n.longitude);
    node["priority"] = n.priority;
    node["customer_count"] = n.customer_count;
    nodes.push_back(std::move(node));
  }
  json edges = json::array();
  for (const EdgeRecord& e : topology.edges()) {
    json edge;
    edge["source"] = e.source;
    edge["target"] = e.target;
    put_optional(edge, "bandwidth", e.bandwidth);
    put_optional(edge, "utilization", e.utilization);
    put_optional(edge, "delay", e.delay);
    edges.push_back(std::move(edge));
  }
  doc["nodes"] = std::move(nodes);
  doc["edges"] = std::move(edges);
  doc["defaults"] = {{"utilization", topology.weights().utilization},
                     {"delay", topology.weights().delay},
                     {"bandwidth", topology.weights().bandwidth}};
  return doc;
}

namespace {

json parse_json_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t line = line_of(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError(path.string() + ":" + std::to_string(line) + ": " + e.what(), line);
  }
}

}  // namespace

Topology load_scenario_file(const std::filesystem::path& path) {
  const json doc = parse_json_file(path);
  try {
    return scenario_from_json(doc);
  } catch (const DisconnectedGraphError&) {
    throw;
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void save_scenario_file(const Topology& topology, const std::filesystem::path& path) {
  write_text_file(path, scenario_to_json(topology).dump(2) + "\n");
}

Topology load_topology(const std::filesystem::path& path, const GraphmlOptions& options) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".graphml" || ext == ".xml") return import_graphml(path, options).topology;
  return load_scenario_file(path);
}

std::string config_hash(const json& config) {
  // nlohmann::json objects are key-sorted, so dump() is canonical.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

template <class T>
void read_into(const json& object, std::string_view key, T& target, const std::string& context) {
  const json* v = field(object, key);
  if (!v) return;
  const std::string path = where(context, key);
  if constexpr (std::is_same_v<T, bool>) {
    if (!v->is_boolean()) throw ValidationError(path + " must be a boolean");
    target = v->get<bool>();
  } else if constexpr (std::is_integral_v<T>) {
    target = static_cast<T>(get_unsigned(*v, path));
  } else {
    target = get_number(*v, path);
  }
}

const json& section(const json& doc, std::string_view key) {
  static const json empty = json::object();
  const json* v = field(doc, key);
  if (!v) return empty;
  if (!v->is_object()) throw ValidationError("config." + std::string(key) + " must be an object");
  return *v;
}

}  // namespace

void apply_config(const json& doc, AlgorithmConfig& config) {
  if (!doc.is_object()) throw ValidationError("config must be a JSON object");
  const json& d = section(doc, "dragoon");
  read_into(d, "max_iterations", config.dragoon.max_iterations, "config.dragoon");
  read_into(d, "weighted_orientation", config.dragoon.weighted_orientation, "config.dragoon");
  read_into(d, "weighted_first_server", config.dragoon.weighted_first_server, "config.dragoon");

  read_into(section(doc, "monte_carlo"), "trials", config.monte_carlo.trials, "config.monte_carlo");

  const json& g = section(doc, "genetic");
  read_into(g, "population_size", config.genetic.population_size, "config.genetic");
  read_into(g, "generations", config.genetic.generations, "config.genetic");
  read_into(g, "mutation_rate", config.genetic.mutation_rate, "config.genetic");
  read_into(g, "crossover_rate", config.genetic.crossover_rate, "config.genetic");
  read_into(g, "tournament_size", config.genetic.tournament_size, "config.genetic");
  read_into(g, "elitism", config.genetic.elitism, "config.genetic");

  const json& k = section(doc, "kmeans");
  read_into(k, "restarts", config.kmeans.restarts, "config.kmeans");
  read_into(k, "max_iterations", config.kmeans.max_iterations, "config.kmeans");
  if (const json* m = field(k, "mapping_mode")) {
    const std::string s = m->is_string() ? m->get<std::string>() : "";
    if (s == "every_step") config.kmeans.mapping_mode = MappingMode::every_step;
    else if (s == "at_end") config.kmeans.mapping_mode = MappingMode::at_end;
    else throw ValidationError("config.kmeans.mapping_mode must be every_step or at_end");
  }
  if (const json* m = field(k, "space")) {
    const std::string s = m->is_string() ? m->get<std::string>() : "";
    if (s == "graph") config.kmeans.space = KMeansSpace::graph;
    else if (s == "coordinates") config.kmeans.space = KMeansSpace::coordinates;
    else throw ValidationError("config.kmeans.space must be graph or coordinates");
  }

  if (const json* f = field(doc, "fixed_servers")) {
    if (!f->is_array()) throw ValidationError("config.fixed_servers must be an array");
    config.fixed_servers.clear();
    for (const json& id : *f) config.fixed_servers.push_back(get_unsigned(id, "config.fixed_servers"));
  }
  if (const json* s = field(doc, "secondary_metric")) {
    auto m = s->is_string() ? parse_metric(s->get<std::string>()) : std::nullopt;
    if (!m) throw ValidationError("config.secondary_metric must be one of max, q95, median, mean");
    config.criteria.secondary = *m;
  }
}

void apply_config(const json& doc, SimulationConfig& sim, ProfileOptions& profiles) {
  if (!doc.is_object()) throw ValidationError("config must be a JSON object");
  const json& s = section(doc, "simulation");
  read_into(s, "rounds", sim.rounds, "config.simulation");
  read_into(s, "cache_capacity", sim.cache_capacity, "config.simulation");
  read_into(s, "p_none", sim.p_none, "config.simulation");
  read_into(s, "p_profile", sim.p_profile, "config.simulation");
  read_into(s, "p_novel", sim.p_novel, "config.simulation");

  const json& p = section(doc, "profiles");
  read_into(p, "catalog_size", profiles.catalog_size, "config.profiles");
  read_into(p, "alpha", profiles.alpha, "config.profiles");
  read_into(p, "similarity", profiles.similarity, "config.profiles");
  read_into(p, "camps", profiles.camps, "config.profiles");
  if (const json* l = field(p, "layout")) {
    const std::string v = l->is_string() ? l->get<std::string>() : "";
    if (v == "regional") profiles.layout = CampLayout::regional;
    else if (v == "scattered") profiles.layout = CampLayout::scattered;
    else throw ValidationError("config.profiles.layout must be regional or scattered");
  }
}

json config_to_json(const AlgorithmConfig& c) {
  json doc;
  doc["algorithm"] = std::string(to_string(c.algorithm));
  doc["seed"] = c.seed;
  doc["k"] = c.k;
  doc["fixed_servers"] = c.fixed_servers;
  doc["criteria"] = {{"primary", std::string(to_string(c.criteria.primary))},
                     {"secondary", std::string(to_string(c.criteria.secondary))}};
  switch (c.algorithm) {
    case Algorithm::dragoon:
      doc["dragoon"] = {{"max_iterations", c.dragoon.max_iterations},
                        {"weighted_orientation", c.dragoon.weighted_orientation},
                        {"weighted_first_server", c.dragoon.weighted_first_server}};
      break;
    case Algorithm::monte_carlo:
      doc["monte_carlo"] = {{"trials", c.monte_carlo.trials}};
      break;
    case Algorithm::genetic:
      doc["genetic"] = {{"population_size", c.genetic.population_size},
                        {"generations", c.genetic.generations},
                        {"mutation_rate", c.genetic.mutation_rate},
                        {"crossover_rate", c.genetic.crossover_rate},
                        {"tournament_size", c.genetic.tournament_size},
                        {"elitism", c.genetic.elitism}};
      break;
    case Algorithm::macqueen:
    case Algorithm::kmeans_pp:
      doc["kmeans"] = {
          {"restarts", c.kmeans.restarts},
          {"max_iterations", c.kmeans.max_iterations},
          {"mapping_mode", c.kmeans.mapping_mode == MappingMode::every_step ? "every_step" : "at_end"},
          {"space", c.kmeans.space == KMeansSpace::graph ? "graph" : "coordinates"}};
      break;
    case Algorithm::two_approx:
    case Algorithm::greedy:
      break;
  }
  return doc;
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace mirrorplace
