#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <unordered_map>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "mirrorplace/errors.hpp"
#include "mirrorplace/io.hpp"

namespace mirrorplace {

namespace pt = boost::property_tree;

namespace {

struct KeyInfo {
  std::string domain;  // node, edge, graph or all
  std::string name;
};

// Looked up by iteration: attribute names such as "attr.name" contain the
// property_tree path separator.
std::string attribute(const pt::ptree& element, const std::string& name) {
  const auto attrs = element.get_child_optional("<xmlattr>");
  if (!attrs) return "";
  for (const auto& [key, value] : *attrs)
    if (key == name) return value.data();
  return "";
}

std::optional<double> parse_double(const std::string& text, const std::string& context) {
  std::string trimmed = text;
  trimmed.erase(0, trimmed.find_first_not_of(" \t\r\n"));
  trimmed.erase(trimmed.find_last_not_of(" \t\r\n") + 1);
  if (trimmed.empty()) return std::nullopt;
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(trimmed, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != trimmed.size() || !std::isfinite(value))
    throw ValidationError(context + ": '" + text + "' is not a number");
  return value;
}

// Attribute values of one <node>/<edge>, keyed by attr.name.
std::map<std::string, std::string> data_values(const pt::ptree& element,
                                               const std::unordered_map<std::string, KeyInfo>& keys,
                                               const std::string& domain) {
  std::map<std::string, std::string> out;
  for (const auto& [tag, child] : element) {
    if (tag != "data") continue;
    const std::string id = attribute(child, "key");
    auto it = keys.find(id);
    if (it == keys.end()) continue;
    if (it->second.domain != domain && it->second.domain != "all") continue;
    out[it->second.name] = child.get_value<std::string>();
  }
  return out;
}

double great_circle_km(double lat1, double lon1, double lat2, double lon2) {
  constexpr double radius = 6371.0;
  const double rad = std::numbers::pi / 180.0;
  const double dlat = (lat2 - lat1) * rad;
  const double dlon = (lon2 - lon1) * rad;
  const double a = std::sin(dlat / 2) * std::sin(dlat / 2) +
                   std::cos(lat1 * rad) * std::cos(lat2 * rad) * std::sin(dlon / 2) * std::sin(dlon / 2);
  return 2.0 * radius * std::asin(std::min(1.0, std::sqrt(a)));
}

}  // namespace

GraphmlImport import_graphml_text(std::string_view text, std::string name,
                                  const GraphmlOptions& options) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(text)};
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    throw ParseError(name + ":" + std::to_string(e.line()) + ": malformed XML: " + e.message(),
                     e.line());
  }
  const auto root = tree.get_child_optional("graphml");
  if (!root) throw ValidationError(name + ": no <graphml> root element");

  std::unordered_map<std::string, KeyInfo> keys;
  const pt::ptree* graph = nullptr;
  for (const auto& [tag, child] : *root) {
    if (tag == "key") {
      keys[attribute(child, "id")] = {attribute(child, "for"), attribute(child, "attr.name")};
    } else if (tag == "graph" && !graph) {
      graph = &child;
    }
  }
  if (!graph) throw ValidationError(name + ": no <graph> element");

  std::vector<std::string> warnings;
  std::size_t dropped_nodes = 0;

  std::vector<NodeRecord> nodes;
  std::unordered_map<std::string, NodeId> index;
  for (const auto& [tag, child] : *graph) {
    if (tag != "node") continue;
    const std::string xml_id = attribute(child, "id");
    if (xml_id.empty()) throw ValidationError(name + ": <node> without id");
    if (!index.emplace(xml_id, nodes.size()).second)
      throw ValidationError(name + ": duplicate node id '" + xml_id + "'");
    const auto data = data_values(child, keys, "node");
    NodeRecord node;
    node.id = nodes.size();
    auto label = data.find("label");
    node.label = label != data.end() ? label->second : xml_id;
    const std::string ctx = name + ": node '" + xml_id + "'";
    if (auto it = data.find("Latitude"); it != data.end()) node.latitude = parse_double(it->second, ctx);
    if (auto it = data.find("Longitude"); it != data.end()) node.longitude = parse_double(it->second, ctx);
    if (!node.has_coordinates()) {
      node.latitude.reset();
      node.longitude.reset();
    }
    nodes.push_back(std::move(node));
  }
  if (nodes.empty()) throw ValidationError(name + ": graph has no nodes");

  std::vector<EdgeRecord> raw;
  std::size_t self_loops = 0;
  std::size_t unlocated_edges = 0;
  for (const auto& [tag, child] : *graph) {
    if (tag != "edge") continue;
    const std::string s = attribute(child, "source");
    const std::string t = attribute(child, "target");
    auto si = index.find(s);
    auto ti = index.find(t);
    if (si == index.end() || ti == index.end())
      throw ValidationError(name + ": edge " + s + "-" + t + " references an unknown node");
    if (si->second == ti->second) {
      ++self_loops;
      continue;
    }
    const auto data = data_values(child, keys, "edge");
    const std::string ctx = name + ": edge " + s + "-" + t;
    EdgeRecord edge;
    edge.source = std::min(si->second, ti->second);
    edge.target = std::max(si->second, ti->second);
    if (auto it = data.find("bandwidth"); it != data.end()) edge.bandwidth = parse_double(it->second, ctx);
    if (auto it = data.find("utilization"); it != data.end())
      edge.utilization = parse_double(it->second, ctx);
    if (auto it = data.find("delay"); it != data.end()) edge.delay = parse_double(it->second, ctx);
    if (options.euclidean_lengths && !edge.delay) {
      const NodeRecord& a = nodes[edge.source];
      const NodeRecord& b = nodes[edge.target];
      if (a.has_coordinates() && b.has_coordinates())
        edge.delay = great_circle_km(*a.latitude, *a.longitude, *b.latitude, *b.longitude);
      else
        ++unlocated_edges;
    }
    validate_edge(edge, raw.size());
    raw.push_back(edge);
  }
  if (self_loops)
    warnings.push_back("dropped " + std::to_string(self_loops) + " self-loop(s)");
  if (unlocated_edges)
    warnings.push_back(std::to_string(unlocated_edges) +
                           " edge(s) touch unlocated nodes and keep hop length");

  // Collapse parallel edges to the shortest one.
  const LinkScale scale = link_scale(raw);
  std::map<std::pair<NodeId, NodeId>, std::pair<double, EdgeRecord>> best;
  std::size_t duplicates = 0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const double length = compute_virtual_length(raw[i], options.weights, scale, i);
    auto [it, inserted] = best.try_emplace({raw[i].source, raw[i].target}, length, raw[i]);
    if (!inserted) {
      ++duplicates;
      if (length < it->second.first) it->second = {length, raw[i]};
    }
  }
  if (duplicates)
    warnings.push_back("collapsed " + std::to_string(duplicates) + " parallel edge(s)");
  std::vector<EdgeRecord> edges;
  for (auto& [key, entry] : best) edges.push_back(entry.second);

  // Keep the largest component (first such one on ties).
  const auto components = connected_components(nodes.size(), edges);
  std::size_t keep = 0;
  for (std::size_t c = 1; c < components.size(); ++c)
    if (components[c].size() > components[keep].size()) keep = c;
  if (components.size() > 1) {
    std::vector<NodeId> remap(nodes.size(), nodes.size());
    std::vector<NodeRecord> kept_nodes;
    for (NodeId id : components[keep]) {
      remap[id] = kept_nodes.size();
      kept_nodes.push_back(nodes[id]);
      kept_nodes.back().id = remap[id];
    }
    std::vector<EdgeRecord> kept_edges;
    for (EdgeRecord e : edges) {
      if (remap[e.source] == nodes.size()) continue;
      e.source = remap[e.source];
      e.target = remap[e.target];
      kept_edges.push_back(e);
    }
    dropped_nodes = nodes.size() - kept_nodes.size();
    warnings.push_back("graph has " + std::to_string(components.size()) +
                           " components; kept the largest (" + std::to_string(kept_nodes.size()) +
                           " nodes), dropped " + std::to_string(dropped_nodes) + " node(s)");
    nodes = std::move(kept_nodes);
    edges = std::move(kept_edges);
  }

  return GraphmlImport{Topology(std::move(name), std::move(nodes), std::move(edges), options.weights),
                       std::move(warnings), dropped_nodes, duplicates + self_loops};
}

GraphmlImport import_graphml(const std::filesystem::path& path, const GraphmlOptions& options) {
  return import_graphml_text(read_text_file(path), path.stem().string(), options);
}

}  // namespace mirrorplace
