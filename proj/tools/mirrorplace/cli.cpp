#include "mirrorplace/cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mirrorplace/analysis.hpp"
#include "mirrorplace/caching_sim.hpp"
#include "mirrorplace/errors.hpp"
#include "mirrorplace/exact_oracle.hpp"
#include "mirrorplace/io.hpp"
#include "mirrorplace/placement.hpp"
#include "mirrorplace/rng.hpp"

namespace mirrorplace::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  std::string metric = "max";
  std::string config_path;
  std::string out_dir;
  bool euclidean = false;
};

struct Common {
  std::string scenario;
  std::string algorithm = "dragoon";
  std::size_t k = 1;
  std::vector<std::size_t> fixed;
  bool customer_weighted = false;
};

std::string algorithm_list() {
  std::string names;
  for (Algorithm a : kAllAlgorithms) names += (names.empty() ? "" : ", ") + std::string(to_string(a));
  return names;
}

Algorithm algorithm_from(const std::string& text) {
  if (auto a = parse_algorithm(text)) return *a;
  throw ValidationError("unknown algorithm '" + text + "'; valid algorithms: " + algorithm_list());
}

Metric metric_from(const std::string& text) {
  if (auto m = parse_metric(text)) return *m;
  throw ValidationError("unknown metric '" + text + "'; valid metrics: max, q95, median, mean");
}

// "1,2,5" or "1-30" or a mix such as "1-5,10,20".
std::vector<std::size_t> parse_k_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::size_t pos = 0;
  auto number = [&](const std::string& part) -> std::size_t {
    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
      throw ValidationError("bad k list '" + text + "'");
    return std::stoull(part);
  };
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = text.substr(pos, comma - pos);
    const std::size_t dash = item.find('-');
    if (dash == std::string::npos) {
      out.push_back(number(item));
    } else {
      const std::size_t lo = number(item.substr(0, dash));
      const std::size_t hi = number(item.substr(dash + 1));
      if (lo > hi) throw ValidationError("bad k range '" + item + "'");
      for (std::size_t k = lo; k <= hi; ++k) out.push_back(k);
    }
    pos = comma + 1;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

json load_config_file(const Globals& g) {
  if (g.config_path.empty()) return json::object();
  const std::string text = read_text_file(g.config_path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(g.config_path + ": " + e.what());
  }
}

Topology load(const Globals& g, const std::string& path) {
  if (path.empty()) throw ValidationError("--scenario is required");
  return load_topology(path, GraphmlOptions{g.euclidean, {}});
}

Instance make_instance(const Topology& topology, const Common& c) {
  Instance instance(topology);
  if (c.customer_weighted) instance.set_customer_counts(topology.customer_counts());
  return instance;
}

AlgorithmConfig make_config(const Globals& g, const Common& c, const json& file) {
  AlgorithmConfig config;
  apply_config(file, config);
  config.algorithm = algorithm_from(c.algorithm);
  config.criteria.primary = metric_from(g.metric);
  config.seed = g.seed;
  config.k = c.k;
  if (!c.fixed.empty()) config.fixed_servers = c.fixed;
  return config;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json metadata(const Globals& g, const json& config, bool timestamp) {
  json meta = {{"seed", g.seed}, {"config_hash", config_hash(config)}, {"config", config}};
  if (timestamp) meta["timestamp"] = utc_timestamp();
  return meta;
}

// Writes to <out>/<name> when --out is set, otherwise to stdout.
void emit(const Globals& g, const std::string& name, const std::string& content, std::ostream& out,
          std::ostream& err) {
  if (g.out_dir.empty()) {
    out << content;
    return;
  }
  const fs::path path = fs::path(g.out_dir) / name;
  write_text_file(path, content);
  err << "wrote " << path.string() << "\n";
}

std::string pretty(const json& doc) { return doc.dump(2) + "\n"; }

void add_common(CLI::App* cmd, Common& c, bool with_algorithm = true) {
  cmd->add_option("--scenario,-s", c.scenario, "Scenario JSON or GraphML file")->required();
  cmd->add_option("--k,-k", c.k, "Number of mirror servers");
  if (with_algorithm) {
    cmd->add_option("--algo,-a", c.algorithm, "Algorithm: " + algorithm_list());
    cmd->add_option("--fixed", c.fixed, "Server ids that must stay in place")->delimiter(',');
  }
  cmd->add_flag("--customer-weighted", c.customer_weighted,
                "Weight quantile/median/mean by each node's customer count");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mirror server placement on network topologies"};
  app.name("mirrorplace");
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Root seed for every random stream");
  app.add_option("--metric", g.metric, "Primary metric: max, q95, median, mean");
  app.add_option("--config", g.config_path, "JSON file with algorithm/simulation parameters");
  app.add_option("--out", g.out_dir, "Output directory (default: standard output)");
  app.add_flag("--euclidean", g.euclidean, "GraphML import: add great-circle length to edges");

  // place
  Common place_opts;
  bool place_trace = false;
  bool place_timestamp = false;
  auto* place = app.add_subcommand("place", "Run one algorithm on one scenario");
  add_common(place, place_opts);
  place->add_flag("--trace", place_trace, "Include the per-iteration trace");
  place->add_flag("--timestamp", place_timestamp, "Record the wall-clock time in the report");

  // sweep
  std::vector<std::string> sweep_scenarios;
  std::vector<std::string> sweep_algos;
  std::string sweep_k = "1,2,3,5,10,15,20,30";
  std::size_t sweep_runs = 10;
  std::size_t sweep_threads = 0;
  bool sweep_customer = false;
  auto* sweep_cmd = app.add_subcommand("sweep", "Every algorithm over a list of k (CSV rows = k)");
  sweep_cmd->add_option("--scenario,-s", sweep_scenarios, "Scenario files (repeatable)")->required();
  sweep_cmd->add_option("--algo,-a", sweep_algos, "Algorithms (default: all)")->delimiter(',');
  sweep_cmd->add_option("--k", sweep_k, "k values, e.g. 1-30 or 1,2,5");
  sweep_cmd->add_option("--runs", sweep_runs, "Seeds per randomized algorithm");
  sweep_cmd->add_option("--threads", sweep_threads, "Worker threads (0: all cores)");
  sweep_cmd->add_flag("--customer-weighted", sweep_customer, "Weight by customer counts");

  // oracle
  Common oracle_opts;
  std::size_t oracle_runs = 20;
  std::uint64_t oracle_budget = kDefaultOracleBudget;
  auto* oracle = app.add_subcommand("oracle", "Exact optimum and the Two-Approx bound check");
  add_common(oracle, oracle_opts, false);
  oracle->add_option("--runs", oracle_runs, "Two-Approx seeds to check");
  oracle->add_option("--budget", oracle_budget, "Maximum number of k-subsets to enumerate");

  // emit-ilp
  Common ilp_opts;
  auto* ilp = app.add_subcommand("emit-ilp", "Write the k-center integer program in LP format");
  add_common(ilp, ilp_opts, false);

  // simulate-cache
  Common cache_opts;
  std::string cache_objective = "distance";
  std::optional<std::size_t> cache_camps;
  std::optional<double> cache_similarity;
  std::string cache_layout;
  auto* cache = app.add_subcommand("simulate-cache", "LFU caching simulation of a placement");
  add_common(cache, cache_opts);
  cache->add_option("--objective", cache_objective, "distance or profile")
      ->check(CLI::IsMember({"distance", "profile"}));
  cache->add_option("--camps", cache_camps, "Number of profile camps");
  cache->add_option("--similarity", cache_similarity, "Within-camp profile similarity in [0,1]");
  cache->add_option("--layout", cache_layout, "regional or scattered camps")
      ->check(CLI::IsMember({"regional", "scattered"}));

  // saturation
  Common sat_opts;
  std::string sat_k;
  double sat_threshold = 1.0;
  auto* sat = app.add_subcommand("saturation", "Smallest k after which gains stay below a threshold");
  add_common(sat, sat_opts);
  sat->add_option("--k-range", sat_k, "k values (default 1-min(n,50))");
  sat->add_option("--threshold", sat_threshold, "Improvement threshold in percent");

  // servers-needed
  Common need_opts;
  double need_limit = 0.0;
  bool need_exact = false;
  auto* need = app.add_subcommand("servers-needed", "Fewest servers meeting a maximum-distance limit");
  add_common(need, need_opts);
  need->add_option("--limit", need_limit, "Maximum weighted distance allowed")->required();
  need->add_flag("--exact", need_exact, "Answer with the exhaustive oracle");

  // export-geojson
  Common geo_opts;
  auto* geo = app.add_subcommand("export-geojson", "Place servers and write a GeoJSON map");
  add_common(geo, geo_opts);

  // convert
  std::string convert_input;
  auto* convert = app.add_subcommand("convert", "Convert GraphML into a scenario JSON file");
  convert->add_option("--input,-i", convert_input, "GraphML file")->required();

  std::vector<const char*> argv{"mirrorplace"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    for (CLI::App* sub : app.get_subcommands()) {
      err << sub->help();
      return 1;
    }
    err << app.help();
    return 1;
  }

  try {
    const json file_config = load_config_file(g);

    if (*place) {
      const Topology topo = load(g, place_opts.scenario);
      const Instance instance = make_instance(topo, place_opts);
      const AlgorithmConfig config = make_config(g, place_opts, file_config);
      const PlacementResult result = run_algorithm(instance, config);
      json report = {{"command", "place"},
                     {"scenario", topo.name()},
                     {"metadata", metadata(g, config_to_json(config), place_timestamp)},
                     {"placement", to_json(result.placement)},
                     {"termination", std::string(to_string(result.trace.termination))}};
      if (place_trace) report["trace"] = to_json(result.trace);
      emit(g, "placement.json", pretty(report), out, err);
    } else if (*sweep_cmd) {
      std::vector<Scenario> scenarios;
      for (const std::string& path : sweep_scenarios) {
        Scenario s = make_scenario(load(g, path));
        if (sweep_customer) s.instance.set_customer_counts(s.topology.customer_counts());
        scenarios.push_back(std::move(s));
      }
      std::vector<AlgorithmConfig> configs;
      if (sweep_algos.empty())
        for (Algorithm a : kAllAlgorithms) sweep_algos.emplace_back(to_string(a));
      for (const std::string& name : sweep_algos) {
        Common c;
        c.algorithm = name;
        configs.push_back(make_config(g, c, file_config));
      }
      if (sweep_runs == 0) throw ValidationError("--runs must be positive");
      std::vector<std::uint64_t> seeds;
      for (std::size_t i = 0; i < sweep_runs; ++i) seeds.push_back(derive_seed(g.seed, "sweep", i));
      const std::vector<std::size_t> ks = parse_k_list(sweep_k);
      const SweepResult result = sweep(scenarios, configs, ks, seeds, {sweep_threads});
      json config = {{"algorithms", json::array()}, {"k", ks}, {"runs", sweep_runs}};
      for (const AlgorithmConfig& c : configs) config["algorithms"].push_back(config_to_json(c));
      json report = {{"command", "sweep"},
                     {"metadata", metadata(g, config, false)},
                     {"result", to_json(result)}};
      if (g.out_dir.empty()) {
        out << pretty(report);
      } else {
        emit(g, "sweep.json", pretty(report), out, err);
        emit(g, "sweep.csv", sweep_csv(result), out, err);
      }
    } else if (*oracle) {
      const Topology topo = load(g, oracle_opts.scenario);
      const Instance instance = make_instance(topo, oracle_opts);
      const OracleResult exact =
          brute_force_optimum(instance.dist(), instance.priorities(), oracle_opts.k, oracle_budget);
      const double opt = exact.optimum;
      bool holds = true;
      json runs = json::array();
      if (oracle_runs == 0) throw ValidationError("--runs must be positive");
      for (std::size_t i = 0; i < oracle_runs; ++i) {
        Common c = oracle_opts;
        c.algorithm = "two-approx";
        AlgorithmConfig config = make_config(g, c, file_config);
        config.seed = derive_seed(g.seed, "oracle", i);
        const Placement p = run_algorithm(instance, config).placement;
        const double s = p.fitness.maximum;
        const bool ok = s / 2.0 <= opt && opt <= s && s <= 2.0 * opt;
        holds = holds && ok;
        runs.push_back({{"seed", config.seed}, {"servers", p.servers}, {"maximum", s}, {"within_bound", ok}});
      }
      Common d = oracle_opts;
      d.algorithm = "dragoon";
      const Placement dp = run_algorithm(instance, make_config(g, d, file_config)).placement;
      json report = {{"command", "oracle"},
                     {"scenario", topo.name()},
                     {"k", oracle_opts.k},
                     {"optimum", opt},
                     {"optimal_servers", exact.placement.servers},
                     {"subsets_visited", exact.subsets_visited},
                     {"two_approx", std::move(runs)},
                     {"dragoon", {{"servers", dp.servers}, {"maximum", dp.fitness.maximum}}},
                     {"bound_holds", holds}};
      emit(g, "oracle.json", pretty(report), out, err);
    } else if (*ilp) {
      const Topology topo = load(g, ilp_opts.scenario);
      const Instance instance(topo);
      if (ilp_opts.k < 1 || ilp_opts.k > instance.size())
        throw ValidationError("k must be between 1 and " + std::to_string(instance.size()));
      emit(g, "model.lp", emit_ilp(instance.dist(), instance.priorities(), ilp_opts.k), out, err);
    } else if (*cache) {
      const Topology topo = load(g, cache_opts.scenario);
      const Instance instance = make_instance(topo, cache_opts);
      const AlgorithmConfig config = make_config(g, cache_opts, file_config);
      SimulationConfig sim;
      ProfileOptions profile_options;
      apply_config(file_config, sim, profile_options);
      if (cache_camps) profile_options.camps = *cache_camps;
      if (cache_similarity) profile_options.similarity = *cache_similarity;
      if (cache_layout == "regional") profile_options.layout = CampLayout::regional;
      if (cache_layout == "scattered") profile_options.layout = CampLayout::scattered;
      profile_options.seed = derive_seed(g.seed, "profiles");
      sim.seed = derive_seed(g.seed, "simulation");
      const ProfileSet profiles = generate_profiles(instance.dist(), profile_options);
      Placement placement = run_algorithm(instance, config).placement;
      if (cache_objective == "profile")
        placement = optimize_profile_assignment(instance.dist(), instance.priorities(), profiles,
                                                placement);
      const SimReport report = run_simulation(instance.dist(), placement, profiles, sim);
      json doc = {{"command", "simulate-cache"},
                  {"scenario", topo.name()},
                  {"objective", cache_objective},
                  {"metadata", metadata(g, config_to_json(config), false)},
                  {"placement", to_json(placement)},
                  {"within_cluster_correlation",
                   within_cluster_correlation(placement.assignment, profiles)},
                  {"report", to_json(report)}};
      emit(g, "cache.json", pretty(doc), out, err);
    } else if (*sat) {
      const Topology topo = load(g, sat_opts.scenario);
      const Instance instance = make_instance(topo, sat_opts);
      AlgorithmConfig config = make_config(g, sat_opts, file_config);
      const std::vector<std::size_t> ks =
          sat_k.empty() ? parse_k_list("1-" + std::to_string(std::min<std::size_t>(instance.size(), 50)))
                        : parse_k_list(sat_k);
      std::vector<double> values;
      for (std::size_t k : ks) {
        config.k = k;
        values.push_back(run_algorithm(instance, config).placement.fitness.value(config.criteria.primary));
      }
      const Saturation s = saturation_point(ks, values, sat_threshold);
      json doc = {{"command", "saturation"},
                  {"scenario", topo.name()},
                  {"algorithm", std::string(to_string(config.algorithm))},
                  {"metric", std::string(to_string(config.criteria.primary))},
                  {"threshold_percent", sat_threshold},
                  {"k_values", ks},
                  {"values", values},
                  {"saturation", to_json(s)},
                  {"server_fraction", static_cast<double>(s.k) / static_cast<double>(instance.size())}};
      emit(g, "saturation.json", pretty(doc), out, err);
    } else if (*need) {
      const Topology topo = load(g, need_opts.scenario);
      const Instance instance = make_instance(topo, need_opts);
      const AlgorithmConfig config = make_config(g, need_opts, file_config);
      const std::size_t k = need_exact
                                ? servers_needed_exact(instance.dist(), instance.priorities(), need_limit)
                                : servers_needed(instance, config, need_limit);
      json doc = {{"command", "servers-needed"},
                  {"scenario", topo.name()},
                  {"limit", need_limit},
                  {"method", need_exact ? "exact" : std::string(to_string(config.algorithm))},
                  {"servers", k}};
      emit(g, "servers_needed.json", pretty(doc), out, err);
    } else if (*geo) {
      const Topology topo = load(g, geo_opts.scenario);
      const Instance instance = make_instance(topo, geo_opts);
      const Placement placement = run_algorithm(instance, make_config(g, geo_opts, file_config)).placement;
      emit(g, "placement.geojson", pretty(to_geojson(topo, placement)), out, err);
    } else if (*convert) {
      const GraphmlImport imported = import_graphml(convert_input, GraphmlOptions{g.euclidean, {}});
      for (const std::string& w : imported.warnings) err << "warning: " << w << "\n";
      emit(g, imported.topology.name() + ".json", pretty(scenario_to_json(imported.topology)), out, err);
    }
    return 0;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace mirrorplace::cli
