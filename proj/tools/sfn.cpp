// sfn: build scale-free networks, cluster them and report degree statistics.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sfn/centralized.hpp"
#include "sfn/graph.hpp"
#include "sfn/metrics.hpp"
#include "sfn/powerlaw.hpp"
#include "sfn/protocol.hpp"
#include "sfn/report.hpp"
#include "sfn/sfn_rewire.hpp"
#include "sfn/simnet.hpp"

namespace {

using sfn::NodeId;

/// "1400" or "1.4N".
std::uint64_t parse_iters(const std::string& text, std::size_t n) {
  if (!text.empty() && (text.back() == 'N' || text.back() == 'n')) {
    const double mult = std::stod(text.substr(0, text.size() - 1));
    if (!(mult > 0.0)) throw std::invalid_argument("--iters multiplier must be positive");
    return sfn::iterations_for(mult, n);
  }
  std::size_t used = 0;
  const unsigned long long v = std::stoull(text, &used);
  if (used != text.size() || v == 0) throw std::invalid_argument("--iters: expected a count or a multiple like 1.4N");
  return v;
}

std::vector<std::uint64_t> parse_checkpoints(const std::string& text, std::size_t n) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_iters(item, n));
  std::sort(out.begin(), out.end());
  return out;
}

/// "a..b" inclusive.
std::pair<std::uint64_t, std::uint64_t> parse_seed_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) throw std::invalid_argument("--seeds: expected a..b");
  const std::uint64_t a = std::stoull(text.substr(0, dots));
  const std::uint64_t b = std::stoull(text.substr(dots + 2));
  if (b < a) throw std::invalid_argument("--seeds: empty range");
  return {a, b};
}

sfn::DelayModel parse_delay(const std::string& text, std::uint64_t seed) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() == 2 && parts[0] == "fixed") return sfn::DelayModel::fixed(std::stod(parts[1]));
  if (parts.size() == 3 && parts[0] == "uniform") {
    return sfn::DelayModel::uniform(std::stod(parts[1]), std::stod(parts[2]), seed);
  }
  throw std::invalid_argument("--delay: expected fixed:d or uniform:lo:hi");
}

std::string with_seed(const std::string& path, std::uint64_t seed) {
  const auto at = path.find("{seed}");
  if (at != std::string::npos) return path.substr(0, at) + std::to_string(seed) + path.substr(at + 6);
  return path + "." + std::to_string(seed);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

sfn::EdgeListFile load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  return sfn::read_edge_list(in);
}

void emit_report(const sfn::RunReport& report, const std::string& path) {
  const std::string text = sfn::to_json(report).dump(2) + "\n";
  if (path.empty()) {
    std::cout << text;
  } else {
    open_out(path) << text;
  }
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// ---------------------------------------------------------------------------

struct BuildOptions {
  std::string mode = "centralized";
  std::size_t n = 1000;
  double gamma = 2.5;
  std::string iters = "1.4N";
  double epsilon = 0.0;
  std::size_t walk_length = 10;
  std::uint64_t seed = 0;
  std::string seeds;
  std::string out;
  std::string report;
  std::string init = "random";
  std::size_t init_m = 1;
  std::string alpha = "goh";
  std::string exponent = "nested";
  std::string unit = "links";
  std::string sweep;
  std::string sweep_out;
  bool timing = false;
};

struct BuildOutcome {
  sfn::Graph graph{0};
  sfn::RunReport report;
  std::vector<sfn::DistanceSample> trajectory;
};

BuildOutcome build_once(const BuildOptions& o, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  const sfn::PowerLaw law(sfn::PowerLawParams{.gamma = o.gamma});
  BuildOutcome out;
  out.report.command = "build";
  out.report.mode = o.mode;
  out.report.n = o.n;
  out.report.gamma = o.gamma;
  out.report.seed = seed;

  if (o.mode == "centralized") {
    sfn::RewireConfig cfg;
    cfg.gamma = o.gamma;
    cfg.n_nodes = o.n;
    cfg.seed = seed;
    if (o.epsilon > 0.0) {
      cfg.stop = sfn::EpsilonStop{o.epsilon, 0};
    } else {
      cfg.stop = sfn::FixedIterations{parse_iters(o.iters, o.n)};
    }
    cfg.alpha_convention = o.alpha == "as_written" ? sfn::AlphaConvention::as_written : sfn::AlphaConvention::goh;
    cfg.iteration_unit = o.unit == "attempts" ? sfn::IterationUnit::attempts : sfn::IterationUnit::links;
    if (!o.sweep.empty()) cfg.checkpoints = parse_checkpoints(o.sweep, o.n);
    sfn::RewireResult r = sfn::rewire(cfg);
    out.report.iterations = r.iterations;
    out.trajectory = std::move(r.trajectory);
    out.graph = std::move(r.graph);
  } else {
    sfn::InitialTopology topo;
    topo.kind = o.init == "ring" ? sfn::InitialTopology::Kind::ring : sfn::InitialTopology::Kind::random;
    topo.m = o.init_m;
    const sfn::Graph initial = sfn::make_initial(topo, o.n, seed);
    sfn::RewireWalkConfig cfg;
    cfg.walk_length = o.walk_length;
    cfg.gamma = o.gamma;
    cfg.seed = seed;
    cfg.exponent_grouping = o.exponent == "product" ? sfn::ExponentGrouping::alpha_times_gamma_minus_1
                                                    : sfn::ExponentGrouping::alpha_times_gamma_then_minus_1;
    sfn::RewireWalkResult r = sfn::rewire_all(initial, cfg);
    out.report.iterations = r.rewired;
    out.graph = std::move(r.graph);
  }
  const sfn::FitSummary fit = sfn::compare_to_power_law(sfn::empirical_degree_distribution(out.graph), law);
  out.report.edges = out.graph.edge_count();
  out.report.trace_distance = fit.trace_distance;
  out.report.fidelity = fit.fidelity;
  if (o.timing) out.report.wall_time = seconds_since(start);
  return out;
}

void write_sweep(const std::string& path, const std::vector<sfn::DistanceSample>& trajectory) {
  std::ofstream out = open_out(path);
  out << "iteration,trace_distance\n";
  for (const auto& s : trajectory) out << s.iteration << ',' << sfn::format_real(s.trace_distance) << '\n';
}

int cmd_build(const BuildOptions& o) {
  if (o.out.empty()) throw std::invalid_argument("build: --out is required");
  if (o.mode != "centralized" && o.mode != "distributed") throw std::invalid_argument("--mode: centralized|distributed");
  sfn::validate(sfn::PowerLawParams{.gamma = o.gamma});

  if (o.seeds.empty()) {
    BuildOutcome b = build_once(o, o.seed);
    std::ofstream edges = open_out(o.out);
    sfn::write_edge_list(edges, b.graph, o.gamma, o.seed);
    if (!o.sweep_out.empty()) write_sweep(o.sweep_out, b.trajectory);
    emit_report(b.report, o.report);
    return 0;
  }
  const auto [first, last] = parse_seed_range(o.seeds);
  std::cout << "seed,edges,trace_distance,fidelity\n";
  for (std::uint64_t seed = first; seed <= last; ++seed) {
    BuildOutcome b = build_once(o, seed);
    std::ofstream edges = open_out(with_seed(o.out, seed));
    sfn::write_edge_list(edges, b.graph, o.gamma, seed);
    if (!o.sweep_out.empty()) write_sweep(with_seed(o.sweep_out, seed), b.trajectory);
    if (!o.report.empty()) emit_report(b.report, with_seed(o.report, seed));
    std::cout << seed << ',' << *b.report.edges << ',' << sfn::format_real(*b.report.trace_distance) << ','
              << sfn::format_real(*b.report.fidelity) << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct ClusterOptions {
  std::string mode = "centralized";
  std::string in;
  std::string out;
  std::string report;
  std::string trace;
  std::size_t threshold = 0;
  std::size_t d_max = sfn::kDefaultDMax;
  double tau_end = 0.0;
  std::string delay = "uniform:0.5:1.5";
  std::string tie_break = "random";
  std::uint64_t seed = 0;
  bool timing = false;
};

nlohmann::ordered_json centralized_json(const sfn::ClusterAssignment& a, const ClusterOptions& o) {
  using nlohmann::ordered_json;
  ordered_json cores = ordered_json::array();
  for (const auto& [core, members] : a.members) {
    ordered_json cluster = ordered_json::array();
    for (NodeId s : members) {
      const sfn::Assignment& as = a.assignments.at(s);
      cluster.push_back({{"id", s}, {"address", sfn::net_address(s)}, {"hop_cnt", as.hops}, {"path", as.path}});
    }
    cores.push_back({{"id", core}, {"address", sfn::net_address(core)}, {"cluster", std::move(cluster)}});
  }
  ordered_json params = {{"threshold", o.threshold}, {"d_max", o.d_max}, {"tie_break", o.tie_break}, {"seed", o.seed}};
  return {{"cores", std::move(cores)}, {"isolated", a.unassigned}, {"params", std::move(params)}};
}

int cmd_cluster(const ClusterOptions& o) {
  if (o.out.empty()) throw std::invalid_argument("cluster: --out is required");
  if (o.threshold == 0) throw std::invalid_argument("cluster: --threshold must be >= 1");
  const auto start = std::chrono::steady_clock::now();
  const sfn::EdgeListFile file = load(o.in);
  const sfn::Graph& g = file.graph;
  const sfn::CorePartition part = sfn::partition(g, o.threshold);

  sfn::RunReport report;
  report.command = "cluster";
  report.mode = o.mode;
  report.n = g.node_count();
  report.gamma = file.gamma;
  report.seed = o.seed;
  report.edges = g.edge_count();
  report.threshold = o.threshold;
  report.trace_distance =
      sfn::compare_to_power_law(sfn::empirical_degree_distribution(g), sfn::PowerLaw({.gamma = file.gamma}))
          .trace_distance;

  nlohmann::ordered_json doc;
  if (o.mode == "centralized") {
    const auto tie = o.tie_break == "lowest" ? sfn::TieBreak::lowest_id : sfn::TieBreak::random;
    const sfn::ClusterAssignment a = sfn::assign_clusters(g, part, o.d_max, tie, o.seed);
    doc = centralized_json(a, o);
    report.n_cores = part.core_ids.size();
    report.cluster_sizes = a.cluster_sizes();
    report.isolated = a.unassigned.size();
  } else if (o.mode == "distributed") {
    if (o.tie_break != "lowest" && o.tie_break != "random") throw std::invalid_argument("--tie-break: random|lowest");
    sfn::DelayModel delays = parse_delay(o.delay, o.seed);
    sfn::ProtocolConfig cfg;
    cfg.d_max = o.d_max;
    cfg.tau_end = o.tau_end > 0.0 ? o.tau_end : 4.0 * static_cast<double>(o.d_max) * delays.max_delay();
    const sfn::ClusteringOutcome r = sfn::start_round(g, part, std::move(delays), cfg);
    doc = sfn::to_json(r);
    if (!o.trace.empty()) {
      std::ofstream t = open_out(o.trace);
      sfn::write_trace_jsonl(t, r.trace);
    }
    report.n_cores = r.cores.size();
    report.cluster_sizes = r.cluster_sizes();
    report.isolated = r.isolated.size();
  } else {
    throw std::invalid_argument("--mode: centralized|distributed");
  }
  open_out(o.out) << doc.dump(2) << '\n';
  if (o.timing) report.wall_time = seconds_since(start);
  emit_report(report, o.report);
  return 0;
}

// ---------------------------------------------------------------------------

struct StatsOptions {
  std::string in;
  std::string out;
  std::string report;
  std::string format = "csv";
  double gamma = 0.0;
};

int cmd_stats(const StatsOptions& o) {
  const sfn::EdgeListFile file = load(o.in);
  const double gamma = o.gamma > 0.0 ? o.gamma : file.gamma;
  const sfn::PowerLaw law(sfn::PowerLawParams{.gamma = gamma});
  const sfn::DegreeDistribution emp = sfn::empirical_degree_distribution(file.graph);
  const sfn::DegreeDistribution theory = sfn::theory_on_support(law, emp);
  const sfn::FitSummary fit = sfn::compare_to_power_law(emp, law);

  std::ostringstream text;
  if (o.format == "csv") {
    text << "k,empirical,theoretical\n";
    for (std::size_t k = 1; k <= emp.support_max(); ++k) {
      text << k << ',' << sfn::format_real(emp.at(k)) << ',' << sfn::format_real(theory.at(k)) << '\n';
    }
    text << "# trace_distance=" << sfn::format_real(fit.trace_distance) << '\n';
    text << "# fidelity=" << sfn::format_real(fit.fidelity) << '\n';
  } else if (o.format == "json") {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (std::size_t k = 1; k <= emp.support_max(); ++k) {
      rows.push_back({{"k", k}, {"empirical", emp.at(k)}, {"theoretical", theory.at(k)}});
    }
    nlohmann::ordered_json doc = {
        {"trace_distance", fit.trace_distance}, {"fidelity", fit.fidelity}, {"distribution", std::move(rows)}};
    text << doc.dump(2) << '\n';
  } else {
    throw std::invalid_argument("--format: csv|json");
  }
  if (o.out.empty()) {
    std::cout << text.str();
  } else {
    open_out(o.out) << text.str();
  }
  if (!o.report.empty()) {
    sfn::RunReport report;
    report.command = "stats";
    report.mode = "none";
    report.n = file.graph.node_count();
    report.gamma = gamma;
    report.seed = file.seed;
    report.edges = file.graph.edge_count();
    report.trace_distance = fit.trace_distance;
    report.fidelity = fit.fidelity;
    emit_report(report, o.report);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scale-free network construction and clustering"};
  app.require_subcommand(1);

  BuildOptions b;
  CLI::App* build = app.add_subcommand("build", "Build a network and write its edge list");
  build->add_option("--mode", b.mode, "centralized | distributed")->check(CLI::IsMember({"centralized", "distributed"}));
  build->add_option("--n", b.n, "Number of nodes")->check(CLI::PositiveNumber);
  build->add_option("--gamma", b.gamma, "Power-law exponent");
  build->add_option("--iters", b.iters, "Rewiring budget: a count or a multiple of N such as 1.4N");
  build->add_option("--epsilon", b.epsilon, "Stop once the trace distance drops below this (centralized)");
  build->add_option("--walk-length", b.walk_length, "Hops per biased walk (distributed)");
  build->add_option("--seed", b.seed, "Random seed");
  build->add_option("--seeds", b.seeds, "Seed range a..b; {seed} in paths is substituted");
  build->add_option("--out", b.out, "Edge-list output path");
  build->add_option("--report", b.report, "Report path (default: stdout)");
  build->add_option("--init", b.init, "Starting graph for distributed mode")->check(CLI::IsMember({"random", "ring"}));
  build->add_option("--init-m", b.init_m, "Edges per node (random) or ring half-degree");
  build->add_option("--alpha", b.alpha, "goh | as_written")->check(CLI::IsMember({"goh", "as_written"}));
  build->add_option("--exponent", b.exponent, "nested 1/((alpha*gamma)-1) | product 1/(alpha*(gamma-1))")
      ->check(CLI::IsMember({"nested", "product"}));
  build->add_option("--iteration-unit", b.unit, "links | attempts")->check(CLI::IsMember({"links", "attempts"}));
  build->add_option("--sweep", b.sweep, "Comma-separated iteration checkpoints, e.g. 0.2N,0.4N");
  build->add_option("--sweep-out", b.sweep_out, "CSV of trace distance at each checkpoint");
  build->add_flag("--timing", b.timing, "Include wall_time in the report");

  ClusterOptions c;
  CLI::App* cluster = app.add_subcommand("cluster", "Assign service nodes to cores");
  cluster->add_option("--mode", c.mode, "centralized | distributed")
      ->check(CLI::IsMember({"centralized", "distributed"}));
  cluster->add_option("--in", c.in, "Edge-list input")->required();
  cluster->add_option("--out", c.out, "Assignment JSON output");
  cluster->add_option("--report", c.report, "Report path (default: stdout)");
  cluster->add_option("--trace", c.trace, "Event trace output, one JSON object per line (distributed)");
  cluster->add_option("--threshold", c.threshold, "Core degree threshold T")->required();
  cluster->add_option("--dmax", c.d_max, "Maximum hop distance");
  cluster->add_option("--tau-end", c.tau_end, "Decision timer (default 4 * dmax * max delay)");
  cluster->add_option("--delay", c.delay, "fixed:d | uniform:lo:hi");
  cluster->add_option("--tie-break", c.tie_break, "random | lowest (centralized)")
      ->check(CLI::IsMember({"random", "lowest"}));
  cluster->add_option("--seed", c.seed, "Random seed");
  cluster->add_flag("--timing", c.timing, "Include wall_time in the report");

  StatsOptions s;
  CLI::App* stats = app.add_subcommand("stats", "Compare a degree distribution with the power law");
  stats->add_option("--in", s.in, "Edge-list input")->required();
  stats->add_option("--out", s.out, "Output path (default: stdout)");
  stats->add_option("--format", s.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  stats->add_option("--gamma", s.gamma, "Exponent (default: from the edge-list header)");
  stats->add_option("--report", s.report, "Also write a run report here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*build) return cmd_build(b);
    if (*cluster) return cmd_cluster(c);
    if (*stats) return cmd_stats(s);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
