// nge: command-line front end for the assembly-graph simplification
// library and its neural executor.
//
// Subcommands: generate, trace, train, eval, simplify, gfa-stats.
// Every run echoes its resolved configuration (including the seed) before
// doing any work, so logs are self-describing and runs reproducible.
//
// Exit codes: 0 success; 1 command-line usage errors; 2 invalid
// configuration or arguments; 3 data or runtime failures (unreadable or
// malformed files, training divergence); 4 unexpected internal errors.

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "nge/checkpoint.hpp"
#include "nge/dataset_io.hpp"
#include "nge/gfa.hpp"
#include "nge/graph.hpp"
#include "nge/model.hpp"
#include "nge/rng.hpp"
#include "nge/simplify.hpp"
#include "nge/synthgen.hpp"
#include "nge/traces.hpp"
#include "nge/train.hpp"

namespace {

using namespace nge;

using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

void print_config(const std::string& command, const ConfigEcho& kv) {
  std::cout << "nge " << command << " config:";
  for (const auto& [key, value] : kv) {
    std::cout << ' ' << key << '=' << value;
  }
  std::cout << '\n';
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

Algorithm parse_algorithm(const std::string& name) {
  if (name == "transitive") {
    return Algorithm::transitive;
  }
  if (name == "tips") {
    return Algorithm::tips;
  }
  if (name == "bubbles") {
    return Algorithm::bubbles;
  }
  throw std::invalid_argument("unknown algorithm '" + name +
                              "' (expected transitive, tips or bubbles)");
}

std::vector<std::uint32_t> parse_scales(const std::string& text) {
  std::vector<std::uint32_t> scales;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) {
    if (part.empty()) {
      continue;
    }
    std::size_t used = 0;
    unsigned long value = 0;
    try {
      value = std::stoul(part, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad scale '" + part + "' in --scales");
    }
    if (used != part.size() || value < 1 || value > 1000) {
      throw std::invalid_argument("bad scale '" + part + "' in --scales");
    }
    scales.push_back(static_cast<std::uint32_t>(value));
  }
  if (scales.empty()) {
    throw std::invalid_argument("--scales must list at least one scale");
  }
  return scales;
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  std::string preset = "parallel";
  std::uint32_t backbone = 50;
  std::uint32_t scale = 1;
  std::uint32_t count = 100;
  std::uint64_t seed = 0;
  std::int64_t n_transitive = -1;  // -1: keep the preset's count
  std::int64_t n_tips = -1;
  std::int64_t n_bubbles = -1;
  std::uint32_t tip_len_min = 1;
  std::uint32_t tip_len_max = 4;
  std::uint32_t bubble_len_min = 2;
  std::uint32_t bubble_len_max = 5;
  double external_prob = 0.25;
  bool lengths_set = false;
  bool external_set = false;
  std::string out;
  std::string gfa_out;
};

int run_generate(const GenerateArgs& args) {
  bool isolated = false;
  Algorithm isolated_alg = Algorithm::transitive;
  if (args.preset.rfind("isolated:", 0) == 0) {
    isolated = true;
    isolated_alg = parse_algorithm(args.preset.substr(9));
  } else if (args.preset != "parallel") {
    throw std::invalid_argument("unknown preset '" + args.preset +
                                "' (expected parallel or isolated:<algorithm>)");
  }

  synthgen::GenSpec spec =
      isolated ? synthgen::GenSpec::isolated(isolated_alg, args.backbone,
                                             args.scale, args.seed)
               : synthgen::GenSpec::parallel(args.backbone, args.scale,
                                             args.seed);
  if (args.n_transitive >= 0) {
    spec.n_transitive = static_cast<std::uint32_t>(args.n_transitive);
  }
  if (args.n_tips >= 0) {
    spec.n_tips = static_cast<std::uint32_t>(args.n_tips);
  }
  if (args.n_bubbles >= 0) {
    spec.n_bubbles = static_cast<std::uint32_t>(args.n_bubbles);
  }
  if (args.lengths_set) {
    spec.tip_len_range = {args.tip_len_min, args.tip_len_max};
    spec.bubble_len_range = {args.bubble_len_min, args.bubble_len_max};
  }
  if (args.external_set) {
    spec.external_edge_prob = args.external_prob;
  }

  print_config("generate",
               {{"preset", args.preset},
                {"backbone", std::to_string(spec.backbone_len)},
                {"scale", std::to_string(spec.scale)},
                {"n_transitive", std::to_string(spec.n_transitive)},
                {"n_tips", std::to_string(spec.n_tips)},
                {"n_bubbles", std::to_string(spec.n_bubbles)},
                {"external_prob", format_double(spec.external_edge_prob)},
                {"count", std::to_string(args.count)},
                {"seed", std::to_string(args.seed)}});

  std::vector<Algorithm> algorithms;
  if (isolated) {
    algorithms = {isolated_alg};
  } else {
    algorithms = {Algorithm::transitive, Algorithm::tips, Algorithm::bubbles};
  }

  auto pairs = synthgen::generate_dataset(spec, args.count);
  std::vector<io::DatasetRecord> records;
  records.reserve(pairs.size());
  std::uint64_t node_total = 0;
  std::uint64_t edge_total = 0;
  for (auto& [graph, truth] : pairs) {
    io::DatasetRecord record;
    record.truth = truth;
    for (Algorithm alg : algorithms) {
      record.traces.push_back(traces::build_trace(graph, truth, alg));
    }
    node_total += graph.node_count();
    edge_total += graph.edge_count();
    record.graph = std::move(graph);
    records.push_back(std::move(record));
  }

  if (!args.gfa_out.empty()) {
    const auto& first = records.front().graph;
    gfa::write_gfa_file(first, gfa::default_document(first), args.gfa_out);
    std::cout << "wrote first graph (" << first.node_count() << " nodes, "
              << first.edge_count() << " edges) to " << args.gfa_out << '\n';
  }

  if (!args.out.empty()) {
    io::DatasetHeader header;
    header.count = records.size();
    header.meta = {{"preset", args.preset},
                   {"backbone", std::to_string(spec.backbone_len)},
                   {"scale", std::to_string(spec.scale)},
                   {"seed", std::to_string(args.seed)}};
    io::save_dataset(args.out, header, records);
    std::cout << "wrote " << records.size() << " records to " << args.out
              << " (mean nodes "
              << format_double(static_cast<double>(node_total) / records.size())
              << ", mean edges "
              << format_double(static_cast<double>(edge_total) / records.size())
              << ")\n";
  }
  return 0;
}

// ------------------------------------------------------------------- trace

struct TraceArgs {
  std::string in;
  std::string algorithm = "transitive";
  std::string out;
};

int run_trace(const TraceArgs& args) {
  const Algorithm alg = parse_algorithm(args.algorithm);
  print_config("trace", {{"in", args.in},
                         {"algorithm", args.algorithm},
                         {"out", args.out.empty() ? "-" : args.out}});

  auto [header, records] = io::load_dataset(args.in);
  std::uint64_t step_total = 0;
  for (auto& record : records) {
    auto trace = traces::build_trace(record.graph, record.truth, alg);
    step_total += trace.length();
    record.traces = {std::move(trace)};
  }
  std::cout << "rebuilt " << records.size() << " " << algorithm_name(alg)
            << " traces (mean length "
            << format_double(records.empty()
                                 ? 0.0
                                 : static_cast<double>(step_total) /
                                       records.size())
            << ")\n";
  if (!args.out.empty()) {
    header.meta["trace_algorithm"] = algorithm_name(alg);
    io::save_dataset(args.out, header, records);
    std::cout << "wrote " << records.size() << " records to " << args.out
              << '\n';
  }
  return 0;
}

// ------------------------------------------------------------------- train

struct TrainArgs {
  std::string mode = "parallel";
  double lr = 1e-5;
  std::uint32_t patience = 10;
  std::uint32_t max_epochs = 500;
  std::uint32_t count = 100;
  double val_fraction = 0.2;
  std::uint32_t backbone = 50;
  std::uint32_t latent_dim = model::kDefaultLatentDim;
  std::uint64_t seed = 0;
  std::string out_checkpoint;
  std::string log_path;
};

train::TrainConfig to_train_config(const TrainArgs& args) {
  train::TrainConfig config;
  if (args.mode == "parallel") {
    config.mode = train::TrainMode::parallel;
  } else if (args.mode.rfind("isolated:", 0) == 0) {
    config.mode = train::TrainMode::isolated;
    config.isolated_algorithm = parse_algorithm(args.mode.substr(9));
  } else {
    throw std::invalid_argument("unknown mode '" + args.mode +
                                "' (expected parallel or isolated:<algorithm>)");
  }
  config.learning_rate = args.lr;
  config.patience = args.patience;
  config.max_epochs = args.max_epochs;
  config.train_count = args.count;
  config.val_fraction = args.val_fraction;
  config.backbone_len = args.backbone;
  config.latent_dim = args.latent_dim;
  config.seed = args.seed;
  return config;
}

int run_train(const TrainArgs& args) {
  const train::TrainConfig config = to_train_config(args);
  print_config("train", {{"mode", args.mode},
                         {"lr", format_double(config.learning_rate)},
                         {"patience", std::to_string(config.patience)},
                         {"max_epochs", std::to_string(config.max_epochs)},
                         {"count", std::to_string(config.train_count)},
                         {"val_fraction", format_double(config.val_fraction)},
                         {"backbone", std::to_string(config.backbone_len)},
                         {"latent_dim", std::to_string(config.latent_dim)},
                         {"seed", std::to_string(config.seed)}});

  std::vector<train::EpochLog> log;
  auto result = train::train(config, [&](const train::EpochLog& epoch) {
    log.push_back(epoch);
    std::printf("epoch %3u  train_loss %.6f  val_loss %.6f  val_acc %.4f\n",
                epoch.epoch, epoch.train_loss, epoch.val_loss,
                epoch.val_accuracy);
    std::fflush(stdout);
  });

  io::save_checkpoint(result.params, args.out_checkpoint);
  std::cout << "best epoch " << result.best_epoch
            << (result.stopped_early ? " (early stop)" : " (epoch budget)")
            << "; checkpoint written to " << args.out_checkpoint << '\n';

  if (!args.log_path.empty()) {
    std::string csv = "epoch,train_loss,val_loss,val_accuracy\n";
    for (const auto& epoch : log) {
      char buf[160];
      std::snprintf(buf, sizeof(buf), "%u,%.17g,%.17g,%.17g\n", epoch.epoch,
                    epoch.train_loss, epoch.val_loss, epoch.val_accuracy);
      csv += buf;
    }
    std::ofstream out(args.log_path);
    if (!out) {
      throw std::runtime_error("cannot write log: " + args.log_path);
    }
    out << csv;
    std::cout << "epoch log written to " << args.log_path << '\n';
  }
  return 0;
}

// -------------------------------------------------------------------- eval

struct EvalArgs {
  std::string checkpoint;
  std::string scales = "1,2,4,8,20";
  std::string mode = "tf";
  std::string report;
  std::uint64_t seed = 0;
  std::uint32_t backbone = 50;
  std::uint32_t graphs_per_scale = 10;
  std::string gfa;
  std::uint32_t max_tip_len = 10;
  std::uint32_t max_path_len = 10;
};

train::EvalMode parse_eval_mode(const std::string& mode) {
  if (mode == "tf") {
    return train::EvalMode::teacher_forced;
  }
  if (mode == "rollout") {
    return train::EvalMode::rollout;
  }
  throw std::invalid_argument("unknown mode '" + mode +
                              "' (expected tf or rollout)");
}

int run_eval(const EvalArgs& args) {
  const train::EvalMode mode = parse_eval_mode(args.mode);
  auto params = io::load_checkpoint(args.checkpoint);

  if (!args.gfa.empty()) {
    print_config("eval", {{"checkpoint", args.checkpoint},
                          {"gfa", args.gfa},
                          {"mode", args.mode},
                          {"max_tip_len", std::to_string(args.max_tip_len)},
                          {"max_path_len", std::to_string(args.max_path_len)}});
    auto parsed = gfa::parse_gfa_file(args.gfa);
    std::cout << "parsed " << parsed.graph.node_count() << " nodes, "
              << parsed.graph.edge_count() << " edges ("
              << parsed.warning_count << " warnings)\n";
    auto scores = train::evaluate_real_graph(params, parsed.graph, mode,
                                             args.max_tip_len,
                                             args.max_path_len);
    std::string csv = "# nge evaluation report\n# accuracy_mode," +
                      std::string(train::eval_mode_name(mode)) +
                      "\n# accuracy excludes step t=1 (inputs equal targets "
                      "there)\n# gfa," +
                      args.gfa + "\nalgorithm,real\n";
    constexpr std::array<Algorithm, 3> kOrder{
        Algorithm::transitive, Algorithm::tips, Algorithm::bubbles};
    for (Algorithm alg : kOrder) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%s,%.6f\n", algorithm_name(alg),
                    scores[static_cast<std::size_t>(alg)]);
      csv += buf;
    }
    std::cout << csv;
    if (!args.report.empty()) {
      std::ofstream out(args.report);
      if (!out) {
        throw std::runtime_error("cannot write report: " + args.report);
      }
      out << csv;
      std::cout << "report written to " << args.report << '\n';
    }
    return 0;
  }

  train::EvalConfig config;
  config.scales = parse_scales(args.scales);
  config.graphs_per_scale = args.graphs_per_scale;
  config.backbone_len = args.backbone;
  config.seed = args.seed;
  config.mode = mode;

  print_config("eval",
               {{"checkpoint", args.checkpoint},
                {"scales", args.scales},
                {"mode", args.mode},
                {"graphs_per_scale", std::to_string(config.graphs_per_scale)},
                {"backbone", std::to_string(config.backbone_len)},
                {"seed", std::to_string(config.seed)}});

  auto report = train::evaluate(params, config);
  const std::string csv = train::report_to_csv(report);
  std::cout << csv;
  if (!args.report.empty()) {
    train::export_report(report, args.report);
    std::cout << "report written to " << args.report << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------- simplify

struct SimplifyArgs {
  std::string algorithm = "all";
  std::uint32_t max_tip_len = 10;
  std::uint32_t max_path_len = 10;
  std::string in;
  std::string out;
};

// Drops removed tip nodes (left isolated by edge removal) and remaps the
// document onto the surviving ids before emission.
void write_simplified(const AssemblyGraph& g, const NodeSet& removed_nodes,
                      const gfa::GfaDocument& doc, const std::string& path) {
  std::vector<NodeId> remap(g.node_count(), 0);
  gfa::GfaDocument out_doc;
  NodeId next = 0;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (removed_nodes.count(v) > 0) {
      continue;
    }
    remap[v] = next++;
    out_doc.node_names.push_back(doc.node_names[v]);
    out_doc.node_lengths.push_back(doc.node_lengths[v]);
  }
  std::vector<Edge> edges;
  edges.reserve(g.edge_count());
  for (const Edge& e : g.edges()) {
    edges.push_back(Edge{remap[e.src], remap[e.dst], e.feature});
    out_doc.edge_overlaps[{remap[e.src], remap[e.dst]}] =
        doc.edge_overlaps.at({e.src, e.dst});
  }
  gfa::write_gfa_file(AssemblyGraph::build(next, std::move(edges)), out_doc,
                      path);
}

int run_simplify(const SimplifyArgs& args) {
  print_config("simplify", {{"algorithm", args.algorithm},
                            {"max_tip_len", std::to_string(args.max_tip_len)},
                            {"max_path_len", std::to_string(args.max_path_len)},
                            {"in", args.in},
                            {"out", args.out}});

  auto parsed = gfa::parse_gfa_file(args.in);
  const AssemblyGraph& g = parsed.graph;
  std::cout << "parsed " << g.node_count() << " nodes, " << g.edge_count()
            << " edges (" << parsed.warning_count << " warnings)\n";

  AssemblyGraph result;
  NodeSet removed_nodes;
  if (args.algorithm == "all") {
    auto pipeline = simplify_pipeline_full(
        g, SimplifyConfig{args.max_tip_len, args.max_path_len});
    removed_nodes = pipeline.tips.removed_nodes;
    result = pipeline.final_graph;
    std::cout << "removed " << pipeline.transitive.removed_edges.size()
              << " transitive edges, " << pipeline.tips.removed_nodes.size()
              << " tip nodes (" << pipeline.tips.removed_edges.size()
              << " edges), " << pipeline.bubbles.removed_edges.size()
              << " bubble edges\n";
  } else {
    const Algorithm alg = parse_algorithm(args.algorithm);
    SimplificationResult r;
    switch (alg) {
      case Algorithm::transitive:
        r = remove_transitive(g);
        break;
      case Algorithm::tips:
        r = trim_tips(g, args.max_tip_len);
        break;
      case Algorithm::bubbles:
        r = pop_bubbles(g, args.max_path_len);
        break;
    }
    removed_nodes = r.removed_nodes;
    result = r.retained_graph;
    std::cout << "removed " << r.removed_edges.size() << " edges and "
              << r.removed_nodes.size() << " nodes\n";
  }

  write_simplified(result, removed_nodes, parsed.doc, args.out);
  std::cout << "wrote " << (result.node_count() - removed_nodes.size())
            << " nodes, " << result.edge_count() << " edges to " << args.out
            << '\n';
  return 0;
}

// --------------------------------------------------------------- gfa-stats

struct GfaStatsArgs {
  std::string in;
  std::uint32_t max_tip_len = 10;
  std::uint32_t max_path_len = 10;
};

int run_gfa_stats(const GfaStatsArgs& args) {
  print_config("gfa-stats",
               {{"in", args.in},
                {"max_tip_len", std::to_string(args.max_tip_len)},
                {"max_path_len", std::to_string(args.max_path_len)}});

  auto parsed = gfa::parse_gfa_file(args.in);
  const AssemblyGraph& g = parsed.graph;

  std::uint32_t sources = 0;
  std::uint32_t sinks = 0;
  std::uint32_t isolated = 0;
  std::uint32_t max_out = 0;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const auto in_deg = g.in_degree(v);
    const auto out_deg = g.out_degree(v);
    sources += in_deg == 0 && out_deg > 0 ? 1 : 0;
    sinks += out_deg == 0 && in_deg > 0 ? 1 : 0;
    isolated += in_deg == 0 && out_deg == 0 ? 1 : 0;
    max_out = std::max(max_out, out_deg);
  }

  const auto transitive = find_transitive_edges(g);
  const auto tips = trim_tips(g, args.max_tip_len);
  const auto bubbles = pop_bubbles(g, args.max_path_len);

  std::cout << "nodes: " << g.node_count() << '\n'
            << "edges: " << g.edge_count() << '\n'
            << "warnings: " << parsed.warning_count << '\n'
            << "sources: " << sources << '\n'
            << "sinks: " << sinks << '\n'
            << "isolated: " << isolated << '\n'
            << "max out-degree: " << max_out << '\n'
            << "transitive edges: " << transitive.size() << '\n'
            << "tip nodes: " << tips.removed_nodes.size() << " ("
            << tips.removed_edges.size() << " edges)\n"
            << "bubble edges: " << bubbles.removed_edges.size() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"assembly-graph simplification and neural execution toolkit"};
  app.require_subcommand(1);
  std::function<int()> action;

  GenerateArgs gen;
  auto* gen_cmd = app.add_subcommand(
      "generate", "generate a synthetic dataset with planted structures");
  gen_cmd->add_option("--preset", gen.preset,
                      "parallel or isolated:<algorithm>");
  gen_cmd->add_option("--backbone", gen.backbone, "backbone length at 1x");
  gen_cmd->add_option("--scale", gen.scale, "backbone multiplier");
  gen_cmd->add_option("--count", gen.count, "number of graphs");
  gen_cmd->add_option("--seed", gen.seed, "master seed");
  gen_cmd->add_option("--n-transitive", gen.n_transitive,
                      "override planted transitive-edge count");
  gen_cmd->add_option("--n-tips", gen.n_tips, "override planted tip count");
  gen_cmd->add_option("--n-bubbles", gen.n_bubbles,
                      "override planted bubble count");
  auto* tip_min = gen_cmd->add_option("--tip-len-min", gen.tip_len_min,
                                      "minimum tip length");
  gen_cmd->add_option("--tip-len-max", gen.tip_len_max, "maximum tip length");
  gen_cmd->add_option("--bubble-len-min", gen.bubble_len_min,
                      "minimum bubble branch length");
  gen_cmd->add_option("--bubble-len-max", gen.bubble_len_max,
                      "maximum bubble branch length");
  auto* ext = gen_cmd->add_option("--external-prob", gen.external_prob,
                                  "probability of an external bubble edge");
  gen_cmd->add_option("--out", gen.out, "output dataset (JSON lines)");
  gen_cmd->add_option("--gfa-out", gen.gfa_out,
                      "also write the first graph as GFA");
  gen_cmd->callback([&] {
    gen.lengths_set = tip_min->count() > 0 ||
                      gen_cmd->count("--tip-len-max") > 0 ||
                      gen_cmd->count("--bubble-len-min") > 0 ||
                      gen_cmd->count("--bubble-len-max") > 0;
    gen.external_set = ext->count() > 0;
    if (gen.out.empty() && gen.gfa_out.empty()) {
      throw CLI::ValidationError("generate",
                                 "one of --out or --gfa-out is required");
    }
    action = [&] { return run_generate(gen); };
  });

  TraceArgs trace;
  auto* trace_cmd = app.add_subcommand(
      "trace", "rebuild execution traces for one algorithm");
  trace_cmd->add_option("--in", trace.in, "input dataset")->required();
  trace_cmd->add_option("--algorithm", trace.algorithm,
                        "transitive, tips or bubbles");
  trace_cmd->add_option("--out", trace.out, "output dataset");
  trace_cmd->callback([&] { action = [&] { return run_trace(trace); }; });

  TrainArgs tr;
  auto* train_cmd =
      app.add_subcommand("train", "train the neural executor");
  train_cmd->add_option("--mode", tr.mode,
                        "parallel or isolated:<algorithm>");
  train_cmd->add_option("--lr", tr.lr, "learning rate");
  train_cmd->add_option("--patience", tr.patience, "early-stopping patience");
  train_cmd->add_option("--max-epochs", tr.max_epochs, "epoch budget");
  train_cmd->add_option("--count", tr.count, "training graphs to generate");
  train_cmd->add_option("--val-fraction", tr.val_fraction,
                        "validation fraction");
  train_cmd->add_option("--backbone", tr.backbone, "backbone length at 1x");
  train_cmd->add_option("--latent-dim", tr.latent_dim, "latent width");
  train_cmd->add_option("--seed", tr.seed, "master seed");
  train_cmd->add_option("--out-checkpoint", tr.out_checkpoint,
                        "checkpoint output path")
      ->required();
  train_cmd->add_option("--log", tr.log_path, "epoch log CSV path");
  train_cmd->callback([&] { action = [&] { return run_train(tr); }; });

  EvalArgs ev;
  auto* eval_cmd =
      app.add_subcommand("eval", "evaluate a checkpoint across scales");
  eval_cmd->add_option("--checkpoint", ev.checkpoint, "checkpoint path")
      ->required();
  eval_cmd->add_option("--scales", ev.scales, "comma-separated scales");
  eval_cmd->add_option("--mode", ev.mode, "tf or rollout");
  eval_cmd->add_option("--report", ev.report, "CSV report path");
  eval_cmd->add_option("--seed", ev.seed, "evaluation seed");
  eval_cmd->add_option("--backbone", ev.backbone, "backbone length at 1x");
  eval_cmd->add_option("--graphs-per-scale", ev.graphs_per_scale,
                       "graphs per (algorithm, scale) cell");
  eval_cmd->add_option("--gfa", ev.gfa,
                       "evaluate on a GFA file instead of generated graphs");
  eval_cmd->add_option("--max-tip-len", ev.max_tip_len,
                       "tip bound for GFA ground truth");
  eval_cmd->add_option("--max-path-len", ev.max_path_len,
                       "bubble bound for GFA ground truth");
  eval_cmd->callback([&] { action = [&] { return run_eval(ev); }; });

  SimplifyArgs sim;
  auto* sim_cmd =
      app.add_subcommand("simplify", "simplify a GFA assembly graph");
  sim_cmd->add_option("--algorithm", sim.algorithm,
                      "all, transitive, tips or bubbles");
  sim_cmd->add_option("--max-tip-len", sim.max_tip_len, "tip length bound");
  sim_cmd->add_option("--max-path-len", sim.max_path_len,
                      "bubble path length bound");
  sim_cmd->add_option("--in", sim.in, "input GFA")->required();
  sim_cmd->add_option("--out", sim.out, "output GFA")->required();
  sim_cmd->callback([&] { action = [&] { return run_simplify(sim); }; });

  GfaStatsArgs stats;
  auto* stats_cmd =
      app.add_subcommand("gfa-stats", "summarize a GFA assembly graph");
  stats_cmd->add_option("--in", stats.in, "input GFA")->required();
  stats_cmd->add_option("--max-tip-len", stats.max_tip_len,
                        "tip bound for the structure census");
  stats_cmd->add_option("--max-path-len", stats.max_path_len,
                        "bubble bound for the structure census");
  stats_cmd->callback([&] { action = [&] { return run_gfa_stats(stats); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Collapse CLI11's fine-grained exit codes into the documented "1 =
    // usage error" (0 stays 0 for --help and --version).
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    return action();
  } catch (const std::invalid_argument& e) {
    std::cerr << "error (invalid argument): " << e.what() << '\n';
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "error (runtime): " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error (internal): " << e.what() << '\n';
    return 4;
  }
}
