#include "nge/train.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "nge/adam.hpp"
#include "nge/rng.hpp"
#include "nge/synthgen.hpp"

namespace nge::train {

namespace {

using model::GraphTensors;
using model::ModelParams;
using ndiff::AdamOptimizer;
using ndiff::GradTape;
using ndiff::Tensor;

// Substream roots: user seed -> disjoint training and evaluation streams,
// so evaluating with the training seed never replays training graphs.
constexpr std::uint64_t kTrainRoot = 1;
constexpr std::uint64_t kEvalRoot = 2;

constexpr std::array<Algorithm, 3> kAllAlgorithms{
    Algorithm::transitive, Algorithm::tips, Algorithm::bubbles};

struct TraceItem {
  AssemblyGraph graph;
  traces::ExecutionTrace trace;
  GraphTensors tensors;
};

struct PassStats {
  double loss_sum = 0;
  std::uint64_t steps = 0;
  std::uint64_t correct = 0;
  std::uint64_t scored = 0;  // (step t >= 2, node) pairs
};

// One teacher-forced sweep. With an optimizer every step records its own
// tape, runs backward and applies Adam to the active algorithm's tensors;
// the latent state crosses step boundaries as detached values.
PassStats teacher_pass(ModelParams& params, const GraphTensors& gt,
                       const traces::ExecutionTrace& trace,
                       AdamOptimizer* opt) {
  PassStats stats;
  const std::uint32_t V = gt.node_count;
  std::vector<Tensor*> trainable;
  if (opt != nullptr) {
    trainable = params.trainable(trace.algorithm);
  }
  Tensor h(V, params.latent_dim);
  for (std::uint32_t t = 1; t <= trace.length(); ++t) {
    try {
      GradTape tape;
      auto h_prev = tape.constant(std::move(h));
      model::TeacherStep step =
          model::step_teacher_forced(tape, params, gt, trace, t, h_prev);
      stats.loss_sum += tape.value(step.loss).at(0, 0);
      stats.steps += 1;
      if (t >= 2) {
        const auto predicted =
            model::threshold_logits(tape.value(step.values.logits));
        const auto& target = trace.steps[t - 1].reached;
        for (std::uint32_t i = 0; i < V; ++i) {
          stats.correct += predicted[i] == target[i] ? 1 : 0;
        }
        stats.scored += V;
      }
      h = tape.value(step.values.h_next);
      if (opt != nullptr) {
        tape.backward(step.loss);
        opt->apply_all(trainable, tape);
      }
    } catch (const std::runtime_error& e) {
      throw std::runtime_error("step " + std::to_string(t) + ": " + e.what());
    }
  }
  return stats;
}

std::vector<Algorithm> mode_algorithms(const TrainConfig& config) {
  if (config.mode == TrainMode::isolated) {
    return {config.isolated_algorithm};
  }
  return {kAllAlgorithms.begin(), kAllAlgorithms.end()};
}

synthgen::GenSpec graph_spec(const TrainConfig& config, std::uint64_t seed) {
  if (config.mode == TrainMode::isolated) {
    return synthgen::GenSpec::isolated(config.isolated_algorithm,
                                       config.backbone_len, 1, seed);
  }
  return synthgen::GenSpec::parallel(config.backbone_len, 1, seed);
}

std::string format_accuracy(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", value);
  return buf;
}

}  // namespace

const char* eval_mode_name(EvalMode mode) {
  return mode == EvalMode::teacher_forced ? "teacher_forced" : "rollout";
}

TrainResult train(const TrainConfig& config,
                  const std::function<void(const EpochLog&)>& on_epoch) {
  if (config.val_fraction <= 0.0 || config.val_fraction >= 1.0) {
    throw std::invalid_argument("val_fraction must lie in (0, 1)");
  }
  if (config.patience < 1) {
    throw std::invalid_argument("patience must be at least 1");
  }
  if (config.max_epochs < 1) {
    throw std::invalid_argument("max_epochs must be at least 1");
  }
  if (config.learning_rate <= 0.0) {
    throw std::invalid_argument("learning_rate must be positive");
  }
  if (config.train_count < 2) {
    throw std::invalid_argument("train_count must be at least 2");
  }
  const auto n_val = std::max<std::uint32_t>(
      1, static_cast<std::uint32_t>(
             std::llround(config.train_count * config.val_fraction)));
  if (n_val >= config.train_count) {
    throw std::invalid_argument("val_fraction leaves no training graphs");
  }
  const std::uint32_t n_train = config.train_count - n_val;

  const std::uint64_t train_root =
      SplitMix64::substream_seed(config.seed, kTrainRoot);
  const std::vector<Algorithm> algorithms = mode_algorithms(config);

  std::vector<TraceItem> train_items;
  std::vector<TraceItem> val_items;
  for (std::uint32_t i = 0; i < config.train_count; ++i) {
    auto [graph, truth] = synthgen::generate(
        graph_spec(config, SplitMix64::substream_seed(train_root, i)));
    for (Algorithm alg : algorithms) {
      TraceItem item{graph, traces::build_trace(graph, truth, alg),
                     GraphTensors::from_graph(graph)};
      (i < n_train ? train_items : val_items).push_back(std::move(item));
    }
  }

  TrainResult result;
  ModelParams params = ModelParams::init(config.latent_dim, config.seed);
  result.params = params;
  AdamOptimizer opt(ndiff::AdamHyper{.lr = config.learning_rate});

  double best_val = std::numeric_limits<double>::infinity();
  std::uint32_t stale_epochs = 0;
  for (std::uint32_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    PassStats train_stats;
    for (std::size_t i = 0; i < train_items.size(); ++i) {
      const TraceItem& item = train_items[i];
      try {
        PassStats s = teacher_pass(params, item.tensors, item.trace, &opt);
        train_stats.loss_sum += s.loss_sum;
        train_stats.steps += s.steps;
      } catch (const std::runtime_error& e) {
        throw std::runtime_error(
            "training aborted at epoch " + std::to_string(epoch) +
            ", graph " + std::to_string(i) + " (" +
            algorithm_name(item.trace.algorithm) + "), " + e.what());
      }
    }

    PassStats val_stats;
    for (const TraceItem& item : val_items) {
      PassStats s = teacher_pass(params, item.tensors, item.trace, nullptr);
      val_stats.loss_sum += s.loss_sum;
      val_stats.steps += s.steps;
      val_stats.correct += s.correct;
      val_stats.scored += s.scored;
    }

    EpochLog log;
    log.epoch = epoch;
    log.train_loss = train_stats.loss_sum / static_cast<double>(train_stats.steps);
    log.val_loss = val_stats.loss_sum / static_cast<double>(val_stats.steps);
    log.val_accuracy =
        val_stats.scored > 0
            ? static_cast<double>(val_stats.correct) / val_stats.scored
            : 1.0;
    result.log.push_back(log);
    if (on_epoch) {
      on_epoch(log);
    }

    if (log.val_loss < best_val) {
      best_val = log.val_loss;
      result.params = params;
      result.best_epoch = epoch;
      stale_epochs = 0;
    } else {
      ++stale_epochs;
      if (stale_epochs >= config.patience) {
        result.stopped_early = true;
        break;
      }
    }
  }
  return result;
}

double evaluate_traces(
    ModelParams& params,
    const std::vector<std::pair<const AssemblyGraph*,
                                const traces::ExecutionTrace*>>& items,
    EvalMode mode) {
  std::uint64_t correct = 0;
  std::uint64_t scored = 0;
  for (const auto& [graph, trace] : items) {
    const std::uint32_t V = graph->node_count();
    if (mode == EvalMode::teacher_forced) {
      PassStats s = teacher_pass(
          params, GraphTensors::from_graph(*graph), *trace, nullptr);
      correct += s.correct;
      scored += s.scored;
      continue;
    }
    const auto predicted =
        model::rollout(params, trace->algorithm, *graph, trace->is_source,
                       static_cast<std::size_t>(V) + 1);
    for (std::uint32_t t = 2; t <= trace->length(); ++t) {
      scored += V;
      if (t <= predicted.size()) {
        const auto& mine = predicted[t - 1].reached;
        const auto& target = trace->steps[t - 1].reached;
        for (std::uint32_t i = 0; i < V; ++i) {
          correct += mine[i] == target[i] ? 1 : 0;
        }
      }
    }
  }
  return scored > 0 ? static_cast<double>(correct) / scored : 1.0;
}

EvalReport evaluate(ModelParams& params, const EvalConfig& config) {
  if (config.graphs_per_scale < 1) {
    throw std::invalid_argument("graphs_per_scale must be at least 1");
  }
  EvalReport report;
  report.mode = config.mode;
  report.scales = config.scales;
  report.algorithms = config.algorithms;
  report.config_echo = {
      {"seed", std::to_string(config.seed)},
      {"backbone", std::to_string(config.backbone_len)},
      {"graphs_per_scale", std::to_string(config.graphs_per_scale)},
      {"latent_dim", std::to_string(params.latent_dim)},
  };

  const std::uint64_t eval_root =
      SplitMix64::substream_seed(config.seed, kEvalRoot);
  for (Algorithm alg : config.algorithms) {
    std::vector<double> row;
    std::vector<std::uint64_t> counts;
    for (std::uint32_t scale : config.scales) {
      // Stream indices depend on the algorithm and the absolute scale value,
      // never on the requested subset, so partial reports match full ones.
      const std::uint64_t cell =
          (static_cast<std::uint64_t>(alg) * 1024 + scale) *
          config.graphs_per_scale;
      std::vector<std::pair<AssemblyGraph, traces::ExecutionTrace>> cases;
      cases.reserve(config.graphs_per_scale);
      for (std::uint32_t i = 0; i < config.graphs_per_scale; ++i) {
        auto [graph, truth] = synthgen::generate(synthgen::GenSpec::isolated(
            alg, config.backbone_len, scale,
            SplitMix64::substream_seed(eval_root, cell + i)));
        auto trace = traces::build_trace(graph, truth, alg);
        cases.emplace_back(std::move(graph), std::move(trace));
      }
      std::vector<std::pair<const AssemblyGraph*,
                            const traces::ExecutionTrace*>>
          items;
      items.reserve(cases.size());
      for (const auto& [graph, trace] : cases) {
        items.emplace_back(&graph, &trace);
      }
      row.push_back(evaluate_traces(params, items, config.mode));
      counts.push_back(config.graphs_per_scale);
    }
    report.accuracy.push_back(std::move(row));
    report.graph_counts.push_back(std::move(counts));
  }
  return report;
}

std::array<double, 3> evaluate_real_graph(ModelParams& params,
                                          const AssemblyGraph& g,
                                          EvalMode mode,
                                          std::uint32_t max_tip_len,
                                          std::uint32_t max_path_len) {
  GroundTruth truth;
  truth.transitive_edges = find_transitive_edges(g);
  SimplificationResult tips = trim_tips(g, max_tip_len);
  truth.tip_edges = tips.removed_edges;
  truth.tip_nodes = tips.removed_nodes;
  truth.bubble_removable_edges = pop_bubbles(g, max_path_len).removed_edges;

  std::array<double, 3> out{};
  for (Algorithm alg : kAllAlgorithms) {
    auto trace = traces::build_trace(g, truth, alg);
    out[static_cast<std::size_t>(alg)] =
        evaluate_traces(params, {{&g, &trace}}, mode);
  }
  return out;
}

std::string report_to_csv(const EvalReport& report) {
  std::string out;
  out += "# nge evaluation report\n";
  out += "# accuracy_mode," + std::string(eval_mode_name(report.mode)) + "\n";
  out += "# accuracy excludes step t=1 (inputs equal targets there)\n";
  for (const auto& [key, value] : report.config_echo) {
    out += "# " + key + "," + value + "\n";
  }
  out += "algorithm";
  for (std::uint32_t scale : report.scales) {
    out += "," + std::to_string(scale) + "x";
  }
  out += "\n";
  for (std::size_t a = 0; a < report.algorithms.size(); ++a) {
    out += algorithm_name(report.algorithms[a]);
    for (double value : report.accuracy[a]) {
      out += "," + format_accuracy(value);
    }
    out += "\n";
  }
  return out;
}

void export_report(const EvalReport& report, const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) {
      throw std::runtime_error("cannot write report: " + tmp);
    }
    out << report_to_csv(report);
    out.flush();
    if (!out) {
      throw std::runtime_error("failed writing report: " + tmp);
    }
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace nge::train
