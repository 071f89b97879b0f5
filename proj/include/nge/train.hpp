#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "nge/graph.hpp"
#include "nge/model.hpp"
#include "nge/simplify.hpp"
#include "nge/traces.hpp"

namespace nge::train {

enum class TrainMode { isolated, parallel };

struct TrainConfig {
  double learning_rate = 1e-5;
  std::uint32_t patience = 10;    // epochs without validation improvement
  std::uint32_t max_epochs = 500;
  std::uint32_t train_count = 100;  // generated graphs, split train/val
  double val_fraction = 0.2;
  std::uint64_t seed = 0;
  TrainMode mode = TrainMode::parallel;
  Algorithm isolated_algorithm = Algorithm::transitive;
  std::uint32_t backbone_len = 50;
  std::size_t latent_dim = model::kDefaultLatentDim;
};

struct EpochLog {
  std::uint32_t epoch = 0;  // 1-based
  double train_loss = 0;    // mean per-step loss over the epoch's updates
  double val_loss = 0;
  double val_accuracy = 0;  // teacher-forced, steps t >= 2
};

struct TrainResult {
  model::ModelParams params;  // the best-validation snapshot
  std::vector<EpochLog> log;
  std::uint32_t best_epoch = 0;
  bool stopped_early = false;
};

// Trains from generated data. Graphs come from seed substreams (training and
// evaluation roots are separated, so the same user seed never leaks training
// graphs into evaluation). Isolated mode generates single-structure graphs
// and supervises one algorithm; parallel mode generates mixed graphs and
// interleaves the three algorithms' traces round-robin within every epoch,
// each update touching the active algorithm's heads plus the shared
// processor. Optimization is per step: every teacher-forced step runs its
// own tape and Adam update with the latent state carried over detached.
// Early stopping snapshots parameters on strict validation-loss improvement
// and stops after `patience` stale epochs. Non-finite values abort with
// epoch/graph/step context.
TrainResult train(const TrainConfig& config,
                  const std::function<void(const EpochLog&)>& on_epoch = {});

enum class EvalMode { teacher_forced, rollout };

const char* eval_mode_name(EvalMode mode);

struct EvalConfig {
  std::vector<std::uint32_t> scales{1, 2, 4, 8, 20};
  std::uint32_t graphs_per_scale = 10;
  std::uint32_t backbone_len = 50;
  std::uint64_t seed = 0;
  EvalMode mode = EvalMode::teacher_forced;
  std::vector<Algorithm> algorithms{Algorithm::transitive, Algorithm::tips,
                                    Algorithm::bubbles};
};

struct EvalReport {
  EvalMode mode = EvalMode::teacher_forced;
  std::vector<std::uint32_t> scales;
  std::vector<Algorithm> algorithms;
  // accuracy[a][s]: algorithm `algorithms[a]` at `scales[s]`
  std::vector<std::vector<double>> accuracy;
  std::vector<std::vector<std::uint64_t>> graph_counts;
  std::map<std::string, std::string> config_echo;
};

// Accuracy of one (graph, trace) batch. Teacher-forced mode feeds ground
// truth at every step and scores steps t >= 2; rollout mode scores the
// model's own rollout (cap |V| + 1) against the trace, aligned per step up
// to min(T_pred, T_true) with missing steps counted wrong. Batches whose
// traces have no scorable step (T = 1) count as vacuously perfect.
double evaluate_traces(
    model::ModelParams& params,
    const std::vector<std::pair<const AssemblyGraph*,
                                const traces::ExecutionTrace*>>& items,
    EvalMode mode);

// Evaluates freshly generated single-structure datasets per algorithm and
// scale, deterministic in config.seed.
EvalReport evaluate(model::ModelParams& params, const EvalConfig& config);

// Accuracy per algorithm on one real (unannotated) graph; the reference
// traces come from this library's own simplifiers under the given bounds.
// Order: transitive, tips, bubbles.
std::array<double, 3> evaluate_real_graph(model::ModelParams& params,
                                          const AssemblyGraph& g,
                                          EvalMode mode,
                                          std::uint32_t max_tip_len = 10,
                                          std::uint32_t max_path_len = 10);

// CSV: '#'-prefixed metadata naming the accuracy mode and config, then one
// row per algorithm with one accuracy column per scale.
void export_report(const EvalReport& report, const std::string& path);
std::string report_to_csv(const EvalReport& report);

}  // namespace nge::train
