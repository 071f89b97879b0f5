#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"
#include "nge/checkpoint.hpp"
#include "nge/model.hpp"
#include "nge/synthgen.hpp"
#include "nge/traces.hpp"
#include "nge/train.hpp"

using namespace nge;

namespace {

train::TrainConfig tiny_config() {
  train::TrainConfig config;
  config.train_count = 5;
  config.backbone_len = 20;
  config.latent_dim = 8;
  config.max_epochs = 1;
  config.mode = train::TrainMode::isolated;
  config.isolated_algorithm = Algorithm::transitive;
  config.seed = 7;
  return config;
}

// All-zero parameters make every head output exactly its bias, which lets
// tests pin accuracies from the trace alone.
model::ModelParams biased_params(double node_bias, double stop_bias) {
  auto params = model::ModelParams::init(8, 0);
  for (auto& [name, tensor] : params.named_tensors()) {
    (void)name;
    for (double& v : tensor->data) {
      v = 0.0;
    }
  }
  for (auto& head : params.decoder) {
    head.b.data[0] = node_bias;
  }
  for (auto& head : params.termination) {
    head.b.data[0] = stop_bias;
  }
  return params;
}

// Accuracy of the constant all-ones predictor: the fraction of reached
// entries over every scored step (t >= 2).
double all_ones_accuracy(const traces::ExecutionTrace& trace,
                         std::uint32_t node_count) {
  std::uint64_t ones = 0;
  std::uint64_t total = 0;
  for (std::uint32_t t = 2; t <= trace.length(); ++t) {
    for (std::uint8_t bit : trace.steps[t - 1].reached) {
      ones += bit;
    }
    total += node_count;
  }
  return static_cast<double>(ones) / static_cast<double>(total);
}

std::filesystem::path scratch_dir() {
  auto dir = std::filesystem::temp_directory_path() / "nge_train_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("train rejects invalid configurations") {
  auto base = tiny_config();

  auto bad = base;
  bad.val_fraction = 0.0;
  CHECK_THROWS_AS(train::train(bad), std::invalid_argument);
  bad.val_fraction = 1.0;
  CHECK_THROWS_AS(train::train(bad), std::invalid_argument);

  bad = base;
  bad.patience = 0;
  CHECK_THROWS_AS(train::train(bad), std::invalid_argument);

  bad = base;
  bad.max_epochs = 0;
  CHECK_THROWS_AS(train::train(bad), std::invalid_argument);

  bad = base;
  bad.learning_rate = 0.0;
  CHECK_THROWS_AS(train::train(bad), std::invalid_argument);

  bad = base;
  bad.train_count = 1;
  CHECK_THROWS_AS(train::train(bad), std::invalid_argument);

  bad = base;
  bad.val_fraction = 0.9;
  bad.train_count = 2;  // rounds to 2 validation graphs, leaving none to train
  CHECK_THROWS_AS(train::train(bad), std::invalid_argument);
}

TEST_CASE("a single isolated epoch trains and logs") {
  auto config = tiny_config();
  std::vector<train::EpochLog> seen;
  auto result = train::train(config, [&](const train::EpochLog& log) {
    seen.push_back(log);
  });

  REQUIRE(result.log.size() == 1);
  CHECK(result.best_epoch == 1);
  CHECK_FALSE(result.stopped_early);
  CHECK(result.log[0].epoch == 1);
  CHECK(result.log[0].train_loss > 0.0);
  CHECK(result.log[0].val_loss > 0.0);
  CHECK(result.log[0].val_accuracy >= 0.0);
  CHECK(result.log[0].val_accuracy <= 1.0);

  REQUIRE(seen.size() == 1);
  CHECK(seen[0].epoch == result.log[0].epoch);
  CHECK(seen[0].val_loss == result.log[0].val_loss);

  for (const auto& [name, tensor] : result.params.named_tensors()) {
    (void)name;
    for (double v : tensor->data) {
      CHECK(std::isfinite(v));
    }
  }
}

TEST_CASE("training snapshots the best validation epoch") {
  auto config = tiny_config();
  config.max_epochs = 3;
  config.patience = 5;  // never triggers within three epochs
  auto result = train::train(config);

  REQUIRE(result.log.size() == 3);
  std::uint32_t expect_best = 1;
  double best = result.log[0].val_loss;
  for (const auto& log : result.log) {
    if (log.val_loss < best) {
      best = log.val_loss;
      expect_best = log.epoch;
    }
  }
  CHECK(result.best_epoch == expect_best);
}

TEST_CASE("training is deterministic in seed and config") {
  auto config = tiny_config();
  config.max_epochs = 2;
  auto a = train::train(config);
  auto b = train::train(config);

  REQUIRE(a.log.size() == b.log.size());
  for (std::size_t i = 0; i < a.log.size(); ++i) {
    CHECK(a.log[i].train_loss == b.log[i].train_loss);
    CHECK(a.log[i].val_loss == b.log[i].val_loss);
  }
  auto ta = a.params.named_tensors();
  auto tb = b.params.named_tensors();
  REQUIRE(ta.size() == tb.size());
  for (std::size_t i = 0; i < ta.size(); ++i) {
    CHECK(ta[i].first == tb[i].first);
    CHECK(ta[i].second->data == tb[i].second->data);
  }
}

TEST_CASE("parallel mode trains all three head sets") {
  auto config = tiny_config();
  config.mode = train::TrainMode::parallel;
  config.backbone_len = 30;
  auto result = train::train(config);
  REQUIRE(result.log.size() == 1);
  CHECK(std::isfinite(result.log[0].train_loss));

  // Every head moved away from the shared initialization: each algorithm's
  // traces contributed gradient steps to its own decoder.
  auto fresh = model::ModelParams::init(config.latent_dim, config.seed);
  for (std::size_t a = 0; a < model::kAlgorithmCount; ++a) {
    CHECK(result.params.decoder[a].W.data != fresh.decoder[a].W.data);
  }
}

TEST_CASE("isolated mode leaves the other algorithms' heads untouched") {
  auto config = tiny_config();
  config.isolated_algorithm = Algorithm::tips;
  auto result = train::train(config);

  auto fresh = model::ModelParams::init(config.latent_dim, config.seed);
  const auto tips = static_cast<std::size_t>(Algorithm::tips);
  CHECK(result.params.decoder[tips].W.data != fresh.decoder[tips].W.data);
  for (std::size_t a = 0; a < model::kAlgorithmCount; ++a) {
    if (a == tips) {
      continue;
    }
    CHECK(result.params.encoder[a].W.data == fresh.encoder[a].W.data);
    CHECK(result.params.decoder[a].W.data == fresh.decoder[a].W.data);
    CHECK(result.params.termination[a].b.data == fresh.termination[a].b.data);
  }
  // The processor is shared, so it must have moved.
  CHECK(result.params.message_net.W.data != fresh.message_net.W.data);
}

TEST_CASE("evaluate_traces scores a constant predictor exactly") {
  auto [graph, truth] = synthgen::generate(
      synthgen::GenSpec::isolated(Algorithm::transitive, 20, 1, 11));
  auto trace = traces::build_trace(graph, truth, Algorithm::transitive);
  const double expected = all_ones_accuracy(trace, graph.node_count());

  SUBCASE("teacher forced") {
    auto params = biased_params(3.0, 3.0);
    double acc = train::evaluate_traces(params, {{&graph, &trace}},
                                        train::EvalMode::teacher_forced);
    CHECK(acc == doctest::Approx(expected).epsilon(1e-12));
  }

  SUBCASE("rollout that never stops covers the whole trace") {
    auto params = biased_params(3.0, 3.0);
    double acc = train::evaluate_traces(params, {{&graph, &trace}},
                                        train::EvalMode::rollout);
    // The rollout caps at |V|+1 >= trace length, so the alignment window
    // covers every scored step and matches teacher forcing exactly.
    CHECK(acc == doctest::Approx(expected).epsilon(1e-12));
  }

  SUBCASE("rollout that stops immediately misses every scored step") {
    auto params = biased_params(3.0, -3.0);
    double acc = train::evaluate_traces(params, {{&graph, &trace}},
                                        train::EvalMode::rollout);
    CHECK(acc == 0.0);
  }
}

TEST_CASE("evaluate builds the full scale table deterministically") {
  auto params = model::ModelParams::init(8, 21);
  train::EvalConfig config;
  config.scales = {1, 2};
  config.graphs_per_scale = 2;
  config.backbone_len = 20;
  config.seed = 5;
  config.mode = train::EvalMode::teacher_forced;

  auto report = train::evaluate(params, config);
  REQUIRE(report.accuracy.size() == 3);
  for (const auto& row : report.accuracy) {
    REQUIRE(row.size() == 2);
    for (double v : row) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }

  auto again = train::evaluate(params, config);
  CHECK(report.accuracy == again.accuracy);

  // Requesting a subset of scales reproduces the same cells: the graph
  // stream is keyed by absolute scale, not by position in the request.
  auto subset_config = config;
  subset_config.scales = {2};
  auto subset = train::evaluate(params, subset_config);
  for (std::size_t a = 0; a < 3; ++a) {
    CHECK(subset.accuracy[a][0] == report.accuracy[a][1]);
  }
}

TEST_CASE("evaluate_real_graph scores all three algorithms on a bare graph") {
  auto [graph, truth] = synthgen::generate(synthgen::GenSpec::parallel(30, 1, 3));
  AssemblyGraph bare = AssemblyGraph::build(graph.node_count(), graph.edges());

  auto params = model::ModelParams::init(8, 21);
  auto scores = train::evaluate_real_graph(params, bare,
                                           train::EvalMode::teacher_forced);
  for (double v : scores) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("csv reports carry metadata, header, and one row per algorithm") {
  auto params = model::ModelParams::init(8, 21);
  train::EvalConfig config;
  config.scales = {1, 2};
  config.graphs_per_scale = 1;
  config.backbone_len = 20;
  config.seed = 5;
  auto report = train::evaluate(params, config);

  const std::string csv = train::report_to_csv(report);
  CHECK(csv.find("# accuracy_mode,teacher_forced") != std::string::npos);
  CHECK(csv.find("# accuracy excludes step t=1") != std::string::npos);
  CHECK(csv.find("algorithm,1x,2x\n") != std::string::npos);
  CHECK(csv.find("transitive,") != std::string::npos);
  CHECK(csv.find("tips,") != std::string::npos);
  CHECK(csv.find("bubbles,") != std::string::npos);

  std::size_t rows = 0;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') {
      ++rows;
    }
  }
  CHECK(rows == 4);  // header + three algorithms

  const auto path = scratch_dir() / "report.csv";
  train::export_report(report, path.string());
  std::ifstream reread(path);
  std::stringstream buffer;
  buffer << reread.rdbuf();
  CHECK(buffer.str() == csv);
  CHECK_FALSE(std::filesystem::exists(path.string() + ".tmp"));
  std::filesystem::remove_all(scratch_dir());
}

TEST_CASE("trained parameters round-trip through checkpoints unchanged") {
  auto config = tiny_config();
  auto result = train::train(config);

  const auto path = scratch_dir() / "trained.ckpt";
  io::save_checkpoint(result.params, path.string());
  auto loaded = io::load_checkpoint(path.string());

  auto expect = result.params.named_tensors();
  auto got = loaded.named_tensors();
  REQUIRE(expect.size() == got.size());
  for (std::size_t i = 0; i < expect.size(); ++i) {
    CHECK(expect[i].second->data == got[i].second->data);
  }
  std::filesystem::remove_all(scratch_dir());
}
