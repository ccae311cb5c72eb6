// Copyright 2026 The focusdetr Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "focusdetr/encoder/encoder.hpp"
#include "focusdetr/harness/config.hpp"
#include "focusdetr/harness/pipeline.hpp"
#include "focusdetr/harness/scenes.hpp"
#include "focusdetr/harness/selection.hpp"
#include "focusdetr/harness/training.hpp"

namespace fdetr::harness {
namespace {

namespace fs = std::filesystem;

// 64×64 image: maps 8×8, 4×4, 2×2, 1×1, N = 85 tokens.
SceneSpec toy_spec(std::uint64_t seed = 3) {
  SceneSpec s;
  s.image_width = s.image_height = 64;
  s.seed = seed;
  return s;
}

fs::path scratch_dir() {
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  auto dir = fs::temp_directory_path() /
             (std::string("fdetr_") + info->test_suite_name() + "_" + info->name());
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::vector<double> flatten(const std::vector<Tensor>& levels) {
  std::vector<double> out;
  for (const auto& t : levels) out.insert(out.end(), t.data().begin(), t.data().end());
  return out;
}

void zero_parameters(scoring::FtsParams& p) {
  for (auto* param : p.parameters()) {
    for (double& v : param->value.data()) v = 0.0;
  }
}

std::vector<std::vector<Tensor>> random_scores(const std::vector<SyntheticScene>& scenes, Rng& rng) {
  std::vector<std::vector<Tensor>> out;
  for (const auto& s : scenes) {
    std::vector<Tensor> levels;
    for (const auto& lb : s.labels.levels) {
      Tensor t(lb.shape());
      for (double& v : t.data()) v = rng.uniform();
      levels.push_back(t);
    }
    out.push_back(levels);
  }
  return out;
}

std::vector<geometry::LabelPyramid> labels_of(const std::vector<SyntheticScene>& scenes) {
  std::vector<geometry::LabelPyramid> out;
  for (const auto& s : scenes) out.push_back(s.labels);
  return out;
}

// ---- scene generation ----------------------------------------------------

TEST(GenerateScenesTest, SameSpecIsBitIdentical) {
  const auto a = generate_scenes(toy_spec(), 5);
  const auto b = generate_scenes(toy_spec(), 5);
  ASSERT_EQ(a.size(), 5u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].boxes.boxes, b[i].boxes.boxes);
    EXPECT_EQ(a[i].features.levels, b[i].features.levels);
    EXPECT_EQ(a[i].labels, b[i].labels);
  }
}

TEST(GenerateScenesTest, SceneDoesNotDependOnSetSize) {
  const auto many = generate_scenes(toy_spec(), 6);
  const auto one = make_scene(toy_spec(), 4);
  EXPECT_EQ(many[4].boxes.boxes, one.boxes.boxes);
  EXPECT_EQ(many[4].features.levels, one.features.levels);
}

TEST(GenerateScenesTest, DifferentSeedsDiffer) {
  const auto a = generate_scenes(toy_spec(1), 1);
  const auto b = generate_scenes(toy_spec(2), 1);
  EXPECT_NE(a[0].features.levels, b[0].features.levels);
}

TEST(GenerateScenesTest, ZeroBoxesGivesPureNoiseAndNoPositives) {
  auto spec = toy_spec();
  spec.min_boxes = spec.max_boxes = 0;
  for (const auto& s : generate_scenes(spec, 20)) {
    EXPECT_TRUE(s.boxes.boxes.empty());
    EXPECT_EQ(s.labels.positives(), 0u);
  }
}

TEST(GenerateScenesTest, NoiseFreeEmptySceneIsZero) {
  auto spec = toy_spec();
  spec.min_boxes = spec.max_boxes = 0;
  spec.noise_std = 0.0;
  for (const auto& level : make_scene(spec, 0).features.levels) {
    for (double v : level.data()) EXPECT_EQ(v, 0.0);
  }
}

TEST(GenerateScenesTest, BoxCountsAndCentersStayInRange) {
  const auto spec = toy_spec();
  for (const auto& s : generate_scenes(spec, 100)) {
    const auto& boxes = s.boxes.boxes;
    EXPECT_GE(boxes.size(), spec.min_boxes);
    EXPECT_LE(boxes.size(), spec.max_boxes);
    for (const auto& b : boxes) {
      EXPECT_GE(b.x, 0.0);
      EXPECT_LT(b.x, 64.0);
      EXPECT_GE(b.y, 0.0);
      EXPECT_LT(b.y, 64.0);
      const double scale = geometry::box_scale(b);
      EXPECT_GE(scale, spec.min_scale * (1 - 1e-12));
      EXPECT_LE(scale, spec.max_scale * (1 + 1e-12));
      EXPECT_LT(b.cls, spec.num_classes);
    }
  }
}

TEST(GenerateScenesTest, EveryIntervalReceivesABoxInOneHundredScenes) {
  const SceneSpec spec;
  const auto intervals = spec.scale_intervals();
  std::vector<std::size_t> hits(intervals.size(), 0);
  for (const auto& s : generate_scenes(spec, 100)) {
    for (const auto& b : s.boxes.boxes) {
      for (std::size_t l = 0; l < intervals.size(); ++l) {
        hits[l] += intervals[l].contains(geometry::box_scale(b)) ? 1 : 0;
      }
    }
  }
  for (std::size_t l = 0; l < hits.size(); ++l) EXPECT_GE(hits[l], 1u) << "level " << l;
}

TEST(GenerateScenesTest, PositiveTokensCarryMoreEnergyThanNoise) {
  const auto spec = toy_spec();
  double pos_energy = 0.0, neg_energy = 0.0;
  std::size_t pos = 0, neg = 0;
  for (const auto& s : generate_scenes(spec, 50)) {
    for (std::size_t l = 0; l < s.labels.levels.size(); ++l) {
      const auto& f = s.features.levels[l];
      const auto& lb = s.labels.levels[l];
      for (std::size_t t = 0; t < lb.size(); ++t) {
        double e = 0.0;
        for (std::size_t c = 0; c < spec.channels; ++c) {
          const double v = f[t * spec.channels + c];
          e += v * v;
        }
        e /= static_cast<double>(spec.channels);
        (lb[t] != 0.0 ? pos_energy : neg_energy) += e;
        (lb[t] != 0.0 ? pos : neg) += 1;
      }
    }
  }
  ASSERT_GT(pos, 0u);
  const double floor = spec.noise_std * spec.noise_std;
  // A positive anchor lies inside its box, so the blob adds a unit-RMS pattern.
  EXPECT_GT(pos_energy / static_cast<double>(pos), floor + 0.5);
  EXPECT_GT(neg_energy / static_cast<double>(neg), 0.5 * floor);
}

TEST(GenerateScenesTest, ClassPatternsAreUnitRmsAndIgnoreSceneSeed) {
  auto a = toy_spec(1), b = toy_spec(2);
  const Tensor pa = class_patterns(a);
  EXPECT_EQ(pa, class_patterns(b));
  for (std::size_t k = 0; k < a.num_classes; ++k) {
    double ms = 0.0;
    for (std::size_t c = 0; c < a.channels; ++c) ms += pa.at(k, c) * pa.at(k, c);
    EXPECT_NEAR(ms / static_cast<double>(a.channels), 1.0, 1e-12);
  }
  b.pattern_seed = 9;
  EXPECT_NE(pa, class_patterns(b));
}

TEST(GenerateScenesTest, RejectsInvalidRequests) {
  EXPECT_THROW(generate_scenes(toy_spec(), 0), std::invalid_argument);
  auto spec = toy_spec();
  spec.min_boxes = 4;
  spec.max_boxes = 2;
  EXPECT_THROW(generate_scenes(spec, 1), std::invalid_argument);
  spec = toy_spec();
  spec.min_scale = 0.0;
  EXPECT_THROW(generate_scenes(spec, 1), std::invalid_argument);
  spec = toy_spec();
  spec.intervals.pop_back();
  EXPECT_THROW(generate_scenes(spec, 1), std::invalid_argument);
}

TEST(DatasetTest, WriteReadRoundTripIsExact) {
  const auto dir = scratch_dir();
  const auto spec = toy_spec();
  const auto scenes = generate_scenes(spec, 4);
  write_dataset(dir, spec, scenes);
  const auto ds = read_dataset(dir);
  EXPECT_EQ(ds.spec.to_json(), spec.to_json());
  ASSERT_EQ(ds.scenes.size(), scenes.size());
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    EXPECT_EQ(ds.scenes[i].boxes.boxes, scenes[i].boxes.boxes);
    EXPECT_EQ(ds.scenes[i].features.levels, scenes[i].features.levels);
    EXPECT_EQ(ds.scenes[i].labels, scenes[i].labels);
  }
  fs::remove_all(dir);
}

TEST(DatasetTest, MissingDirectoryThrows) {
  EXPECT_THROW(read_dataset("/nonexistent/fdetr_dataset"), std::runtime_error);
}

TEST(SceneSpecTest, JsonRoundTrip) {
  auto spec = toy_spec(17);
  spec.pattern_seed = 5;
  spec.noise_std = 0.25;
  const auto back = SceneSpec::from_json(spec.to_json());
  EXPECT_EQ(back.to_json(), spec.to_json());
  EXPECT_EQ(back.intervals, spec.intervals);
}

// ---- selection metrics ---------------------------------------------------

TEST(EvaluateScoresTest, OracleScoresRecallAllWithinBudget) {
  const auto scenes = generate_scenes(toy_spec(), 100);
  std::vector<std::vector<Tensor>> oracle;
  std::size_t expected_hits = 0, positives = 0;
  const double ratio = 0.3;
  for (const auto& s : scenes) {
    oracle.push_back(s.labels.levels);
    const std::size_t p = s.labels.positives();
    expected_hits += std::min(p, encoder::keep_count(ratio, 85));
    positives += p;
  }
  const auto m = evaluate_scores(oracle, labels_of(scenes), ratio);
  EXPECT_EQ(m.positives, positives);
  EXPECT_EQ(m.kept_positives, expected_hits);

  // Restricting to scenes whose positives fit the budget gives recall 1.
  std::vector<std::vector<Tensor>> fit_scores;
  std::vector<geometry::LabelPyramid> fit_labels;
  for (const auto& s : scenes) {
    if (s.labels.positives() <= encoder::keep_count(ratio, 85)) {
      fit_scores.push_back(s.labels.levels);
      fit_labels.push_back(s.labels);
    }
  }
  ASSERT_GT(fit_scores.size(), 10u);
  const auto fit = evaluate_scores(fit_scores, fit_labels, ratio);
  EXPECT_EQ(fit.recall, 1.0);
  EXPECT_EQ(fit.mean_scene_recall, 1.0);
}

TEST(EvaluateScoresTest, FullBudgetKeepsEverything) {
  const auto scenes = generate_scenes(toy_spec(), 10);
  Rng rng(4);
  const auto m = evaluate_scores(random_scores(scenes, rng), labels_of(scenes), 1.0);
  EXPECT_EQ(m.recall, 1.0);
  EXPECT_EQ(m.kept, 850u);
}

TEST(EvaluateScoresTest, RandomScoresRecallNearRatio) {
  const auto scenes = generate_scenes(toy_spec(), 500);
  Rng rng(11);
  const auto m = evaluate_scores(random_scores(scenes, rng), labels_of(scenes), 0.3);
  EXPECT_NEAR(m.recall, 0.3, 0.05);
}

TEST(EvaluateScoresTest, RecallMonotoneInRatio) {
  const auto scenes = generate_scenes(toy_spec(), 100);
  Rng rng(12);
  const auto scores = random_scores(scenes, rng);
  const auto labels = labels_of(scenes);
  double prev_recall = 0.0, prev_scene = 0.0;
  for (int step = 1; step <= 20; ++step) {
    const auto m = evaluate_scores(scores, labels, step / 20.0);
    EXPECT_GE(m.recall, prev_recall);
    EXPECT_GE(m.mean_scene_recall, prev_scene);
    EXPECT_GE(m.precision, 0.0);
    EXPECT_LE(m.precision, 1.0);
    EXPECT_LE(m.recall, 1.0);
    prev_recall = m.recall;
    prev_scene = m.mean_scene_recall;
  }
}

TEST(EvaluateScoresTest, LevelRecallPoolsPerLevel) {
  // One scene, two levels of two tokens; positives at level0[1] and level1[0].
  geometry::LabelPyramid labels{{Tensor({1, 2}, {0, 1}), Tensor({1, 2}, {1, 0})}};
  std::vector<Tensor> scores{Tensor({1, 2}, {0.1, 0.9}), Tensor({1, 2}, {0.2, 0.8})};
  const auto m = evaluate_scores({scores}, {labels}, 0.5);
  // Budget 2 keeps the 0.9 and 0.8 tokens.
  EXPECT_EQ(m.kept, 2u);
  EXPECT_EQ(m.kept_positives, 1u);
  EXPECT_DOUBLE_EQ(m.recall, 0.5);
  EXPECT_DOUBLE_EQ(m.precision, 0.5);
  ASSERT_EQ(m.level_recall.size(), 2u);
  EXPECT_DOUBLE_EQ(m.level_recall[0], 1.0);
  EXPECT_DOUBLE_EQ(m.level_recall[1], 0.0);
  EXPECT_DOUBLE_EQ(m.mean_positive_score, (0.9 + 0.2) / 2);
  EXPECT_DOUBLE_EQ(m.mean_negative_score, (0.1 + 0.8) / 2);
}

TEST(EvaluateScoresTest, RejectsBadInput) {
  const auto scenes = generate_scenes(toy_spec(), 2);
  Rng rng(1);
  const auto scores = random_scores(scenes, rng);
  EXPECT_THROW(evaluate_scores(scores, labels_of(scenes), 0.0), std::invalid_argument);
  EXPECT_THROW(evaluate_scores(scores, labels_of(scenes), 1.5), std::invalid_argument);
  EXPECT_THROW(evaluate_scores(scores, {scenes[0].labels}, 0.3), std::invalid_argument);
}

TEST(EvaluateSelectionTest, ZeroWeightSelectorMatchesTieBreakBaseline) {
  const auto spec = toy_spec();
  const auto scenes = generate_scenes(spec, 200);
  const auto geom = spec.geometry();
  Rng rng(0);
  auto params = scoring::FtsParams::init(spec.channels, {16}, 4, Activation::kRelu, rng);
  zero_parameters(params);

  const double ratio = 0.3;
  const auto m = evaluate_selection(scenes, geom, params, ratio);
  EXPECT_DOUBLE_EQ(m.mean_positive_score, 0.5);
  EXPECT_DOUBLE_EQ(m.mean_negative_score, 0.5);

  // Every score ties, so the kept set is the first ⌈ρN⌉ flat indices.
  const std::size_t budget = encoder::keep_count(ratio, geom.total_tokens());
  std::size_t hits = 0, positives = 0;
  for (const auto& s : scenes) {
    const auto flat = flatten(s.labels.levels);
    for (std::size_t t = 0; t < flat.size(); ++t) {
      if (flat[t] == 0.0) continue;
      ++positives;
      hits += t < budget ? 1 : 0;
    }
  }
  EXPECT_EQ(m.kept_positives, hits);
  EXPECT_EQ(m.positives, positives);
}

TEST(MetricsCsvTest, HeaderAndSingleRow) {
  const auto dir = scratch_dir();
  SelectionMetrics m;
  m.ratio = 0.3;
  m.recall = 0.5;
  m.level_recall = {1.0, 0.25};
  write_metrics_csv(dir / "m.csv", m);
  std::istringstream in(slurp(dir / "m.csv"));
  std::string header, row, extra;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(header,
            "ratio,recall,mean_scene_recall,precision,mean_positive_score,mean_negative_score,"
            "positives,kept,kept_positives,scenes,level0_recall,level1_recall");
  EXPECT_EQ(row.rfind("0.29999999999999999,0.5,", 0), 0u) << row;
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), std::count(header.begin(), header.end(), ','));
  EXPECT_FALSE(std::getline(in, extra) && !extra.empty());
  fs::remove_all(dir);
}

// ---- training ------------------------------------------------------------

TEST(TrainFtsTest, ZeroLearningRateLeavesParametersUnchanged) {
  const auto spec = toy_spec();
  const auto scenes = generate_scenes(spec, 6);
  Rng rng(2);
  auto params = scoring::FtsParams::init(spec.channels, {8}, 4, Activation::kRelu, rng);
  std::vector<Tensor> before;
  for (auto* p : params.parameters()) before.push_back(p->value);

  TrainConfig tc;
  tc.lr = 0.0;
  tc.epochs = 4;
  tc.batch_size = 4;
  const auto result = train_fts(scenes, spec.geometry(), params, tc);
  const auto after = params.parameters();
  for (std::size_t i = 0; i < before.size(); ++i) EXPECT_EQ(after[i]->value, before[i]);
  ASSERT_EQ(result.loss_curve.size(), 4u);
  for (double l : result.loss_curve) EXPECT_EQ(l, result.loss_curve.front());
}

TEST(TrainFtsTest, SingleSceneTwoHundredEpochsLowersLoss) {
  const auto spec = toy_spec(8);
  const auto scenes = generate_scenes(spec, 1);
  Rng rng(3);
  auto params = scoring::FtsParams::init(spec.channels, {16}, 4, Activation::kRelu, rng);
  TrainConfig tc;
  tc.epochs = 200;
  const auto result = train_fts(scenes, spec.geometry(), params, tc);
  ASSERT_EQ(result.loss_curve.size(), 200u);
  EXPECT_LT(result.loss_curve.back(), result.loss_curve.front());
  for (double l : result.loss_curve) EXPECT_TRUE(std::isfinite(l));
}

TEST(TrainFtsTest, LossStrictlyDecreasesOverFirstTenEpochs) {
  const HarnessConfig base;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    HarnessConfig cfg = base;
    cfg.seed = seed;
    const auto scenes = generate_scenes(cfg.train_spec(), cfg.train_scenes);
    Rng rng = cfg.fts_rng();
    auto params = scoring::FtsParams::init(cfg.scene.channels, cfg.fts_hidden,
                                           cfg.scene.strides.size(), cfg.fts_activation, rng);
    auto tc = cfg.train_settings();
    tc.epochs = 10;
    const auto curve = train_fts(scenes, cfg.scene.geometry(), params, tc).loss_curve;
    for (std::size_t e = 1; e < curve.size(); ++e) {
      EXPECT_LT(curve[e], curve[e - 1]) << "seed " << seed << " epoch " << e;
    }
  }
}

TEST(TrainFtsTest, CallbackCanStopEarly) {
  const auto spec = toy_spec();
  const auto scenes = generate_scenes(spec, 2);
  Rng rng(4);
  auto params = scoring::FtsParams::init(spec.channels, {4}, 4, Activation::kRelu, rng);
  TrainConfig tc;
  tc.epochs = 50;
  std::size_t calls = 0;
  const auto result = train_fts(scenes, spec.geometry(), params, tc, [&](std::size_t e, double) {
    ++calls;
    return e < 2;
  });
  EXPECT_EQ(calls, 3u);
  EXPECT_EQ(result.loss_curve.size(), 3u);
}

TEST(TrainFtsTest, NonFiniteLossAborts) {
  const auto spec = toy_spec();
  const auto scenes = generate_scenes(spec, 2);
  Rng rng(5);
  auto params = scoring::FtsParams::init(spec.channels, {4}, 4, Activation::kRelu, rng);
  params.alphas[0].value.data()[0] = std::numeric_limits<double>::quiet_NaN();
  TrainConfig tc;
  tc.epochs = 2;
  EXPECT_THROW(train_fts(scenes, spec.geometry(), params, tc), std::runtime_error);
}

TEST(TrainFtsTest, DivergingLearningRateAborts) {
  const auto spec = toy_spec();
  const auto scenes = generate_scenes(spec, 4);
  Rng rng(6);
  auto params = scoring::FtsParams::init(spec.channels, {8}, 4, Activation::kRelu, rng);
  TrainConfig tc;
  tc.epochs = 50;
  tc.lr = 1e300;
  EXPECT_THROW(train_fts(scenes, spec.geometry(), params, tc), std::runtime_error);
}

TEST(TrainFtsTest, RejectsEmptySceneListAndBadConfig) {
  const auto spec = toy_spec();
  Rng rng(7);
  auto params = scoring::FtsParams::init(spec.channels, {4}, 4, Activation::kRelu, rng);
  EXPECT_THROW(train_fts({}, spec.geometry(), params, TrainConfig{}), std::invalid_argument);
  TrainConfig tc;
  tc.batch_size = 0;
  EXPECT_THROW(tc.validate(), std::invalid_argument);
  tc = TrainConfig{};
  tc.lr = -1.0;
  EXPECT_THROW(tc.validate(), std::invalid_argument);
}

// ---- configuration -------------------------------------------------------

TEST(ConfigTest, JsonRoundTripPreservesHash) {
  HarnessConfig c;
  c.seed = 42;
  c.train_scenes = 17;
  c.fts_hidden = {8, 4};
  c.fts_activation = Activation::kGelu;
  c.train.lr = 0.5;
  c.encoder.keep_ratios = {1.0, 0.5};
  c.encoder.num_layers = 2;
  c.eval_ratio = 0.25;
  const auto back = HarnessConfig::from_json(c.to_json());
  EXPECT_EQ(back.to_json(), c.to_json());
  EXPECT_EQ(config_hash(back), config_hash(c));
}

TEST(ConfigTest, HashTracksContent) {
  HarnessConfig a, b;
  EXPECT_EQ(config_hash(a), config_hash(b));
  b.seed = 1;
  EXPECT_NE(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 16u);
}

TEST(ConfigTest, Fnv1aMatchesReferenceVectors) {
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
  EXPECT_EQ(fnv1a_hex("foobar"), "85944171f73967e8");
}

TEST(ConfigTest, MissingKeysKeepDefaults) {
  const auto c = HarnessConfig::from_json(nlohmann::json::parse(R"({"seed": 9})"));
  const HarnessConfig d;
  EXPECT_EQ(c.seed, 9u);
  auto dj = d.to_json();
  dj["seed"] = 9;
  EXPECT_EQ(c.to_json(), dj);
}

TEST(ConfigTest, RejectsInconsistentConfig) {
  auto j = HarnessConfig{}.to_json();
  j["encoder"]["channels"] = 16;
  j["encoder"]["heads"] = 4;
  EXPECT_THROW(HarnessConfig::from_json(j), std::invalid_argument);
  j = HarnessConfig{}.to_json();
  j["eval_ratio"] = 0.0;
  EXPECT_THROW(HarnessConfig::from_json(j), std::invalid_argument);
  j = HarnessConfig{}.to_json();
  j["fts"]["activation"] = "tanh";
  EXPECT_THROW(HarnessConfig::from_json(j), std::invalid_argument);
}

TEST(ConfigTest, TrainAndEvalSetsDiffer) {
  const HarnessConfig c;
  EXPECT_NE(c.train_spec().seed, c.eval_spec().seed);
  EXPECT_EQ(c.train_spec().pattern_seed, c.eval_spec().pattern_seed);
}

// ---- pipeline ------------------------------------------------------------

struct ToyPipeline {
  SceneSpec spec = toy_spec(21);
  encoder::EncoderConfig config = encoder::EncoderConfig::toy();
  SyntheticScene scene = make_scene(spec, 0);
  Rng rng{5};
  scoring::FtsParams fts =
      scoring::FtsParams::init(spec.channels, {16}, spec.strides.size(), Activation::kRelu, rng);
  encoder::EncoderParams enc;

  explicit ToyPipeline(std::vector<double> ratios = encoder::EncoderConfig::cascade_schedule()) {
    config.keep_ratios = std::move(ratios);
    config.num_layers = config.keep_ratios.size();
    enc = encoder::EncoderParams::init(config, spec.strides.size(), spec.num_classes, rng);
  }

  PipelineResult run() { return run_pipeline(scene, spec.geometry(), fts, enc, config, 0.3); }
};

TEST(PipelineTest, FullScheduleRetainsEveryToken) {
  ToyPipeline p(std::vector<double>(3, 1.0));
  const auto r = p.run();
  ASSERT_EQ(r.trace.layers.size(), 3u);
  for (const auto& layer : r.trace.layers) {
    std::set<std::size_t> fg(layer.foreground.begin(), layer.foreground.end());
    EXPECT_EQ(fg.size(), 85u);
  }
  for (const auto& m : r.layers) EXPECT_EQ(m.foreground, 85u);
}

TEST(PipelineTest, LayerMetricsFollowTheTrace) {
  ToyPipeline p;
  const auto r = p.run();
  ASSERT_EQ(r.layers.size(), p.config.num_layers);
  const std::size_t positives = p.scene.labels.positives();
  for (std::size_t n = 0; n < r.layers.size(); ++n) {
    EXPECT_EQ(r.layers[n].foreground, encoder::keep_count(p.config.keep_ratios[n], 85));
    EXPECT_EQ(r.layers[n].object, std::min(p.config.object_tokens, r.layers[n].foreground));
    EXPECT_GE(r.layers[n].foreground_recall, 0.0);
    EXPECT_LE(r.layers[n].foreground_recall, 1.0);
    if (positives == 0) EXPECT_EQ(r.layers[n].foreground_recall, 0.0);
  }
  EXPECT_EQ(r.tokens.shape(), (Shape{85, p.spec.channels}));
}

void write_all(const fs::path& dir, const PipelineResult& r, const ToyPipeline& p) {
  write_trace_json(dir / "trace.json", r.trace, p.spec.geometry(), p.config);
  write_layer_metrics_csv(dir / "layers.csv", r.layers);
  write_metrics_csv(dir / "selection.csv", r.selection);
  write_heatmaps(dir / "heatmaps", r.trace, p.spec.geometry());
}

TEST(PipelineTest, FixedSeedGivesByteIdenticalFiles) {
  const auto root = scratch_dir();
  for (const char* name : {"a", "b"}) {
    ToyPipeline p;
    fs::create_directories(root / name);
    write_all(root / name, p.run(), p);
  }
  std::size_t compared = 0;
  for (const auto& entry : fs::recursive_directory_iterator(root / "a")) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), root / "a");
    EXPECT_EQ(slurp(entry.path()), slurp(root / "b" / rel)) << rel;
    ++compared;
  }
  // trace, two CSVs, and six layers × four levels of heatmaps.
  EXPECT_EQ(compared, 3u + 6u * 4u);
  fs::remove_all(root);
}

TEST(PipelineTest, HeatmapEncodesSelection) {
  const auto dir = scratch_dir();
  ToyPipeline p;
  const auto r = p.run();
  const auto files = write_heatmaps(dir, r.trace, p.spec.geometry());
  ASSERT_EQ(files.size(), 24u);
  // Level 3 is one token drawn as a 64×64 block.
  const std::string pgm = slurp(dir / "layer0_level3.pgm");
  const std::string header = "P5\n64 64\n255\n";
  ASSERT_EQ(pgm.size(), header.size() + 64u * 64u);
  EXPECT_EQ(pgm.substr(0, header.size()), header);
  const auto& layer = r.trace.layers[0];
  const std::size_t token = 84;
  const bool is_obj = std::count(layer.object.begin(), layer.object.end(), token) > 0;
  const bool is_fg = std::count(layer.foreground.begin(), layer.foreground.end(), token) > 0;
  const auto expected = static_cast<char>(is_obj ? 255 : is_fg ? 160 : 0);
  EXPECT_TRUE(std::all_of(pgm.begin() + static_cast<long>(header.size()), pgm.end(),
                          [&](char c) { return c == expected; }));
  fs::remove_all(dir);
}

TEST(PipelineTest, ToySceneCompletesQuickly) {
  const auto start = std::chrono::steady_clock::now();
  ToyPipeline p;
  p.run();
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_LT(seconds, 10.0);
}

}  // namespace
}  // namespace fdetr::harness
