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

// Acceptance run: one PASS/FAIL line per criterion. With no arguments every
// criterion runs; `--criterion N` runs one. Exit status is nonzero if any
// selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <set>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "focusdetr/complexity/cost_model.hpp"
#include "focusdetr/encoder/encoder.hpp"
#include "focusdetr/geometry/labels.hpp"
#include "focusdetr/harness/config.hpp"
#include "focusdetr/harness/scenes.hpp"
#include "focusdetr/harness/selection.hpp"
#include "focusdetr/harness/training.hpp"
#include "support/encoder_oracle.hpp"
#include "support/grad_cases.hpp"

namespace fs = std::filesystem;
using namespace fdetr;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  double budget_seconds;
  std::function<Outcome()> run;
};

// ---- 1-3: closed-form cost model -------------------------------------------

Outcome enhancement_ratio() {
  const auto r = complexity::build_report({});
  const bool pass = std::abs(r.enhancement_ratio - 0.01601) <= 1e-5 && r.enhancement_ratio < 0.025;
  return {pass, fmt::format("G_enh/(G_enc+G_dec) = {:.8f}, target 0.01601 +/- 1e-5 and < 0.025",
                            r.enhancement_ratio)};
}

Outcome keep_ratio_reduction() {
  complexity::CostConfig c;
  c.keep_ratio = 0.3;
  const auto r = complexity::build_report(c);
  return {r.reduction_cross_only > 60.0,
          fmt::format("reduction at 0.3: {:.4f}% cross-attention decoder (> 60% required), "
                      "{:.4f}% cross+self decoder",
                      r.reduction_cross_only, r.reduction_with_self)};
}

Outcome encoder_decoder_ratio() {
  const auto r = complexity::build_report({});
  const bool values = std::abs(r.ratio_cross_only - 11.11) < 0.005 &&
                      std::abs(r.ratio_with_self - 5.52) < 0.005;
  const bool brackets = r.ratio_with_self < 7.0 && 7.0 < r.ratio_cross_only;
  return {values && brackets,
          fmt::format("cross-only {:.4f}, cross+self {:.4f}; the quoted value 7 lies {} them",
                      r.ratio_cross_only, r.ratio_with_self, brackets ? "between" : "outside")};
}

// ---- 4: label oracle -------------------------------------------------------

geometry::Box overlap_box(Rng& rng, const geometry::ScaleIntervals& iv, double w, double h) {
  // Half-scales covered by exactly two intervals of the default layout.
  for (;;) {
    const double d = rng.uniform(65.0, 700.0);
    std::size_t hits = 0;
    for (const auto& i : iv.intervals()) hits += i.contains(d) ? 1 : 0;
    if (hits != 2) continue;
    // Both sides at least 128 px and the center 64 px inside the image, so
    // the clipped box spans an anchor of every level.
    const double aspect = rng.uniform(0.5, 1.0);
    double bw = 2.0 * d, bh = std::max(128.0, 2.0 * d * aspect);
    if (rng.uniform() < 0.5) std::swap(bw, bh);
    return {rng.uniform(64.0, w - 64.0), rng.uniform(64.0, h - 64.0), bw, bh,
            static_cast<std::size_t>(rng.uniform_int(0, 2))};
  }
}

Outcome label_oracle() {
  Rng rng(20240401);
  const auto iv = geometry::ScaleIntervals::overlapping_default();
  std::size_t mismatches = 0, overlap_boxes = 0, overlap_failures = 0, boxes_total = 0;
  for (int scene = 0; scene < 1000; ++scene) {
    const auto w = static_cast<std::size_t>(rng.uniform_int(256, 640));
    const auto h = static_cast<std::size_t>(rng.uniform_int(256, 640));
    const geometry::PyramidGeometry geom(w, h, 1);
    geometry::BoxSet boxes;
    const auto n = rng.uniform_int(0, 12);
    for (std::int64_t b = 0; b < n; ++b) {
      boxes.boxes.push_back({rng.uniform(-50.0, w + 50.0), rng.uniform(-50.0, h + 50.0),
                             std::exp(rng.uniform(std::log(2.0), std::log(1800.0))),
                             std::exp(rng.uniform(std::log(2.0), std::log(1800.0))),
                             static_cast<std::size_t>(rng.uniform_int(0, 2))});
    }
    const auto overlap = overlap_box(rng, iv, static_cast<double>(w), static_cast<double>(h));
    boxes.boxes.push_back(overlap);
    boxes_total += boxes.boxes.size();
    if (geometry::assign_labels(boxes, geom, iv) != geometry::assign_labels_oracle(boxes, geom, iv)) {
      ++mismatches;
    }

    const geometry::BoxSet alone{{overlap}};
    const auto labels = geometry::assign_labels(alone, geom, iv);
    if (labels != geometry::assign_labels_oracle(alone, geom, iv)) ++mismatches;
    std::size_t labeled_levels = 0;
    for (std::size_t l = 0; l < labels.levels.size(); ++l) {
      const auto d = labels.levels[l].data();
      const bool any = std::any_of(d.begin(), d.end(), [](double v) { return v != 0.0; });
      const bool eligible = iv[l].contains(geometry::box_scale(overlap));
      if (any != eligible) ++overlap_failures;
      labeled_levels += any ? 1 : 0;
    }
    if (labeled_levels != 2) ++overlap_failures;
    ++overlap_boxes;
  }
  return {mismatches == 0 && overlap_failures == 0,
          fmt::format("1000 scenes, {} boxes: {} oracle mismatches; {} overlap-scale boxes, {} not "
                      "labeling exactly their 2 levels",
                      boxes_total, mismatches, overlap_boxes, overlap_failures)};
}

// ---- 5: gradient suite -----------------------------------------------------

Outcome gradient_suite() {
  constexpr int kTrials = 100;
  bool pass = true;
  std::string detail;
  const auto run = [&](const std::vector<testing::GradCase>& cases, double tol, const char* tier) {
    double worst = 0.0;
    std::string worst_name;
    for (const auto& gc : cases) {
      Rng rng(std::hash<std::string>{}(gc.name) ^ 0xACCE97ULL);
      for (int trial = 0; trial < kTrials; ++trial) {
        const auto t = gc.draw(rng);
        const double err = testing::gradcheck(t.build, t.params).relative_error;
        if (!(err < tol)) pass = false;
        if (!(err <= worst)) {
          worst = err;
          worst_name = gc.name;
        }
      }
    }
    detail += fmt::format("{}{}: {} ops x {} trials, worst {:.2e} ({}) vs {:.0e}",
                          detail.empty() ? "" : "; ", tier, cases.size(), kTrials, worst,
                          worst_name, tol);
  };
  run(testing::op_level_cases(), 1e-4, "op-level");
  run(testing::end_to_end_cases(), 1e-3, "end-to-end");
  return {pass, detail};
}

// ---- 6: encoder layer contracts ----------------------------------------------

Outcome layer_contracts() {
  Rng rng(6006);
  std::size_t locality = 0, nesting = 0, budget = 0, weights = 0, forward = 0;
  double worst_sum = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::size_t> strides{8, 16};
    if (rng.uniform() < 0.5) strides.push_back(32);
    const auto w = static_cast<std::size_t>(rng.uniform_int(16, 72));
    const auto h = static_cast<std::size_t>(rng.uniform_int(16, 72));
    const geometry::PyramidGeometry geom(w, h, strides, 8);

    encoder::EncoderConfig config;
    config.channels = 8;
    config.heads = 2;
    config.points = static_cast<std::size_t>(rng.uniform_int(1, 3));
    config.object_tokens = static_cast<std::size_t>(rng.uniform_int(1, 40));
    config.num_layers = static_cast<std::size_t>(rng.uniform_int(1, 4));
    double r = 1.0;
    config.keep_ratios.clear();
    for (std::size_t l = 0; l < config.num_layers; ++l) {
      r = rng.uniform(0.05, r);
      config.keep_ratios.push_back(r);
    }
    auto params = encoder::EncoderParams::init(config, strides.size(), 3, rng);
    for (auto& layer : params.layers) testing::perturb_deform(layer.deform, rng);

    geometry::FeaturePyramid pyr = testing::random_pyramid(geom, rng);
    std::vector<Tensor> scores;
    for (const auto& lv : geom.levels()) {
      scores.push_back(testing::random_tensor({lv.height, lv.width}, rng, 0.0, 1.0));
    }

    Tape tape;
    auto ws = encoder::flatten_pyramid(tape, pyr, scores, geom);
    std::vector<encoder::LayerTrace> manual;
    for (std::size_t l = 0; l < config.num_layers; ++l) {
      encoder::select_foreground(ws, l, config);
      const Tensor before = ws.tokens.value();
      const std::set<std::size_t> fg(ws.foreground.begin(), ws.foreground.end());
      if (l > 0 && !std::includes(manual.back().foreground.begin(), manual.back().foreground.end(),
                                  ws.foreground.begin(), ws.foreground.end())) {
        ++nesting;
      }
      const auto result = encoder::dual_attention_layer(ws, params.layers[l], params.head, config);
      for (std::size_t t = 0; t < ws.num_tokens(); ++t) {
        if (fg.count(t)) continue;
        for (std::size_t c = 0; c < config.channels; ++c) {
          if (ws.tokens.value().at(t, c) != before.at(t, c)) {
            ++locality;
            t = ws.num_tokens();
            break;
          }
        }
      }
      const auto& obj = result.trace.object;
      const std::set<std::size_t> obj_set(obj.begin(), obj.end());
      if (obj.size() != std::min(config.object_tokens, fg.size()) || obj_set.size() != obj.size() ||
          !std::includes(fg.begin(), fg.end(), obj_set.begin(), obj_set.end())) {
        ++budget;
      }
      const Tensor& wts = result.deform_weights.value();
      const std::size_t block = strides.size() * config.points;
      if (wts.dim(0) != fg.size() || wts.dim(1) != config.heads * block) ++weights;
      for (std::size_t q = 0; q < wts.dim(0); ++q) {
        for (std::size_t m = 0; m < config.heads; ++m) {
          double sum = 0.0;
          for (std::size_t e = 0; e < block; ++e) sum += wts.at(q, m * block + e);
          worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
          if (!(std::abs(sum - 1.0) <= 1e-12)) ++weights;
        }
      }
      manual.push_back(result.trace);
    }

    // The encoder entry point must follow the same schedule.
    Tape tape2;
    auto ws2 = encoder::flatten_pyramid(tape2, pyr, scores, geom);
    const auto trace = encoder::encoder_forward(ws2, params, config);
    bool same = trace.layers.size() == manual.size() && ws2.tokens.value() == ws.tokens.value();
    for (std::size_t l = 0; same && l < manual.size(); ++l) {
      same = trace.layers[l].foreground == manual[l].foreground &&
             trace.layers[l].object == manual[l].object;
    }
    if (!same) ++forward;
  }
  const bool pass = locality + nesting + budget + weights + forward == 0;
  return {pass, fmt::format("200 workspaces: locality {}, nesting {}, budget {}, weight-sum {} "
                            "(worst |sum-1| {:.1e}), forward-trace {} violations",
                            locality, nesting, budget, weights, worst_sum, forward)};
}

// ---- 7: learning property --------------------------------------------------

Outcome learning() {
  std::size_t passing = 0;
  std::string recalls;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    harness::HarnessConfig cfg;
    cfg.seed = seed;
    const auto train = harness::generate_scenes(cfg.train_spec(), cfg.train_scenes);
    const auto held_out = harness::generate_scenes(cfg.eval_spec(), cfg.eval_scenes);
    Rng rng = cfg.fts_rng();
    auto params = scoring::FtsParams::init(cfg.scene.channels, cfg.fts_hidden,
                                           cfg.scene.strides.size(), cfg.fts_activation, rng);
    const auto settings = cfg.train_settings();
    harness::train_fts(train, cfg.scene.geometry(), params, settings);
    const auto m = harness::evaluate_selection(held_out, cfg.scene.geometry(), params, 0.3);
    passing += m.recall >= 0.9 ? 1 : 0;
    recalls += fmt::format("{}{:.4f}", recalls.empty() ? "" : " ", m.recall);
  }
  const harness::HarnessConfig cfg;
  return {passing >= 4,
          fmt::format("held-out recall at 0.3 after {} epochs on {} scenes per seed: {} ({}/5 >= 0.9)",
                      cfg.train.epochs, cfg.train_scenes, recalls, passing)};
}

// ---- 8: CLI determinism ----------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::vector<fs::path> tree(const fs::path& root) {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) files.push_back(fs::relative(e.path(), root));
  }
  std::sort(files.begin(), files.end());
  return files;
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "fdetr_acceptance_determinism";
  fs::remove_all(root);
  fs::create_directories(root);
  {
    std::ofstream cfg(root / "config.json");
    cfg << R"({"seed": 11, "train_scenes": 24, "eval_scenes": 8, "train": {"epochs": 4}})" << "\n";
  }
  for (const char* run : {"a", "b"}) {
    const std::string cmd =
        fmt::format("\"{}\" run-pipeline --config \"{}\" --out \"{}\" > \"{}\" 2>&1", FOCUSDETR_CLI,
                    (root / "config.json").string(), (root / run).string(),
                    (root / (std::string(run) + ".log")).string());
    if (std::system(cmd.c_str()) != 0) {
      return {false, fmt::format("run-pipeline exited nonzero; see {}.log", (root / run).string())};
    }
  }
  const auto a = tree(root / "a"), b = tree(root / "b");
  std::size_t differing = 0;
  for (const auto& rel : a) {
    if (slurp(root / "a" / rel) != slurp(root / "b" / rel)) ++differing;
  }
  const bool pass = a == b && differing == 0 && !a.empty();
  const auto has = [&](const char* name) { return std::count(a.begin(), a.end(), fs::path(name)) > 0; };
  const bool complete = has("trace.json") && has("layers.csv") && has("selection.csv");
  if (pass) fs::remove_all(root);
  return {pass && complete, fmt::format("{} files per run, {} differing, file lists {}", a.size(),
                                        differing, a == b ? "equal" : "differ")};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "enhancement cost ratio", 1.0, enhancement_ratio},
      {2, "FLOP reduction at keep ratio 0.3", 1.0, keep_ratio_reduction},
      {3, "encoder/decoder cost ratio", 1.0, encoder_decoder_ratio},
      {4, "label assignment oracle equivalence", 30.0, label_oracle},
      {5, "finite-difference gradient suite", 120.0, gradient_suite},
      {6, "encoder layer contracts", 60.0, layer_contracts},
      {7, "selector learning property", 300.0, learning},
      {8, "run-pipeline determinism", 30.0, determinism},
  };
  int only = 0;
  if (argc == 3 && std::string(argv[1]) == "--criterion") only = std::atoi(argv[2]);
  else if (argc != 1) {
    fmt::print(stderr, "usage: {} [--criterion N]\n", argv[0]);
    return 2;
  }

  int failed = 0, ran = 0;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    ++ran;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, fmt::format("threw: {}", e.what())};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.budget_seconds;
    const bool pass = o.pass && in_time;
    failed += pass ? 0 : 1;
    fmt::print("[{}] {} {}: {} [{:.2f}s of {:.0f}s budget]\n", pass ? "PASS" : "FAIL", c.id, c.title,
               o.detail, secs, c.budget_seconds);
    std::fflush(stdout);
  }
  if (ran == 0) {
    fmt::print(stderr, "no criterion {}\n", only);
    return 2;
  }
  return failed == 0 ? 0 : 1;
}
