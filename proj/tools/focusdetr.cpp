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

// Command-line front end: synthetic data, selector training, selection
// metrics, encoder traces and the closed-form cost report.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "focusdetr/complexity/cost_model.hpp"
#include "focusdetr/encoder/encoder.hpp"
#include "focusdetr/harness/config.hpp"
#include "focusdetr/harness/pipeline.hpp"
#include "focusdetr/harness/scenes.hpp"
#include "focusdetr/harness/selection.hpp"
#include "focusdetr/harness/training.hpp"
#include "focusdetr/scoring/checkpoint.hpp"

namespace fs = std::filesystem;
using namespace fdetr;

namespace {

harness::HarnessConfig load_config(const std::string& path) {
  return path.empty() ? harness::HarnessConfig{} : harness::read_config(path);
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
  out << text;
}

void print_metrics(const harness::SelectionMetrics& m) {
  fmt::print("ratio {:.3f}: recall {:.4f} (per-scene mean {:.4f}), precision {:.4f}\n", m.ratio,
             m.recall, m.mean_scene_recall, m.precision);
  fmt::print("  mean score: positive {:.4f}, negative {:.4f}\n", m.mean_positive_score,
             m.mean_negative_score);
  for (std::size_t l = 0; l < m.level_recall.size(); ++l) {
    fmt::print("  level {} recall {:.4f}\n", l, m.level_recall[l]);
  }
}

scoring::FtsParams init_fts(const harness::HarnessConfig& cfg) {
  Rng rng = cfg.fts_rng();
  return scoring::FtsParams::init(cfg.scene.channels, cfg.fts_hidden, cfg.scene.strides.size(),
                                  cfg.fts_activation, rng);
}

encoder::EncoderParams init_encoder(const harness::HarnessConfig& cfg) {
  Rng rng = cfg.encoder_rng();
  return encoder::EncoderParams::init(cfg.encoder, cfg.scene.strides.size(), cfg.scene.num_classes,
                                      rng);
}

harness::TrainResult train_logged(const std::vector<harness::SyntheticScene>& scenes,
                                  const harness::HarnessConfig& cfg, scoring::FtsParams& params) {
  const auto settings = cfg.train_settings();
  const std::size_t every = std::max<std::size_t>(1, settings.epochs / 10);
  return harness::train_fts(scenes, cfg.scene.geometry(), params, settings,
                            [&](std::size_t epoch, double loss) {
                              if ((epoch + 1) % every == 0 || epoch == 0) {
                                fmt::print("epoch {:4d}  loss {:.6f}\n", epoch + 1, loss);
                              }
                              return true;
                            });
}

// Trace, per-layer metrics and heatmaps of one encoder run.
void write_encoder_outputs(const fs::path& dir, const harness::PipelineResult& r,
                           const harness::HarnessConfig& cfg) {
  fs::create_directories(dir);
  const auto geom = cfg.scene.geometry();
  harness::write_trace_json(dir / "trace.json", r.trace, geom, cfg.encoder);
  harness::write_layer_metrics_csv(dir / "layers.csv", r.layers);
  harness::write_metrics_csv(dir / "scene_selection.csv", r.selection);
  harness::write_heatmaps(dir / "heatmaps", r.trace, geom);
}

void print_layers(const harness::PipelineResult& r) {
  for (std::size_t n = 0; n < r.layers.size(); ++n) {
    const auto& m = r.layers[n];
    fmt::print("layer {}: keep {:.3f} -> {} foreground, {} object, recall {:.4f}, object precision {:.4f}\n",
               n, m.keep_ratio, m.foreground, m.object, m.foreground_recall, m.object_precision);
  }
}

// ---- subcommands ---------------------------------------------------------

void gen_data(const std::string& spec_path, std::size_t n, std::optional<std::uint64_t> seed,
              const std::string& out) {
  harness::SceneSpec spec;
  if (!spec_path.empty()) {
    const auto j = harness::read_json_file(spec_path);
    // A full harness config is accepted too; its "scene" block is the spec.
    spec = harness::SceneSpec::from_json(j.contains("scene") ? j["scene"] : j);
  }
  if (seed) spec.seed = *seed;
  const auto scenes = harness::generate_scenes(spec, n);
  harness::write_dataset(out, spec, scenes);
  std::size_t boxes = 0, positives = 0;
  for (const auto& s : scenes) {
    boxes += s.boxes.boxes.size();
    positives += s.labels.positives();
  }
  fmt::print("wrote {} scenes ({} boxes, {} positive tokens) to {}\n", n, boxes, positives, out);
}

void train_fts_cmd(const std::string& data, const std::string& config_path, const std::string& out) {
  auto cfg = load_config(config_path);
  const auto ds = harness::read_dataset(data);
  cfg.scene = ds.spec;
  cfg.validate();
  auto params = init_fts(cfg);
  const auto result = train_logged(ds.scenes, cfg, params);
  scoring::save_fts_checkpoint(out, params, cfg.seed, harness::config_hash(cfg));
  harness::write_loss_csv(fs::path(out).string() + ".loss.csv", result.loss_curve);
  fmt::print("checkpoint {}\n", out);
}

void eval_selection_cmd(const std::string& data, const std::string& ckpt, double ratio,
                        const std::string& csv) {
  const auto ds = harness::read_dataset(data);
  auto loaded = scoring::load_fts_checkpoint(ckpt);
  const auto m = harness::evaluate_selection(ds.scenes, ds.spec.geometry(), loaded.params, ratio);
  if (!csv.empty()) harness::write_metrics_csv(csv, m);
  print_metrics(m);
}

void run_encoder_cmd(const std::string& scene_path, const std::string& ckpt,
                     const std::string& config_path, const std::string& trace_dir) {
  const auto cfg = load_config(config_path);
  const auto scene = harness::read_scene_file(scene_path, cfg.scene);
  auto loaded = scoring::load_fts_checkpoint(ckpt);
  auto enc = init_encoder(cfg);
  const auto r = harness::run_pipeline(scene, cfg.scene.geometry(), loaded.params, enc, cfg.encoder,
                                       cfg.eval_ratio);
  write_encoder_outputs(trace_dir, r, cfg);
  print_layers(r);
}

void run_pipeline_cmd(const std::string& config_path, std::optional<std::uint64_t> seed,
                      const std::string& out) {
  auto cfg = load_config(config_path);
  if (seed) cfg.seed = *seed;
  cfg.validate();
  const fs::path dir(out);
  fs::create_directories(dir);
  write_text(dir / "config.json", cfg.to_json().dump(2) + "\n");

  const auto train = harness::generate_scenes(cfg.train_spec(), cfg.train_scenes);
  const auto held_out = harness::generate_scenes(cfg.eval_spec(), cfg.eval_scenes);
  const auto geom = cfg.scene.geometry();

  auto fts = init_fts(cfg);
  const auto result = train_logged(train, cfg, fts);
  scoring::save_fts_checkpoint(dir / "fts.ckpt", fts, cfg.seed, harness::config_hash(cfg));
  harness::write_loss_csv(dir / "loss.csv", result.loss_curve);

  const auto m = harness::evaluate_selection(held_out, geom, fts, cfg.eval_ratio);
  harness::write_metrics_csv(dir / "selection.csv", m);
  print_metrics(m);

  auto enc = init_encoder(cfg);
  const auto r = harness::run_pipeline(held_out.front(), geom, fts, enc, cfg.encoder, cfg.eval_ratio);
  write_encoder_outputs(dir, r, cfg);
  print_layers(r);
}

struct CostFlags {
  std::optional<double> points, channels, heads, tokens, queries, object_tokens;
};

void flops_report_cmd(const std::string& config_path, const CostFlags& flags,
                      const std::string& csv) {
  complexity::CostConfig base;
  if (!config_path.empty()) {
    const auto j = harness::read_json_file(config_path);
    base = harness::cost_config_from_json(j.contains("cost") ? j["cost"] : j);
  }
  if (flags.points) base.points = *flags.points;
  if (flags.channels) base.channels = *flags.channels;
  if (flags.heads) base.heads = *flags.heads;
  if (flags.tokens) base.encoder_tokens = *flags.tokens;
  if (flags.queries) base.decoder_queries = *flags.queries;
  if (flags.object_tokens) base.object_tokens = *flags.object_tokens;
  base.validate();

  std::string rows =
      "gamma,enc_flops,dec_cross,dec_self,enhancement,ratio_cross_only,ratio_with_self,"
      "reduction_pct\n";
  for (int step = 1; step <= 10; ++step) {
    auto c = base;
    c.keep_ratio = step / 10.0;
    const auto r = complexity::build_report(c);
    rows += fmt::format("{:.1f},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n",
                        c.keep_ratio, r.encoder_deformable, r.decoder_cross, r.decoder_self,
                        r.enhancement, r.ratio_cross_only, r.ratio_with_self,
                        r.reduction_cross_only);
  }
  if (!csv.empty()) write_text(csv, rows);

  const auto dense = complexity::build_report(base);
  fmt::print("K={} C={} M={} N_token={} N_query={} N_object={} layers {}/{}\n", base.points,
             base.channels, base.heads, base.encoder_tokens, base.decoder_queries,
             base.object_tokens, base.encoder_layers, base.decoder_layers);
  fmt::print("encoder/decoder cost at keep ratio {}: {:.4f} (decoder cross-attention only), "
             "{:.4f} (decoder cross- plus self-attention)\n",
             base.keep_ratio, dense.ratio_cross_only, dense.ratio_with_self);
  fmt::print("enhancement over encoder plus decoder deformable attention: {:.6f}\n",
             dense.enhancement_ratio);
  auto sparse = base;
  sparse.keep_ratio = 0.3;
  const auto s = complexity::build_report(sparse);
  fmt::print("reduction at keep ratio 0.3: {:.2f}% (cross only), {:.2f}% (with self-attention)\n",
             s.reduction_cross_only, s.reduction_with_self);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Foreground token selection and sparse encoder toolkit"};
  app.require_subcommand(1);

  std::string spec_path, out, data, config_path, ckpt, csv, scene, trace;
  std::size_t n = 0;
  std::optional<std::uint64_t> seed;
  double ratio = 0.3;
  CostFlags flags;

  auto* gen = app.add_subcommand("gen-data", "Generate a synthetic scene dataset");
  gen->add_option("--spec", spec_path, "Scene spec JSON (defaults when omitted)");
  gen->add_option("--n", n, "Number of scenes")->required()->check(CLI::PositiveNumber);
  gen->add_option("--seed", seed, "Overrides the spec seed");
  gen->add_option("--out", out, "Output directory")->required();

  auto* train = app.add_subcommand("train-fts", "Train the foreground token selector");
  train->add_option("--data", data, "Dataset directory")->required()->check(CLI::ExistingDirectory);
  train->add_option("--config", config_path, "Harness config JSON");
  train->add_option("--out", out, "Checkpoint path")->required();

  auto* eval = app.add_subcommand("eval-selection", "Score a dataset with a trained selector");
  eval->add_option("--data", data, "Dataset directory")->required()->check(CLI::ExistingDirectory);
  eval->add_option("--ckpt", ckpt, "Checkpoint path")->required()->check(CLI::ExistingFile);
  eval->add_option("--ratio", ratio, "Keep ratio")->check(CLI::Range(0.0, 1.0));
  eval->add_option("--csv", csv, "Metrics CSV output");

  auto* enc = app.add_subcommand("run-encoder", "Run the sparse encoder on one scene");
  enc->add_option("--scene", scene, "Scene JSON")->required()->check(CLI::ExistingFile);
  enc->add_option("--ckpt", ckpt, "Checkpoint path")->required()->check(CLI::ExistingFile);
  enc->add_option("--config", config_path, "Harness config JSON");
  enc->add_option("--trace", trace, "Output directory")->required();

  auto* pipe = app.add_subcommand("run-pipeline", "Generate, train, evaluate and trace end to end");
  pipe->add_option("--config", config_path, "Harness config JSON");
  pipe->add_option("--seed", seed, "Overrides the config seed");
  pipe->add_option("--out", out, "Output directory")->required();

  auto* flops = app.add_subcommand("flops-report", "Closed-form attention cost sweep");
  flops->add_option("--config", config_path, "Cost config JSON");
  flops->add_option("--csv", csv, "Sweep CSV output");
  flops->add_option("--points", flags.points);
  flops->add_option("--channels", flags.channels);
  flops->add_option("--heads", flags.heads);
  flops->add_option("--tokens", flags.tokens);
  flops->add_option("--queries", flags.queries);
  flops->add_option("--object-tokens", flags.object_tokens);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) gen_data(spec_path, n, seed, out);
    if (*train) train_fts_cmd(data, config_path, out);
    if (*eval) eval_selection_cmd(data, ckpt, ratio, csv);
    if (*enc) run_encoder_cmd(scene, ckpt, config_path, trace);
    if (*pipe) run_pipeline_cmd(config_path, seed, out);
    if (*flops) flops_report_cmd(config_path, flags, csv);
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 0;
}
