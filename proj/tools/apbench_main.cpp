// Copyright 2026 The apbench authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "apbench/bench/commands.hpp"
#include "apbench/errors.hpp"
#include "apbench/version.hpp"

namespace {

using apbench::bench::RunConfig;

// Shared flags: --config plus overrides for the paths everyone needs.
struct CommonArgs {
  std::string config_path;
  std::string manifest;
  std::string output_dir;
  std::string model_endpoint;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int workers = 0;

  RunConfig build() const {
    RunConfig cfg;
    if (!config_path.empty()) cfg = RunConfig::load(config_path);
    if (!manifest.empty()) cfg.manifest = manifest;
    if (!output_dir.empty()) cfg.output_dir = output_dir;
    if (!model_endpoint.empty()) cfg.model.endpoint = model_endpoint;
    if (seed_set) cfg.tpe.rng_seed = cfg.seed = seed;
    if (workers > 0) cfg.workers = workers;
    if (cfg.manifest.empty()) throw apbench::Error("no manifest given (--manifest)");
    if (cfg.output_dir.empty()) throw apbench::Error("no output dir given (--out)");
    return cfg;
  }
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "Run configuration JSON file");
  cmd->add_option("--manifest", args.manifest, "Input manifest (JSONL)");
  cmd->add_option("--out", args.output_dir, "Output directory");
  cmd->add_option("--model", args.model_endpoint, "Model endpoint URL or mock selector");
  cmd->add_option("--seed", args.seed, "Global RNG seed")
      ->each([&args](const std::string&) { args.seed_set = true; });
  cmd->add_option("--workers", args.workers, "Worker thread count");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adversarial audio perturbation and safety evaluation toolkit"};
  app.set_version_flag("--version", apbench::kToolkitVersion);
  app.require_subcommand(1);

  CommonArgs common;

  auto* perturb = app.add_subcommand("perturb", "Apply a fixed perturbation chain");
  add_common(perturb, common);
  std::vector<std::string> chain_args;
  perturb->add_option("--apply", chain_args,
                      "kind=theta pairs, e.g. Trim=0.05 (repeatable)");

  auto* gate = app.add_subcommand("gate", "Filter a manifest by semantic consistency");
  add_common(gate, common);

  auto* optimize = app.add_subcommand("optimize", "Search perturbations per sample");
  add_common(optimize, common);
  int budget = 0;
  optimize->add_option("--budget", budget, "Trials per sample");

  auto* evaluate = app.add_subcommand("evaluate", "Compute safety metrics");
  add_common(evaluate, common);
  std::string baseline;
  evaluate->add_option("--baseline", baseline,
                       "records.jsonl of a baseline run for paired comparison");

  auto* calibrate = app.add_subcommand("calibrate", "Sweep a method against the gate");
  add_common(calibrate, common);
  apbench::bench::CalibrateOptions cal_options;
  calibrate->add_option("--target", cal_options.target,
                        "Perturbation kind name or overlay-rounds")
      ->required();
  calibrate->add_option("--from", cal_options.sweep_lo, "Sweep start");
  calibrate->add_option("--to", cal_options.sweep_hi, "Sweep end");
  calibrate->add_option("--steps", cal_options.sweep_steps, "Sweep point count");
  calibrate->add_option("--rounds", cal_options.rounds, "Overlay rounds to probe");
  calibrate->add_option("--sample", cal_options.sample_id, "Sample id (default: first)");

  auto* ingest = app.add_subcommand("ingest", "Synthesize audio for a text manifest");
  add_common(ingest, common);
  apbench::bench::IngestOptions ingest_options;
  std::string text_manifest;
  ingest->add_option("--text-manifest", text_manifest, "Text-only manifest (JSONL)")
      ->required();
  ingest->add_option("--command", ingest_options.command_template,
                     "Synthesis command with {id} {text} {out} placeholders")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (perturb->parsed()) {
      apbench::bench::PerturbOptions options;
      for (const std::string& arg : chain_args) {
        const auto eq = arg.find('=');
        if (eq == std::string::npos) {
          throw apbench::Error("--apply expects kind=theta, got: " + arg);
        }
        options.chain.emplace_back(
            apbench::perturb::perturbation_kind_from_string(arg.substr(0, eq)),
            std::stod(arg.substr(eq + 1)));
      }
      return apbench::bench::cmd_perturb(common.build(), options);
    }
    if (gate->parsed()) {
      return apbench::bench::cmd_gate(common.build());
    }
    if (optimize->parsed()) {
      RunConfig cfg = common.build();
      if (budget > 0) cfg.tpe.budget = budget;
      return apbench::bench::cmd_optimize(cfg);
    }
    if (evaluate->parsed()) {
      apbench::bench::EvaluateOptions options;
      options.baseline_records = baseline;
      return apbench::bench::cmd_evaluate(common.build(), options);
    }
    if (calibrate->parsed()) {
      return apbench::bench::cmd_calibrate(common.build(), cal_options);
    }
    if (ingest->parsed()) {
      ingest_options.text_manifest = text_manifest;
      RunConfig cfg;
      if (!common.config_path.empty()) cfg = RunConfig::load(common.config_path);
      if (!common.output_dir.empty()) cfg.output_dir = common.output_dir;
      if (common.seed_set) cfg.seed = common.seed;
      if (cfg.output_dir.empty()) throw apbench::Error("no output dir given (--out)");
      return apbench::bench::cmd_ingest(cfg, ingest_options);
    }
  } catch (const apbench::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return apbench::bench::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return apbench::bench::kExitConfig;
  }
  return apbench::bench::kExitConfig;
}
