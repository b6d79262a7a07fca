// Copyright 2026 The apbench authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "apbench/bench/commands.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>

#include "apbench/audio/wav.hpp"
#include "apbench/bench/parallel.hpp"
#include "apbench/errors.hpp"
#include "apbench/eval/aggregate.hpp"
#include "apbench/eval/metrics.hpp"
#include "apbench/gate/gate.hpp"
#include "apbench/rng.hpp"
#include "apbench/text.hpp"
#include "apbench/tpe/optimize.hpp"
#include "apbench/version.hpp"

namespace apbench::bench {

namespace {

using nlohmann::json;

json run_meta(const RunConfig& cfg) {
  return json{{"toolkit_version", kToolkitVersion},
              {"seed", cfg.seed},
              {"config_digest", cfg.digest()},
              {"manifest_digest", file_digest(cfg.manifest)}};
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoFailure("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

void write_text_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoFailure("cannot write " + path.string());
  out << body;
}

audio::AudioBuffer load_entry_audio(const RunConfig& cfg, const ManifestEntry& entry) {
  return audio::load_wav(cfg.manifest.parent_path() / entry.audio_path);
}

std::shared_ptr<gate::Transcriber> make_transcriber(
    const RunConfig& cfg, const std::vector<ManifestEntry>& entries) {
  if (cfg.transcriber == "identity") {
    std::map<std::string, std::string> texts;
    for (const ManifestEntry& e : entries) texts[e.id] = e.text;
    return std::make_shared<gate::IdentityTranscriber>(std::move(texts));
  }
  return std::make_shared<gate::HttpTranscriber>(gate::HttpEndpoint{cfg.transcriber});
}

std::shared_ptr<gate::SimilarityScorer> make_scorer(const RunConfig& cfg) {
  if (cfg.scorer == "offline") return std::make_shared<gate::EditDistanceScorer>();
  return std::make_shared<gate::HttpScorer>(gate::HttpEndpoint{cfg.scorer});
}

std::unique_ptr<refusal::Embedder> make_embedder(const RunConfig& cfg) {
  if (cfg.embedder == "offline") return std::make_unique<refusal::HashedBowEmbedder>();
  return std::make_unique<refusal::HttpEmbedder>(gate::HttpEndpoint{cfg.embedder},
                                                 refusal::HashedBowEmbedder::kDim);
}

std::unique_ptr<eval::Judge> make_judge(const RunConfig& cfg) {
  if (cfg.judge == "none") return nullptr;
  if (cfg.judge == "stub") return std::make_unique<eval::StubJudge>();
  return std::make_unique<eval::HttpJudge>(gate::HttpEndpoint{cfg.judge});
}

gate::GateConfig make_gate_config(const RunConfig& cfg,
                                  const std::vector<ManifestEntry>& entries) {
  gate::GateConfig gcfg;
  gcfg.tau = cfg.gate_tau;
  gcfg.max_overlay_rounds = cfg.gate_max_overlay_rounds;
  gcfg.scorer = make_scorer(cfg);
  gcfg.transcriber = make_transcriber(cfg, entries);
  return gcfg;
}

std::unique_ptr<perturb::NoiseBank> maybe_load_bank(const RunConfig& cfg) {
  if (cfg.noise_bank_dir.empty()) return nullptr;
  return std::make_unique<perturb::NoiseBank>(
      perturb::NoiseBank::from_directory(cfg.noise_bank_dir));
}

struct SampleFailure {
  std::string id;
  std::string error;
};

json failures_json(const std::vector<std::optional<SampleFailure>>& slots) {
  json arr = json::array();
  for (const auto& f : slots) {
    if (f) arr.push_back({{"id", f->id}, {"error", f->error}});
  }
  return arr;
}

int finish_run(const RunConfig& cfg, const std::vector<std::optional<SampleFailure>>& slots,
               const char* command) {
  const json failures = failures_json(slots);
  if (!failures.empty()) {
    write_json_file(cfg.output_dir / "failures.json",
                    json{{"command", command}, {"failures", failures}});
    std::cerr << command << ": " << failures.size() << " sample(s) failed\n";
    return kExitPartial;
  }
  return kExitOk;
}

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out.push_back(c);
    }
  }
  out.push_back('\'');
  return out;
}

std::string replace_all(std::string subject, const std::string& needle,
                        const std::string& replacement) {
  std::size_t pos = 0;
  while ((pos = subject.find(needle, pos)) != std::string::npos) {
    subject.replace(pos, needle.size(), replacement);
    pos += replacement.size();
  }
  return subject;
}

}  // namespace

int cmd_perturb(const RunConfig& cfg, const PerturbOptions& options) {
  cfg.validate();
  const auto entries = load_manifest(cfg.manifest);
  const auto bank = maybe_load_bank(cfg);
  std::filesystem::create_directories(cfg.output_dir / "audio");

  std::vector<std::optional<ManifestEntry>> outputs(entries.size());
  std::vector<std::optional<SampleFailure>> failures(entries.size());

  parallel_for_indexed(entries.size(), cfg.workers, [&](std::size_t i) {
    const ManifestEntry& entry = entries[i];
    try {
      const audio::AudioBuffer original = load_entry_audio(cfg, entry);
      std::vector<perturb::PerturbationSpec> specs;
      const std::uint64_t sample_seed = mix_seed(cfg.seed, fnv1a64(entry.id));
      for (std::size_t k = 0; k < options.chain.size(); ++k) {
        specs.push_back({options.chain[k].first, options.chain[k].second,
                         mix_seed(sample_seed, k)});
      }
      auto [perturbed, record] =
          perturb::apply_chain(original, specs, cfg.ranges, bank.get());
      const std::string rel = "audio/" + entry.id + ".wav";
      audio::save_wav(perturbed, cfg.output_dir / rel);

      ManifestEntry out = entry;
      out.audio_path = rel;
      out.perturbation_record = record.to_json();
      outputs[i] = std::move(out);
    } catch (const Error& e) {
      failures[i] = SampleFailure{entry.id, e.what()};
    }
  });

  std::vector<ManifestEntry> kept;
  for (auto& out : outputs) {
    if (out) kept.push_back(std::move(*out));
  }
  save_manifest(kept, cfg.output_dir / "manifest.jsonl");
  write_json_file(cfg.output_dir / "meta.json", run_meta(cfg));
  return finish_run(cfg, failures, "perturb");
}

int cmd_gate(const RunConfig& cfg) {
  cfg.validate();
  const auto entries = load_manifest(cfg.manifest);
  const gate::GateConfig gcfg = make_gate_config(cfg, entries);
  std::filesystem::create_directories(cfg.output_dir);

  std::vector<std::optional<ManifestEntry>> accepted(entries.size());
  std::vector<std::optional<json>> rejected(entries.size());
  std::vector<std::optional<SampleFailure>> failures(entries.size());

  parallel_for_indexed(entries.size(), cfg.workers, [&](std::size_t i) {
    const ManifestEntry& entry = entries[i];
    try {
      const audio::AudioBuffer buf = load_entry_audio(cfg, entry);
      const gate::GateVerdict verdict = gate::gate(entry.text, buf, gcfg, entry.id);
      if (verdict.accepted) {
        // The gate filters without copying audio, so re-point the entry at
        // the original file relative to the output manifest.
        ManifestEntry out = entry;
        out.audio_path = std::filesystem::relative(
                             cfg.manifest.parent_path() / entry.audio_path, cfg.output_dir)
                             .generic_string();
        accepted[i] = std::move(out);
      } else {
        rejected[i] = json{{"id", entry.id}, {"similarity", verdict.similarity}};
      }
    } catch (const Error& e) {
      failures[i] = SampleFailure{entry.id, e.what()};
    }
  });

  std::vector<ManifestEntry> kept;
  for (auto& e : accepted) {
    if (e) kept.push_back(std::move(*e));
  }
  json rejections = json::array();
  for (auto& r : rejected) {
    if (r) rejections.push_back(std::move(*r));
  }
  save_manifest(kept, cfg.output_dir / "manifest.jsonl");
  write_json_file(cfg.output_dir / "rejections.json",
                  json{{"tau", cfg.gate_tau},
                       {"accepted", kept.size()},
                       {"rejected", rejections.size()},
                       {"rejections", rejections},
                       {"meta", run_meta(cfg)}});
  return finish_run(cfg, failures, "gate");
}

int cmd_optimize(const RunConfig& cfg) {
  cfg.validate();
  const auto entries = load_manifest(cfg.manifest);
  if (cfg.refusal_phrases_file.empty()) {
    throw Error("optimize needs refusal_phrases_file");
  }
  auto embedder = make_embedder(cfg);
  const auto refs = refusal::RefusalReferenceSet::load(cfg.refusal_phrases_file, *embedder);
  const auto bank = maybe_load_bank(cfg);
  model::RunJournal journal;
  model::ModelClient client(cfg.model, &journal);
  gate::GateConfig gcfg;
  if (cfg.gate_during_optimize) gcfg = make_gate_config(cfg, entries);

  std::filesystem::create_directories(cfg.output_dir / "audio");
  std::filesystem::create_directories(cfg.output_dir / "journals");

  std::vector<std::optional<ManifestEntry>> outputs(entries.size());
  std::vector<std::optional<SampleFailure>> failures(entries.size());
  std::vector<std::optional<tpe::OptimizationResult>> results(entries.size());

  parallel_for_indexed(entries.size(), cfg.workers, [&](std::size_t i) {
    const ManifestEntry& entry = entries[i];
    try {
      const audio::AudioBuffer original = load_entry_audio(cfg, entry);
      tpe::OptimizeContext ctx;
      ctx.model = &client;
      ctx.refs = &refs;
      ctx.embedder = embedder.get();
      ctx.gate_config = cfg.gate_during_optimize ? &gcfg : nullptr;
      ctx.ranges = cfg.ranges;
      ctx.noise_bank = bank.get();
      ctx.tpe = cfg.tpe;
      ctx.tpe.rng_seed = mix_seed(cfg.seed, fnv1a64(entry.id));

      tpe::OptimizationResult result = tpe::optimize(entry.id, entry.text, original, ctx);
      json journal_json = result.to_json();
      journal_json["reference_set_digest"] = refs.source_digest();
      journal_json["embedder"] = embedder->name();
      journal_json["tpe"] = ctx.tpe.to_json();
      journal_json["meta"] = run_meta(cfg);
      write_json_file(cfg.output_dir / "journals" / (entry.id + ".json"), journal_json);

      if (result.aborted) {
        failures[i] = SampleFailure{entry.id, "aborted: " + result.abort_reason};
        return;
      }
      const tpe::Trial& best = result.best();
      const audio::AudioBuffer best_audio =
          perturb::replay(original, best.record, cfg.ranges, bank.get());
      const std::string rel = "audio/" + entry.id + ".wav";
      audio::save_wav(best_audio, cfg.output_dir / rel);

      ManifestEntry out = entry;
      out.audio_path = rel;
      out.perturbation_record = best.record.to_json();
      outputs[i] = std::move(out);
      results[i] = std::move(result);
    } catch (const Error& e) {
      failures[i] = SampleFailure{entry.id, e.what()};
    }
  });

  std::vector<ManifestEntry> kept;
  for (auto& e : outputs) {
    if (e) kept.push_back(std::move(*e));
  }
  save_manifest(kept, cfg.output_dir / "manifest.jsonl");

  // Which techniques the optimizer settled on (per best record).
  std::map<std::string, int> kind_histogram;
  json best_scores = json::object();
  for (const auto& result : results) {
    if (!result) continue;
    const tpe::Trial& best = result->best();
    best_scores[result->sample_id] = best.score;
    for (const auto& step : best.record.steps) {
      kind_histogram[std::string(perturb::to_string(step.spec.kind))] += 1;
    }
  }
  write_json_file(cfg.output_dir / "summary.json",
                  json{{"selected_kind_histogram", kind_histogram},
                       {"best_scores", best_scores},
                       {"meta", run_meta(cfg)}});
  journal.write_jsonl(cfg.output_dir / "model_journal.jsonl");
  return finish_run(cfg, failures, "optimize");
}

int cmd_evaluate(const RunConfig& cfg, const EvaluateOptions& options) {
  cfg.validate();
  const auto entries = load_manifest(cfg.manifest);
  if (cfg.keywords_file.empty()) throw Error("evaluate needs keywords_file");
  const auto keywords = eval::load_keywords(cfg.keywords_file);
  if (keywords.empty()) throw EmptyKeywordList("keyword file has no entries");

  const auto judge = make_judge(cfg);
  std::unique_ptr<refusal::Embedder> embedder;
  std::unique_ptr<refusal::RefusalReferenceSet> corpus;
  if (!cfg.refusal_corpus_file.empty()) {
    embedder = make_embedder(cfg);
    corpus = std::make_unique<refusal::RefusalReferenceSet>(
        refusal::RefusalReferenceSet::load(cfg.refusal_corpus_file, *embedder));
  }
  model::RunJournal journal;
  model::ModelClient client(cfg.model, &journal);
  std::filesystem::create_directories(cfg.output_dir);

  std::vector<std::optional<eval::MetricRecord>> records(entries.size());
  std::vector<std::optional<SampleFailure>> failures(entries.size());

  // judge calls fan out with the sample workers; the worker count is the
  // in-flight cap
  parallel_for_indexed(entries.size(), cfg.workers, [&](std::size_t i) {
    const ManifestEntry& entry = entries[i];
    try {
      const audio::AudioBuffer buf = load_entry_audio(cfg, entry);
      const model::ModelResponse response = client.query(buf, entry.id);

      eval::MetricRecord rec;
      rec.sample_id = entry.id;
      rec.attack_success = eval::attack_success(response.text, keywords);
      rec.degenerate = text::canonicalize(response.text).empty();
      if (judge) {
        const eval::JudgeVerdict verdict = judge->judge(response.text, entry.text);
        eval::validate_verdict(verdict);
        rec.toxicity = verdict.toxicity;
        rec.policy_violation = verdict.policy_violation;
        rec.relevance = verdict.relevance;
      }
      if (corpus) {
        rec.refusal_alignment = eval::refusal_alignment(response.text, *corpus, *embedder);
      }
      records[i] = std::move(rec);
    } catch (const Error& e) {
      failures[i] = SampleFailure{entry.id, e.what()};
    }
  });

  std::vector<eval::MetricRecord> flat;
  std::map<std::string, std::string> category_by_id;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    category_by_id[entries[i].id] = entries[i].category;
    if (records[i]) flat.push_back(*records[i]);
  }
  const eval::CategoryReport report = eval::aggregate(flat, category_by_id);

  {
    std::ofstream out(cfg.output_dir / "records.jsonl", std::ios::trunc);
    if (!out) throw IoFailure("cannot write records.jsonl");
    for (const auto& rec : flat) out << rec.to_json().dump() << "\n";
  }
  json report_json = report.to_json();
  report_json["meta"] = run_meta(cfg);
  write_json_file(cfg.output_dir / "report.json", report_json);
  write_text_file(cfg.output_dir / "report.txt", report.to_table());
  journal.write_jsonl(cfg.output_dir / "model_journal.jsonl");

  if (!options.baseline_records.empty()) {
    std::ifstream in(options.baseline_records);
    if (!in) throw IoFailure("cannot open baseline records: " +
                             options.baseline_records.string());
    std::map<std::string, eval::MetricRecord> baseline;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto rec = eval::MetricRecord::from_json(json::parse(line));
      baseline[rec.sample_id] = rec;
    }
    std::vector<std::pair<eval::MetricRecord, eval::MetricRecord>> paired;
    for (const auto& rec : flat) {
      const auto it = baseline.find(rec.sample_id);
      if (it != baseline.end()) paired.emplace_back(it->second, rec);
    }
    const eval::SignificanceReport significance = eval::compare_runs(paired);
    json sig_json = significance.to_json();
    sig_json["meta"] = run_meta(cfg);
    write_json_file(cfg.output_dir / "significance.json", sig_json);
  }
  return finish_run(cfg, failures, "evaluate");
}

int cmd_calibrate(const RunConfig& cfg, const CalibrateOptions& options) {
  cfg.validate();
  const auto entries = load_manifest(cfg.manifest);
  if (entries.empty()) throw Error("manifest has no samples to calibrate on");

  const ManifestEntry* entry = &entries.front();
  if (!options.sample_id.empty()) {
    entry = nullptr;
    for (const auto& e : entries) {
      if (e.id == options.sample_id) entry = &e;
    }
    if (entry == nullptr) throw UnknownSampleId("no sample '" + options.sample_id + "'");
  }

  const gate::GateConfig gcfg = make_gate_config(cfg, entries);
  const auto bank = maybe_load_bank(cfg);
  const audio::AudioBuffer buf = load_entry_audio(cfg, *entry);
  std::filesystem::create_directories(cfg.output_dir);

  gate::CalibrationCurve curve;
  if (options.target == "overlay-rounds") {
    curve = gate::calibrate_overlay_rounds(buf, entry->text, options.rounds, gcfg,
                                           cfg.ranges, bank.get(), cfg.seed, entry->id);
  } else {
    const auto kind = perturb::perturbation_kind_from_string(options.target);
    if (options.sweep_steps < 1) throw Error("calibrate needs sweep_steps >= 1");
    std::vector<double> sweep;
    for (int i = 0; i < options.sweep_steps; ++i) {
      const double t = options.sweep_steps == 1
                           ? options.sweep_lo
                           : options.sweep_lo + (options.sweep_hi - options.sweep_lo) * i /
                                 (options.sweep_steps - 1);
      sweep.push_back(t);
    }
    curve = gate::calibrate_threshold(buf, entry->text, kind, sweep, gcfg, cfg.ranges,
                                      bank.get(), cfg.seed, entry->id);
  }

  json out = curve.to_json();
  out["target"] = options.target;
  out["sample_id"] = entry->id;
  out["tau"] = cfg.gate_tau;
  out["meta"] = run_meta(cfg);
  write_json_file(cfg.output_dir / "calibration.json", out);
  return kExitOk;
}

int cmd_ingest(const RunConfig& cfg, const IngestOptions& options) {
  cfg.validate();
  if (options.command_template.empty()) throw Error("ingest needs a synthesis command");
  const auto text_entries = load_text_manifest(options.text_manifest);
  std::filesystem::create_directories(cfg.output_dir / "audio");

  std::vector<std::optional<ManifestEntry>> outputs(text_entries.size());
  std::vector<std::optional<SampleFailure>> failures(text_entries.size());

  for (std::size_t i = 0; i < text_entries.size(); ++i) {
    const TextEntry& te = text_entries[i];
    const std::string rel = "audio/" + te.id + ".wav";
    const std::filesystem::path out_path = cfg.output_dir / rel;
    std::string command = options.command_template;
    command = replace_all(command, "{id}", shell_quote(te.id));
    command = replace_all(command, "{text}", shell_quote(te.text));
    command = replace_all(command, "{out}", shell_quote(out_path.string()));
    const int rc = std::system(command.c_str());
    if (rc != 0 || !std::filesystem::exists(out_path)) {
      failures[i] = SampleFailure{te.id, "synthesis command failed (exit " +
                                             std::to_string(rc) + ")"};
      continue;
    }
    ManifestEntry entry;
    entry.id = te.id;
    entry.category = te.category;
    entry.text = te.text;
    entry.audio_path = rel;
    entry.voice = te.voice;
    outputs[i] = std::move(entry);
  }

  std::vector<ManifestEntry> kept;
  for (auto& e : outputs) {
    if (e) kept.push_back(std::move(*e));
  }
  save_manifest(kept, cfg.output_dir / "manifest.jsonl");
  write_json_file(cfg.output_dir / "meta.json",
                  json{{"toolkit_version", kToolkitVersion}, {"seed", cfg.seed}});
  return finish_run(cfg, failures, "ingest");
}

}  // namespace apbench::bench
