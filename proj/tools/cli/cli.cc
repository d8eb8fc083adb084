// tools/cli/cli.cc

// Copyright 2026  The cabkws Authors

// See LICENSE at the repository root for clarification regarding multiple authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "cli/cli.h"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cabkws/audio/augment.h"
#include "cabkws/audio/fbank.h"
#include "cabkws/audio/wav_io.h"
#include "cabkws/common/error.h"
#include "cabkws/data/corpus.h"
#include "cabkws/data/synth.h"
#include "cabkws/model/checkpoint.h"
#include "cabkws/train/config.h"
#include "cabkws/train/grad_check.h"
#include "cabkws/train/sweep.h"
#include "cabkws/train/trainer.h"

namespace cabkws::cli {
namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

// Bad flags, bad configuration, or a reference to something that does not
// exist. Maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunOptions {
  std::string config_path;
  std::string out_dir;
};

void AddRunOptions(CLI::App* sub, RunOptions* opts) {
  sub->add_option("--config", opts->config_path, "RunConfig JSON file (defaults if omitted)");
  sub->add_option("--out", opts->out_dir, "Run directory (default runs/<timestamp>-seed<S>)");
  sub->allow_extras();
  sub->footer("Any config field can be overridden as --section.key=value, "
              "e.g. --train.seed=7 or --model.temperature=0.07.");
}

// Unmatched arguments of a subcommand, regrouped into "--section.key=value"
// assignments. "--section.key value" is accepted too.
std::vector<std::string> CollectOverrides(const CLI::App* sub) {
  const std::vector<std::string> extras = sub->remaining();
  std::vector<std::string> overrides;
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const std::string& a = extras[i];
    if (a.rfind("--", 0) != 0 || a.find('.') == std::string::npos)
      throw UsageError("unexpected argument '" + a + "'");
    if (a.find('=') != std::string::npos) {
      overrides.push_back(a);
    } else if (i + 1 < extras.size() && extras[i + 1].rfind("--", 0) != 0) {
      overrides.push_back(a + "=" + extras[++i]);
    } else {
      throw UsageError("override '" + a + "' has no value");
    }
  }
  return overrides;
}

RunConfig ResolveConfig(const RunOptions& opts, const CLI::App* sub) {
  const std::vector<std::string> overrides = CollectOverrides(sub);
  try {
    if (opts.config_path.empty()) return ParseRunConfig("", overrides);
    if (!fs::exists(opts.config_path))
      throw UsageError("config file not found: " + opts.config_path);
    return LoadRunConfig(opts.config_path, overrides);
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  } catch (const ParseError& e) {
    throw UsageError(e.what());
  }
}

std::string PrepareRunDir(const RunOptions& opts, const RunConfig& config) {
  const std::string dir =
      opts.out_dir.empty() ? DefaultRunDir(config.train.seed) : opts.out_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw UsageError("cannot create run directory " + dir);
  std::ofstream f(fs::path(dir) / "config.json");
  if (!f) throw UsageError("run directory is not writable: " + dir);
  f << DumpRunConfig(config) << '\n';
  return dir;
}

void RequireFile(const std::string& path, const std::string& what) {
  if (!fs::is_regular_file(path)) throw UsageError(what + " not found: " + path);
}

// The labeled corpus named by data.manifest, or the synthetic one.
Corpus LoadMainCorpus(const RunConfig& config) {
  Corpus corpus;
  if (config.data.manifest.empty()) {
    corpus = SynthDataset(config.data.Synth());
  } else {
    RequireFile(config.data.manifest, "manifest");
    corpus = LoadCorpus(config.data.manifest);
  }
  if (corpus.manifest.num_classes != config.model.n_classes)
    throw UsageError("corpus has " + std::to_string(corpus.manifest.num_classes) +
                     " classes but model.n_classes is " +
                     std::to_string(config.model.n_classes));
  return corpus;
}

Checkpoint LoadCheckpointChecked(const std::string& path) {
  RequireFile(path, "checkpoint");
  return LoadCheckpoint(path);
}

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

// ---------------------------------------------------------------- commands

struct SynthArgs {
  std::string out;
  uint64_t seed = 0;
  int per_class = 0;
  int classes = 12;
  int dev_per_class = -1;
  int eval_per_class = -1;
};

int CmdSynthData(const SynthArgs& a, std::ostream& out) {
  if (a.per_class < 1 || a.classes < 1)
    throw UsageError("per-class and classes must be >= 1");
  SynthSpec spec;
  spec.n_classes = a.classes;
  spec.train_per_class = a.per_class;
  spec.dev_per_class = a.dev_per_class >= 0 ? a.dev_per_class : std::max(1, a.per_class / 4);
  spec.eval_per_class = a.eval_per_class >= 0 ? a.eval_per_class : std::max(1, a.per_class / 4);
  spec.seed = a.seed;
  Corpus corpus;
  try {
    corpus = SynthDataset(spec);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  std::error_code ec;
  fs::create_directories(a.out, ec);
  if (ec || !fs::is_directory(a.out)) throw UsageError("cannot create output directory " + a.out);
  std::string manifest_path;
  try {
    manifest_path = WriteCorpus(corpus, a.out);
  } catch (const IoError& e) {
    throw UsageError(e.what());
  }
  ojson report;
  report["manifest"] = manifest_path;
  for (Split s : {Split::kTrain, Split::kDev, Split::kEval})
    report[std::string(SplitName(s))] = corpus.manifest.Indices(s).size();
  out << report.dump() << '\n';
  return kExitOk;
}

struct AugmentArgs {
  std::string in;
  std::string out;
  double speed = 1.0;
  double volume = 1.0;
  std::string noise;
  std::optional<double> snr;
  uint64_t seed = 0;
};

int CmdAugment(const AugmentArgs& a, std::ostream& out) {
  if (!std::isfinite(a.speed) || a.speed <= 0) throw UsageError("--speed must be > 0");
  if (!std::isfinite(a.volume) || a.volume < 0) throw UsageError("--volume must be >= 0");
  if (a.snr && a.noise.empty()) throw UsageError("--snr requires --noise");
  if (!a.noise.empty() && !a.snr) throw UsageError("--noise requires --snr");
  if (a.snr && !std::isfinite(*a.snr)) throw UsageError("--snr must be finite");
  RequireFile(a.in, "input WAV");
  if (!a.noise.empty()) RequireFile(a.noise, "noise WAV");

  const Waveform wave = LoadWav(a.in);
  AugmentSpec spec;
  spec.lambda_speed = a.speed;
  spec.lambda_volume = a.volume;
  spec.snr_db = a.snr;
  spec.rng_seed = a.seed;
  Waveform noise;
  if (!a.noise.empty()) noise = LoadWav(a.noise, wave.sample_rate);
  const Waveform result = ApplyAugment(wave, spec, a.noise.empty() ? nullptr : &noise);
  SaveWav(a.out, result);

  ojson report;
  report["out"] = a.out;
  report["input_samples"] = wave.size();
  report["output_samples"] = result.size();
  report["sample_rate"] = result.sample_rate;
  out << report.dump() << '\n';
  return kExitOk;
}

struct FbankArgs {
  std::string in;
  std::string out;
  int frames = 0;
};

int CmdFbank(const FbankArgs& a, std::ostream& out) {
  if (a.frames < 0) throw UsageError("--frames must be >= 0");
  RequireFile(a.in, "input WAV");
  const FbankComputer fbank;
  const Waveform wave = LoadWav(a.in, fbank.config().sample_rate);
  FbankMatrix feats = fbank.Compute(wave);
  if (a.frames > 0) feats = FitFrames(feats, a.frames);
  WriteFbankFile(a.out, feats);
  ojson report;
  report["out"] = a.out;
  report["frames"] = feats.NumFrames();
  report["dim"] = feats.Dim();
  out << report.dump() << '\n';
  return kExitOk;
}

int CmdPretrain(const RunOptions& opts, const CLI::App* sub, std::ostream& out) {
  const RunConfig config = ResolveConfig(opts, sub);
  Corpus corpus;
  Corpus pretrain_corpus;
  const Corpus* source = &corpus;
  if (config.data.pretrain_manifest.empty()) {
    corpus = LoadMainCorpus(config);
  } else {
    RequireFile(config.data.pretrain_manifest, "pretrain manifest");
    pretrain_corpus = LoadCorpus(config.data.pretrain_manifest);
    source = &pretrain_corpus;
  }
  const std::vector<std::size_t> pool = source->manifest.Indices(Split::kTrain);
  if (pool.empty()) throw UsageError("pretraining pool is empty");
  const std::string dir = PrepareRunDir(opts, config);

  PretrainOptions options;
  options.out_dir = dir;
  const PretrainResult result =
      Pretrain(*source, pool, config.model, config.train, config.augment, options);

  ojson report;
  report["run_dir"] = dir;
  report["checkpoint"] = (fs::path(dir) / "pretrain.ckpt").string();
  report["steps"] = config.train.pretrain_steps;
  if (!result.metrics.empty()) report["final_l_ul"] = result.metrics.back().loss.l_ul;
  out << report.dump() << '\n';
  return kExitOk;
}

int CmdFinetune(const RunOptions& opts, const CLI::App* sub, std::ostream& out) {
  const RunConfig config = ResolveConfig(opts, sub);
  const Corpus corpus = LoadMainCorpus(config);
  std::optional<Checkpoint> init;
  if (!config.data.init_checkpoint.empty()) {
    init = LoadCheckpointChecked(config.data.init_checkpoint);
    try {
      CheckCompatible(init->config, config.model);
    } catch (const ConfigError& e) {
      throw UsageError(e.what());
    }
  }
  const std::vector<std::size_t> train_pool =
      LabeledSubset(corpus.manifest, Split::kTrain, config.data.labeled_per_class);
  const std::vector<std::size_t> dev_pool = corpus.manifest.LabeledIndices(Split::kDev);
  if (train_pool.empty()) throw UsageError("labeled train split is empty");
  if (dev_pool.empty()) throw UsageError("labeled dev split is empty");
  const std::string dir = PrepareRunDir(opts, config);

  const FinetuneResult result = Finetune(corpus, train_pool, dev_pool, config.model,
                                         config.train, init ? &init->params : nullptr, dir);
  ojson report;
  report["run_dir"] = dir;
  report["checkpoint"] = (fs::path(dir) / "finetune_best.ckpt").string();
  report["best_dev_acc"] = result.best_dev_acc;
  report["best_step"] = result.best_step;
  out << report.dump() << '\n';
  return kExitOk;
}

int CmdEval(const RunOptions& opts, const CLI::App* sub, std::ostream& out) {
  const RunConfig config = ResolveConfig(opts, sub);
  if (config.data.checkpoint.empty())
    throw UsageError("eval needs a checkpoint (--data.checkpoint=PATH)");
  const Checkpoint ckpt = LoadCheckpointChecked(config.data.checkpoint);
  RunConfig effective = config;
  effective.model = ckpt.config;
  const Corpus corpus = LoadMainCorpus(effective);
  const Split split = ParseSplit(config.data.eval_split);
  const std::vector<std::size_t> indices = corpus.manifest.LabeledIndices(split);
  if (indices.empty()) throw UsageError("split '" + config.data.eval_split + "' has no labeled entries");
  const EvalResult r = Evaluate(ckpt.config, ckpt.params, corpus, indices, config.train.eval_batch);

  ojson report;
  report["accuracy"] = r.accuracy;
  report["correct"] = r.correct;
  report["total"] = r.total;
  report["split"] = config.data.eval_split;
  report["confusion"] = r.confusion;
  out << report.dump() << '\n';
  return kExitOk;
}

struct GradCheckArgs {
  std::string objective = "all";
  int coords = 1000;
};

int CmdGradCheck(const RunOptions& opts, const GradCheckArgs& a, const CLI::App* sub,
                 std::ostream& out) {
  const RunConfig config = ResolveConfig(opts, sub);
  if (a.coords < 1) throw UsageError("--coords must be >= 1");
  std::vector<GradObjective> objectives;
  for (GradObjective o : {GradObjective::kUnsupervised, GradObjective::kCrossEntropy,
                          GradObjective::kCrossEntropyDual}) {
    if (a.objective == "all" || a.objective == GradObjectiveName(o)) objectives.push_back(o);
  }
  if (objectives.empty())
    throw UsageError("--objective must be all, l_ul, ce or ce+dual");

  // Reduced shape, with the loss settings of the run configuration.
  ModelConfig tiny = ModelConfig::Tiny();
  tiny.temperature = config.model.temperature;
  tiny.lambda_sim = config.model.lambda_sim;
  tiny.lambda_x = config.model.lambda_x;
  tiny.lambda_x_aug = config.model.lambda_x_aug;
  tiny.lambda_dual = config.model.lambda_dual;
  GradCheckOptions options;
  options.n_coords = a.coords;
  options.seed = config.train.seed;

  const std::string dir = PrepareRunDir(opts, config);
  nlohmann::json reports = nlohmann::json::array();
  bool passed = true;
  double worst = 0.0;
  for (GradObjective o : objectives) {
    const GradCheckReport r = GradCheck(tiny, o, options);
    reports.push_back(r);
    passed = passed && r.passed;
    worst = std::max(worst, r.max_rel_err);
  }
  ojson summary;
  summary["passed"] = passed;
  summary["max_rel_err"] = worst;
  summary["tolerance"] = options.tolerance;
  summary["reports"] = reports;
  std::ofstream(fs::path(dir) / "gradcheck.json") << summary.dump(2) << '\n';
  out << summary.dump() << '\n';
  return passed ? kExitOk : kExitRuntime;
}

struct SweepArgs {
  std::string counts = "0,250,1000";
  std::string seeds = "0,1,2";
};

int CmdSweep(const RunOptions& opts, const SweepArgs& a, const CLI::App* sub,
             std::ostream& out) {
  const RunConfig config = ResolveConfig(opts, sub);
  std::vector<int> counts;
  std::vector<uint64_t> seeds;
  try {
    for (const std::string& c : SplitList(a.counts)) counts.push_back(std::stoi(c));
    for (const std::string& s : SplitList(a.seeds)) seeds.push_back(std::stoull(s));
  } catch (const std::exception&) {
    throw UsageError("--counts and --seeds take comma-separated integers");
  }
  if (counts.empty() || seeds.empty()) throw UsageError("--counts and --seeds must be nonempty");
  for (int c : counts) {
    if (c < 0) throw UsageError("pretrain step counts must be >= 0");
  }
  const Corpus corpus = LoadMainCorpus(config);
  SweepPools pools;
  pools.pretrain = corpus.manifest.Indices(Split::kTrain);
  pools.train = LabeledSubset(corpus.manifest, Split::kTrain, config.data.labeled_per_class);
  pools.dev = corpus.manifest.LabeledIndices(Split::kDev);
  pools.eval = corpus.manifest.LabeledIndices(ParseSplit(config.data.eval_split));
  if (pools.train.empty() || pools.dev.empty() || pools.eval.empty())
    throw UsageError("sweep needs labeled train, dev and evaluation entries");
  const std::string dir = PrepareRunDir(opts, config);

  const SweepResult result = StepSweep(corpus, pools, counts, seeds, config, dir);
  const nlohmann::json j = result;
  std::ofstream(fs::path(dir) / "sweep.json") << j.dump(2) << '\n';
  out << j.dump() << '\n';
  return kExitOk;
}

int CmdConfig(const RunOptions& opts, const CLI::App* sub, std::ostream& out) {
  out << DumpRunConfig(ResolveConfig(opts, sub)) << '\n';
  return kExitOk;
}

}  // namespace

std::string DefaultRunDir(unsigned long long seed) {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream name;
  name << "runs/" << std::put_time(&tm, "%Y%m%dT%H%M%SZ") << "-seed" << seed;
  return name.str();
}

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Contrastive keyword spotting: data, augmentation, features, training",
               "cabkws");
  app.require_subcommand(1);

  SynthArgs synth;
  CLI::App* synth_cmd = app.add_subcommand("synth-data", "Write a synthetic keyword corpus");
  synth_cmd->add_option("--out", synth.out, "Output directory")->required();
  synth_cmd->add_option("--seed", synth.seed, "Generator seed");
  synth_cmd->add_option("--per-class", synth.per_class, "Train utterances per class")->required();
  synth_cmd->add_option("--classes", synth.classes, "Number of classes")->capture_default_str();
  synth_cmd->add_option("--dev-per-class", synth.dev_per_class,
                        "Dev utterances per class (default per-class / 4, at least 1)");
  synth_cmd->add_option("--eval-per-class", synth.eval_per_class,
                        "Eval utterances per class (default per-class / 4, at least 1)");

  AugmentArgs aug;
  CLI::App* aug_cmd = app.add_subcommand(
      "augment", "Speed, then volume, then optional noise perturbation of one WAV");
  aug_cmd->add_option("--in", aug.in, "Input WAV")->required();
  aug_cmd->add_option("--out", aug.out, "Output WAV (16-bit PCM)")->required();
  aug_cmd->add_option("--speed", aug.speed, "Speed factor")->capture_default_str();
  aug_cmd->add_option("--volume", aug.volume, "Volume factor")->capture_default_str();
  aug_cmd->add_option("--noise", aug.noise, "Noise WAV");
  aug_cmd->add_option("--snr", aug.snr, "Target SNR in dB (needs --noise)");
  aug_cmd->add_option("--seed", aug.seed, "Seed of the noise window offset");

  FbankArgs fb;
  CLI::App* fbank_cmd = app.add_subcommand("fbank", "Compute 40-bin log-mel features of a WAV");
  fbank_cmd->add_option("--in", fb.in, "Input WAV")->required();
  fbank_cmd->add_option("--out", fb.out, "Output feature file")->required();
  fbank_cmd->add_option("--frames", fb.frames, "Pad or truncate to this many frames");

  RunOptions pre_opts, ft_opts, eval_opts, gc_opts, sweep_opts, cfg_opts;
  CLI::App* pre_cmd = app.add_subcommand("pretrain", "Unsupervised contrastive pretraining");
  AddRunOptions(pre_cmd, &pre_opts);
  CLI::App* ft_cmd = app.add_subcommand("finetune", "Supervised fine-tuning");
  AddRunOptions(ft_cmd, &ft_opts);
  CLI::App* eval_cmd = app.add_subcommand("eval", "Accuracy of a checkpoint on a split");
  AddRunOptions(eval_cmd, &eval_opts);
  GradCheckArgs gc;
  CLI::App* gc_cmd = app.add_subcommand("gradcheck", "Finite-difference gradient check");
  AddRunOptions(gc_cmd, &gc_opts);
  gc_cmd->add_option("--objective", gc.objective, "all, l_ul, ce or ce+dual")
      ->capture_default_str();
  gc_cmd->add_option("--coords", gc.coords, "Coordinates per objective")->capture_default_str();
  SweepArgs sw;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Pretrain-step sweep on the low-label arm");
  AddRunOptions(sweep_cmd, &sweep_opts);
  sweep_cmd->add_option("--counts", sw.counts, "Pretrain step counts")->capture_default_str();
  sweep_cmd->add_option("--seeds", sw.seeds, "Seeds")->capture_default_str();
  CLI::App* cfg_cmd = app.add_subcommand("config", "Print the resolved configuration");
  AddRunOptions(cfg_cmd, &cfg_opts);

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.push_back("cabkws");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*synth_cmd) return CmdSynthData(synth, out);
    if (*aug_cmd) {
      if (aug_cmd->count("--snr") == 0) aug.snr.reset();
      return CmdAugment(aug, out);
    }
    if (*fbank_cmd) return CmdFbank(fb, out);
    if (*pre_cmd) return CmdPretrain(pre_opts, pre_cmd, out);
    if (*ft_cmd) return CmdFinetune(ft_opts, ft_cmd, out);
    if (*eval_cmd) return CmdEval(eval_opts, eval_cmd, out);
    if (*gc_cmd) return CmdGradCheck(gc_opts, gc, gc_cmd, out);
    if (*sweep_cmd) return CmdSweep(sweep_opts, sw, sweep_cmd, out);
    if (*cfg_cmd) return CmdConfig(cfg_opts, cfg_cmd, out);
  } catch (const UsageError& e) {
    err << "cabkws: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "cabkws: error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace cabkws::cli
