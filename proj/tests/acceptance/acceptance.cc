// tests/acceptance/acceptance.cc

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

// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits nonzero if any selected criterion fails.
//
//   acceptance [--work DIR] [--keep] [--report FILE] [criterion ...]
//
// With no criterion numbers all ten are run. Criteria 3, 7, 8 and 9 share one
// pretrain-step sweep.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cabkws/audio/augment.h"
#include "cabkws/audio/fbank.h"
#include "cabkws/common/random.h"
#include "cabkws/data/corpus.h"
#include "cabkws/data/synth.h"
#include "cabkws/loss/losses.h"
#include "cabkws/model/checkpoint.h"
#include "cabkws/model/network.h"
#include "cabkws/model/params.h"
#include "cabkws/train/sweep.h"
#include "cabkws/train/trainer.h"
#include "cli/cli.h"
#include "loss_oracle.h"

namespace cabkws {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), format, args...);
  return buf;
}

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

void Progress(const std::string& text) {
  std::fprintf(stderr, "[acceptance] %s\n", text.c_str());
  std::fflush(stderr);
}

struct CliOutcome {
  int code = -1;
  std::string out;
  std::string err;
};

CliOutcome Invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliOutcome o;
  o.code = cli::RunCli(args, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

std::string ReadAll(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

Mat<double> UnitRows(int n, int d, Rng& rng) {
  Mat<double> m(n, d);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < d; ++k) m(i, k) = rng.Uniform(-1.0, 1.0);
  for (int i = 0; i < n; ++i) m.row(i) /= m.row(i).norm();
  return m;
}

// ------------------------------------------------------------- criterion 1

Verdict GradientCheck(const fs::path& work) {
  const auto t0 = Clock::now();
  const CliOutcome r = Invoke({"gradcheck", "--out", (work / "gradcheck").string()});
  const double secs = Seconds(t0);
  if (r.code != 0 && r.out.empty()) return {false, "gradcheck failed: " + r.err};
  const nlohmann::json j = nlohmann::json::parse(r.out);

  const ParamLayout layout(ModelConfig::Tiny());
  std::set<std::string> all;
  for (const auto& t : layout.tensors()) all.insert(t.name);

  bool ok = r.code == 0 && j.at("passed").get<bool>() && secs < 120.0;
  std::set<std::string> covered;
  std::set<std::string> seen_objectives;
  std::string per;
  for (const auto& rep : j.at("reports")) {
    const std::string name = rep.at("objective").get<std::string>();
    const int coords = rep.at("coords").get<int>();
    const double err = rep.at("max_rel_err").get<double>();
    seen_objectives.insert(name);
    ok = ok && coords >= 1000 && err <= 1e-4;
    int tensors = 0;
    for (const auto& t : rep.at("tensors")) {
      if (t.at("coords").get<int>() < 1) continue;
      covered.insert(t.at("name").get<std::string>());
      ++tensors;
    }
    per += Fmt(" %s: %d coords over %d tensors, max rel err %.2e;", name.c_str(), coords, tensors,
               err);
  }
  ok = ok && seen_objectives.count("l_ul") && seen_objectives.count("ce") && covered == all;
  return {ok, Fmt("%.1f s,", secs) + per +
                  Fmt(" %zu/%zu tensors covered", covered.size(), all.size())};
}

// ------------------------------------------------------------- criterion 2

Verdict LossOracles() {
  Rng rng(2024);
  double worst = 0.0;
  int batches = 0;
  for (int b = 0; b < 100; ++b, ++batches) {
    const int n = 2 + static_cast<int>(rng.Below(15));  // 2..16
    const int even = n - n % 2;
    const double tau = rng.Uniform(0.05, 1.0);
    const Mat<double> z = UnitRows(n, 8, rng);
    const Mat<double> theta = UnitRows(n, 8, rng);
    const auto y = oracle::RandomLabels(n, rng);

    const Mat<double> zs = z.topRows(even);
    const auto pair = oracle::RandomPairing(even, rng);
    worst = std::max(worst, std::abs(SelfContrast(zs, pair, tau) - oracle::Self(zs, pair, tau)));
    worst = std::max(worst,
                     std::abs(SupervisedContrast(z, y, tau) - oracle::Supervised(z, y, tau)));
    for (ContrastMode mode : {ContrastMode::kWithinBatch, ContrastMode::kPairedViews}) {
      const bool paired = mode == ContrastMode::kPairedViews;
      worst = std::max(worst, std::abs(AnchorContrastZ(z, theta, y, tau, mode) -
                                       oracle::AnchorZ(z, theta, y, tau, paired)));
      worst = std::max(worst, std::abs(AnchorContrastTheta(z, theta, y, tau, mode) -
                                       oracle::AnchorTheta(z, theta, y, tau, paired)));
    }
  }

  // Closed-form cases.
  double hand = 0.0;
  {
    Mat<double> z(4, 2);
    z << 1, 0, 1, 0, 0, 1, 0, 1;
    hand = std::max(hand, std::abs(SelfContrast(z, std::vector<int>{1, 0, 3, 2}, 1.0) -
                                   std::log(1.0 + 2.0 / std::exp(1.0))));
  }
  {
    Mat<double> z(2, 3);
    z << 1, 0, 0, 1, 0, 0;
    hand = std::max(hand, std::abs(SelfContrast(z, std::vector<int>{1, 0}, 1.0)));
  }
  {
    const Mat<double> z = Mat<double>::Identity(3, 3);
    hand = std::max(hand, std::abs(SupervisedContrast(z, std::vector<int>{0, 0, 1}, 1.0) -
                                   std::log(2.0)));
  }
  {
    Mat<double> z(2, 2);
    z << 0.6, 0.8, 0.6, 0.8;
    hand = std::max(hand, std::abs(SupervisedContrast(z, std::vector<int>{3, 3}, 0.5)));
  }
  const bool ok = worst <= 1e-10 && hand <= 1e-9;
  return {ok, Fmt("%d random batches (N in 2..16), max |impl - oracle| %.2e; closed-form max "
                  "error %.2e",
                  batches, worst, hand)};
}

// ------------------------------------------------------------- criterion 4

Verdict ShapeChain() {
  const ModelConfig c;
  const FbankMatrix fb = ComputeFbank(SynthUtterance(3, 11));
  const std::vector<FbankMatrix> feats{fb};
  const Mat<float> x = StackFeatures<float>(std::span<const FbankMatrix>(feats));
  const Network<float> net(c);
  const ParamStore<float> p = InitParams<float>(c, 0);
  const Trace<float> pre = net.Forward(p, x, 1, Mode::kPretrain);
  const Trace<float> ft = net.Forward(p, x, 1, Mode::kFinetune);
  const auto& conv = pre.conv_out.back();
  const auto& res = pre.residual.back().out;
  const int seq_rows = static_cast<int>(pre.sequence.rows());
  const int seq_cols = static_cast<int>(pre.sequence.cols());

  const bool ok = fb.NumFrames() == 98 && fb.Dim() == 40 && conv.h == 25 && conv.w == 10 &&
                  conv.channels() == 32 && res.h == 25 && res.w == 10 && res.channels() == 32 &&
                  pre.pooled.h == 13 && seq_rows == 13 && seq_cols == 320 &&
                  pre.e_tran.cols() == 320 && pre.e_feat.cols() == 640 &&
                  pre.e_bn.cols() == 800 && pre.logits.cols() == 12 &&
                  pre.recon.cols() == 40 && !ft.has_recon() && ft.logits.cols() == 12;
  return {ok, Fmt("fbank %dx%d -> conv %dx%dx%d -> pooled seq %dx%d -> feat %d -> bn %d -> "
                  "logits %d, recon %d (finetune recon %s)",
                  fb.NumFrames(), fb.Dim(), conv.h, conv.w, conv.channels(), seq_rows, seq_cols,
                  static_cast<int>(pre.e_feat.cols()), static_cast<int>(pre.e_bn.cols()),
                  static_cast<int>(pre.logits.cols()), static_cast<int>(pre.recon.cols()),
                  ft.has_recon() ? "present" : "absent")};
}

// ------------------------------------------------------------- criterion 5

Verdict SnrExactness() {
  double worst = 0.0;
  int mixes = 0;
  for (int k = 0; k < 2; ++k) {
    const NoiseKind kind = k == 0 ? NoiseKind::kWhite : NoiseKind::kPink;
    for (uint64_t s = 0; s < 4; ++s) {
      const Waveform clean = SynthUtterance(static_cast<int>(s) * 3, 100 + s);
      // Shorter and longer noise, to cover tiling and windowing.
      const Waveform noise = SynthNoise(kind, s % 2 ? 6000 : 40000, 7 + s);
      for (double snr : {0.0, 5.0, 10.0, 15.0, 20.0}) {
        const MixResult m = MixNoise(clean, noise, snr, 31 * s + 1);
        double ps = 0.0, pn = 0.0;
        const std::size_t n = std::min(clean.size(), m.scaled_noise.size());
        for (std::size_t i = 0; i < n; ++i) {
          ps += clean.samples[i] * clean.samples[i];
          pn += m.scaled_noise[i] * m.scaled_noise[i];
        }
        worst = std::max(worst, std::abs(10.0 * std::log10(ps / pn) - snr));
        ++mixes;
      }
    }
  }
  return {worst <= 1e-9, Fmt("%d mixes at {0,5,10,15,20} dB, max |measured - target| %.2e dB",
                             mixes, worst)};
}

// ------------------------------------------------------------- criterion 6

Verdict FromScratch(const fs::path& work) {
  const auto t0 = Clock::now();
  const Corpus corpus = SynthDataset(SynthSpec{});
  const RunConfig config;
  const auto train = corpus.manifest.LabeledIndices(Split::kTrain);
  const auto dev = corpus.manifest.LabeledIndices(Split::kDev);
  const auto eval = corpus.manifest.LabeledIndices(Split::kEval);
  Progress(Fmt("criterion 6: fine-tuning from scratch, %d steps on %zu utterances",
               config.train.finetune_steps, train.size()));
  const FinetuneResult r = Finetune(corpus, train, dev, config.model, config.train, nullptr,
                                    (work / "scratch").string());
  const EvalResult e = Evaluate(config.model, r.best.params, corpus, eval);
  const double secs = Seconds(t0);
  const bool ok = e.accuracy >= 0.90 && secs < 1800.0 && e.total == 600;
  return {ok, Fmt("eval accuracy %.4f (%d/%d), best dev %.4f at step %d, %.0f s", e.accuracy,
                  e.correct, e.total, r.best_dev_acc, r.best_step, secs)};
}

// --------------------------------------------------------- criteria 3,7,8,9

struct SweepOutcome {
  SweepResult result;
  Verdict composition, gain, agreement, monotone;
};

constexpr int kLabeledPerClass = 25;
constexpr int kSweepFinetuneSteps = 500;
constexpr int kSweepEvalEvery = 50;

RunConfig SweepConfig() {
  RunConfig c;
  c.train.finetune_steps = kSweepFinetuneSteps;
  c.train.eval_every = kSweepEvalEvery;
  return c;
}

Verdict CheckComposition(const fs::path& sweep_dir, const std::vector<uint64_t>& seeds,
                         int expected_steps) {
  const ModelConfig defaults;
  const bool weights = defaults.lambda_sim == 0.8 && defaults.lambda_x == 0.05 &&
                      defaults.lambda_x_aug == 0.05 && defaults.lambda_dual == 0.1;
  double worst_ul = 0.0, worst_dual = 0.0;
  int steps = 0;
  bool counts_ok = true;
  for (uint64_t s : seeds) {
    std::ifstream in(sweep_dir / ("seed" + std::to_string(s)) / "pretrain" /
                     "pretrain_metrics.jsonl");
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
      const nlohmann::json j = nlohmann::json::parse(line);
      const double l_sim = j.at("l_sim"), l_x = j.at("l_x"), l_x_aug = j.at("l_x_aug");
      const double l_z = j.at("l_z"), l_theta = j.at("l_theta"), l_dual = j.at("l_dual");
      const double l_ul = j.at("l_ul");
      const double composed = 0.8 * l_sim + 0.05 * l_x + 0.05 * l_x_aug + 0.1 * l_dual;
      worst_ul = std::max(worst_ul, std::abs(l_ul - composed));
      worst_dual = std::max(worst_dual, std::abs(l_dual - (l_z + l_theta)));
      ++n;
    }
    counts_ok = counts_ok && n == expected_steps;
    steps += n;
  }
  const bool ok = weights && counts_ok && worst_ul <= 1e-9 && worst_dual <= 1e-9;
  return {ok, Fmt("%d pretraining steps checked, max |l_ul - composed| %.2e, max |l_dual - "
                  "(l_z + l_theta)| %.2e, default weights %s",
                  steps, worst_ul, worst_dual, weights ? "0.8/0.05/0.05/0.1" : "WRONG")};
}

SweepOutcome RunSweep(const fs::path& work) {
  SweepOutcome o;
  const auto t0 = Clock::now();
  const Corpus corpus = SynthDataset(SynthSpec{});
  const RunConfig config = SweepConfig();
  SweepPools pools;
  pools.pretrain = corpus.manifest.Indices(Split::kTrain);
  pools.train = LabeledSubset(corpus.manifest, Split::kTrain, kLabeledPerClass);
  pools.dev = corpus.manifest.LabeledIndices(Split::kDev);
  pools.eval = corpus.manifest.LabeledIndices(Split::kEval);
  const std::vector<int> counts{0, 250, 1000};
  const std::vector<uint64_t> seeds{0, 1, 2};
  const fs::path dir = work / "sweep";
  Progress(Fmt("criteria 3/7/8/9: sweep over pretrain steps {0,250,1000} x seeds {0,1,2}, %zu "
               "labeled, %d fine-tune steps",
               pools.train.size(), kSweepFinetuneSteps));
  o.result = StepSweep(corpus, pools, counts, seeds, config, dir.string());
  const double secs = Seconds(t0);

  std::string rows;
  for (const SweepRow& r : o.result.rows)
    rows += Fmt(" s%llu/%d=%.4f", static_cast<unsigned long long>(r.seed), r.pretrain_steps,
                r.eval_acc);
  const auto& mean = o.result.mean_eval_acc;

  const double gain = mean[2] - mean[0];
  o.gain = {gain >= 0.05, Fmt("mean eval accuracy %.4f with 1000 pretrain steps vs %.4f without "
                              "(%+.2f pp); rows%s; sweep %.0f s",
                              mean[2], mean[0], 100.0 * gain, rows.c_str(), secs)};

  const bool monotone = mean[1] >= mean[0] && mean[2] >= mean[1];
  o.monotone = {monotone, Fmt("mean eval accuracy over {0,250,1000} = %.4f, %.4f, %.4f", mean[0],
                              mean[1], mean[2])};

  o.composition = CheckComposition(dir, seeds, counts.back());

  // 200 held-out utterances from every class: every third eval entry.
  std::vector<std::size_t> held;
  for (std::size_t i = 0; i < pools.eval.size() && held.size() < 200; i += 3)
    held.push_back(pools.eval[i]);
  bool agree_ok = held.size() == 200;
  std::string detail;
  for (uint64_t s : seeds) {
    const Checkpoint ck =
        LoadCheckpoint((dir / ("seed" + std::to_string(s)) / "pretrain" / "pretrain.ckpt").string());
    const uint64_t aseed = DeriveSeed(s, {kSeedAgreement});
    const ViewAgreement pre =
        MeasureViewAgreement(config.model, ck.params, corpus, held, config.augment, aseed);
    const ViewAgreement init = MeasureViewAgreement(
        config.model, InitParams<float>(config.model, DeriveSeed(s, {kSeedInit})), corpus, held,
        config.augment, aseed);
    const double diff = pre.matched - pre.mismatched;
    agree_ok = agree_ok && diff >= 0.2;
    detail += Fmt(" seed %llu: matched %.3f mismatched %.3f diff %.3f (init diff %.3f);",
                  static_cast<unsigned long long>(s), pre.matched, pre.mismatched, diff,
                  init.matched - init.mismatched);
  }
  o.agreement = {agree_ok, Fmt("%zu held-out utterances,", held.size()) + detail};
  return o;
}

// ------------------------------------------------------------ criterion 10

// Relative path -> bytes of every regular file under root.
std::map<std::string, std::string> Snapshot(const fs::path& root) {
  std::map<std::string, std::string> files;
  if (!fs::exists(root)) return files;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) files[fs::relative(e.path(), root).string()] = ReadAll(e.path());
  return files;
}

Verdict Reproducibility(const fs::path& work) {
  const fs::path root = work / "repro";
  fs::create_directories(root);
  {
    std::ofstream(root / "run.json") << R"({
  "train": {"batch_size": 8, "pretrain_steps": 6, "finetune_steps": 6, "eval_every": 3},
  "data": {"synth_train_per_class": 4, "synth_dev_per_class": 2, "synth_eval_per_class": 2}
})";
  }
  const std::string cfg = (root / "run.json").string();

  // Inputs shared by both runs.
  const CliOutcome seed_data =
      Invoke({"synth-data", "--out", (root / "input").string(), "--per-class", "2", "--seed", "9"});
  if (seed_data.code != 0) return {false, "synth-data failed: " + seed_data.err};
  const std::string wav = (root / "input" / "wav" / "synth_train_00_0000.wav").string();
  const std::string noise = (root / "input" / "wav" / "synth_train_05_0001.wav").string();
  const CliOutcome base = Invoke({"pretrain", "--config", cfg, "--out", (root / "base").string()});
  if (base.code != 0) return {false, "pretrain failed: " + base.err};
  const std::string init = (root / "base" / "pretrain.ckpt").string();

  using Command = std::function<std::vector<std::string>(const fs::path&)>;
  const std::vector<std::pair<std::string, Command>> commands = {
      {"synth-data",
       [](const fs::path& d) {
         return std::vector<std::string>{"synth-data", "--out", d.string(), "--per-class", "3",
                                         "--seed", "4"};
       }},
      {"augment",
       [&](const fs::path& d) {
         fs::create_directories(d);
         return std::vector<std::string>{"augment", "--in", wav, "--out",
                                         (d / "aug.wav").string(), "--speed", "1.1", "--volume",
                                         "0.7", "--noise", noise, "--snr", "5", "--seed", "3"};
       }},
      {"fbank",
       [&](const fs::path& d) {
         fs::create_directories(d);
         return std::vector<std::string>{"fbank", "--in", wav, "--out",
                                         (d / "feats.bin").string()};
       }},
      {"pretrain",
       [&](const fs::path& d) {
         return std::vector<std::string>{"pretrain", "--config", cfg, "--out", d.string()};
       }},
      {"finetune",
       [&](const fs::path& d) {
         return std::vector<std::string>{"finetune", "--config", cfg, "--out", d.string(),
                                         "--data.init_checkpoint=" + init,
                                         "--train.finetune_dual=true"};
       }},
      {"eval",
       [&](const fs::path& d) {
         return std::vector<std::string>{"eval", "--config", cfg, "--out", d.string(),
                                         "--data.checkpoint=" + init};
       }},
      {"gradcheck",
       [&](const fs::path& d) {
         return std::vector<std::string>{"gradcheck", "--config", cfg, "--out", d.string(),
                                         "--coords", "60"};
       }},
      {"sweep",
       [&](const fs::path& d) {
         return std::vector<std::string>{"sweep", "--config", cfg, "--out", d.string(),
                                         "--counts", "0,3", "--seeds", "1"};
       }},
  };

  std::string detail;
  bool ok = true;
  int files = 0;
  for (const auto& [name, make] : commands) {
    const fs::path a = root / (name + "_a"), b = root / (name + "_b");
    const CliOutcome ra = Invoke(make(a));
    const CliOutcome rb = Invoke(make(b));
    const auto fa = Snapshot(a), fb = Snapshot(b);
    // Output paths differ by run directory; the rest of stdout must match.
    std::string oa = ra.out, ob = rb.out;
    for (std::size_t pos; (pos = oa.find(a.string())) != std::string::npos;)
      oa.replace(pos, a.string().size(), "<dir>");
    for (std::size_t pos; (pos = ob.find(b.string())) != std::string::npos;)
      ob.replace(pos, b.string().size(), "<dir>");
    // eval reports on stdout only.
    const bool wrote = name == "eval" || !fa.empty();
    const bool same = ra.code == 0 && rb.code == 0 && wrote && fa == fb && oa == ob;
    ok = ok && same;
    files += static_cast<int>(fa.size());
    detail += Fmt(" %s %s (%zu files);", name.c_str(), same ? "identical" : "DIFFERS", fa.size());
  }
  return {ok, Fmt("%zu commands run twice, %d files compared;", commands.size(), files) + detail};
}

// ------------------------------------------------------------------ driver

const char* kTitles[] = {
    "",
    "gradient check of l_ul and cross-entropy",
    "contrastive losses match brute-force oracles",
    "l_ul composition on every pretraining step",
    "network shape chain",
    "mixing hits the target SNR",
    "from-scratch synthetic accuracy",
    "pretraining beats no pretraining on the low-label arm",
    "view agreement after pretraining",
    "accuracy non-decreasing in pretraining steps",
    "byte-identical reruns",
};

int Main(int argc, char** argv) {
  fs::path work = fs::temp_directory_path() / "cabkws_acceptance";
  bool keep = false;
  std::string report_path;
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--work" && i + 1 < argc) {
      work = argv[++i];
    } else if (a == "--keep") {
      keep = true;
    } else if (a == "--report" && i + 1 < argc) {
      report_path = argv[++i];
    } else {
      const int n = std::atoi(a.c_str());
      if (n < 1 || n > 10) {
        std::fprintf(stderr, "usage: acceptance [--work DIR] [--keep] [--report FILE] [criterion ...]\n");
        return 2;
      }
      selected.insert(n);
    }
  }
  if (selected.empty())
    for (int n = 1; n <= 10; ++n) selected.insert(n);
  fs::remove_all(work);
  fs::create_directories(work);

  std::map<int, Verdict> verdicts;
  const auto guarded = [&](int n, const std::function<Verdict()>& f) {
    if (!selected.count(n)) return;
    const auto t0 = Clock::now();
    try {
      verdicts[n] = f();
    } catch (const std::exception& e) {
      verdicts[n] = {false, std::string("exception: ") + e.what()};
    }
    Progress(Fmt("criterion %d done in %.0f s: %s", n, Seconds(t0),
                 verdicts[n].pass ? "PASS" : "FAIL"));
  };

  guarded(1, [&] { return GradientCheck(work); });
  guarded(2, [] { return LossOracles(); });
  guarded(4, [] { return ShapeChain(); });
  guarded(5, [] { return SnrExactness(); });
  guarded(10, [&] { return Reproducibility(work); });
  guarded(6, [&] { return FromScratch(work); });
  if (selected.count(3) || selected.count(7) || selected.count(8) || selected.count(9)) {
    const auto t0 = Clock::now();
    try {
      const SweepOutcome s = RunSweep(work);
      verdicts[3] = s.composition;
      verdicts[7] = s.gain;
      verdicts[8] = s.agreement;
      verdicts[9] = s.monotone;
    } catch (const std::exception& e) {
      for (int n : {3, 7, 8, 9}) verdicts[n] = {false, std::string("exception: ") + e.what()};
    }
    Progress(Fmt("sweep done in %.0f s", Seconds(t0)));
    for (int n : {3, 7, 8, 9})
      if (!selected.count(n)) verdicts.erase(n);
  }

  int failed = 0;
  std::string report;
  for (const auto& [n, v] : verdicts) {
    report += Fmt("%s criterion %2d (%s): ", v.pass ? "PASS" : "FAIL", n, kTitles[n]) + v.detail +
              "\n";
    if (!v.pass) ++failed;
  }
  report += Fmt("%d/%zu criteria passed\n", static_cast<int>(verdicts.size()) - failed,
                verdicts.size());
  std::fputs(report.c_str(), stdout);
  std::fflush(stdout);
  if (!report_path.empty()) std::ofstream(report_path) << report;
  if (!keep) fs::remove_all(work);
  return failed == 0 ? 0 : 1;
}

}  // namespace
}  // namespace cabkws

int main(int argc, char** argv) { return cabkws::Main(argc, argv); }
