// gopaf/src/commands.cc

// Copyright 2026 The gopaf Authors
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

#include "gopaf/commands.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "gopaf/corpus_io.h"
#include "gopaf/evaluation.h"
#include "gopaf/features.h"
#include "gopaf/gop.h"
#include "gopaf/peakiness.h"
#include "parallel.h"

namespace gopaf {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CommonOptions {
  std::string manifest;
  std::string inventory;
  std::string output;
  int jobs = 1;
  bool unproblematic_correct = false;
};

struct ScoreOptions {
  std::string method = "af-sd";
  std::string variant = "sd";
  bool norm = false;
  bool loss_diff = false;
  std::string occupancy = "forward";
};

struct EvaluateOptions {
  std::vector<std::string> scores;
  std::string manifest;
  std::string metric = "auc";
  int positive_label = 1;
  std::string orientation = "negated";
  std::string regression = "poly2";
  std::string train_scores;
  std::string train_manifest;
  bool round = false;
  bool unproblematic_correct = false;
  std::string format = "json";
  std::string output;
};

struct SimulateOptions {
  std::string strategy = "cyclic";
  std::uint64_t seed = 0;
};

struct CropOptions {
  std::vector<int> context_k{0, 1, 2, 3, 4, 5, 6, 7};
  bool no_full = false;
  std::string output_dir;
};

// Writes to a file when a path is given, else to the fallback stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::trunc);
      if (!file_) throw Error("cannot write '" + path + "'");
      stream_ = &file_;
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<int> targets_of(const ManifestEntry& e) {
  const int n = static_cast<int>(e.phones.size());
  if (!e.targets) {
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    return all;
  }
  for (int i : *e.targets)
    if (i < 0 || i >= n)
      throw Error("utterance '" + e.utt_id + "': target index " + std::to_string(i) +
                  " out of range");
  return *e.targets;
}

// Every file is loaded and validated before any scoring starts. A bad file
// or record aborts the run.
std::vector<CorpusItem> load_corpus(const Manifest& manifest,
                                    const PhoneInventory& inventory,
                                    bool unproblematic_correct, int jobs) {
  const std::size_t n = manifest.entries.size();
  std::vector<std::optional<CorpusItem>> items(n);
  std::vector<std::string> failures(n);
  parallel_for(n, jobs, [&](std::size_t u) {
    const ManifestEntry& e = manifest.entries[u];
    try {
      Posteriorgram post = read_posteriorgram(manifest.posteriorgram_path(e));
      if (post.symbols() != inventory.size())
        throw Error("posteriorgram has " + std::to_string(post.symbols()) +
                    " symbols, inventory has " + std::to_string(inventory.size()));
      CanonicalUtterance utt = to_utterance(e, inventory, unproblematic_correct);
      utt.validate(inventory, post.frames());
      targets_of(e);
      items[u] = CorpusItem{std::move(post), std::move(utt)};
    } catch (const std::exception& ex) {
      failures[u] = ex.what();
    }
  });
  std::vector<CorpusItem> out;
  out.reserve(n);
  for (std::size_t u = 0; u < n; ++u) {
    if (!items[u])
      throw Error("utterance '" + manifest.entries[u].utt_id + "': " + failures[u]);
    out.push_back(std::move(*items[u]));
  }
  return out;
}

void report_errors(std::ostream& err, const std::vector<BatchError>& errors) {
  for (const BatchError& e : errors)
    err << "gopaf: warning: utterance '" << e.utterance_id << "': " << e.message << '\n';
}

GopMethod resolve_method(const ScoreOptions& opt) {
  const std::string m = lower(opt.method);
  if (m == "af") return af_method(parse_variant(lower(opt.variant)), opt.norm);
  const GopMethod method = parse_method(m);
  if (!opt.norm) return method;
  if (!is_alignment_free(method))
    throw Error("--norm applies to alignment-free methods only");
  return af_method(method_variant(method), true);
}

int run_score(const CommonOptions& common, const ScoreOptions& opt,
              std::ostream& out, std::ostream& err) {
  const GopMethod method = resolve_method(opt);
  if (opt.loss_diff && !is_alignment_free(method))
    throw Error("--loss-diff applies to alignment-free methods only");
  const OccupancyMode mode = lower(opt.occupancy) == "forward-backward"
                                 ? OccupancyMode::kForwardBackward
                                 : OccupancyMode::kForward;
  if (mode == OccupancyMode::kForward && lower(opt.occupancy) != "forward")
    throw Error("unknown occupancy mode '" + opt.occupancy + "'");

  const PhoneInventory inventory = read_inventory(common.inventory);
  const Manifest manifest = read_manifest(common.manifest);
  const std::vector<CorpusItem> corpus =
      load_corpus(manifest, inventory, common.unproblematic_correct, common.jobs);

  std::vector<std::vector<ScoreRecord>> per_utt(corpus.size());
  std::vector<std::optional<std::string>> failures(corpus.size());
  parallel_for(corpus.size(), common.jobs, [&](std::size_t u) {
    const CorpusItem& item = corpus[u];
    try {
      UtteranceScorer scorer(item.post, item.utt, inventory, mode);
      for (int i : targets_of(manifest.entries[u])) {
        const GopScore s = scorer.score(i, method);
        ScoreRecord r;
        r.utt_id = item.utt.id;
        r.phone_index = i;
        r.phone = inventory.name(item.utt.phones[i]);
        r.method = std::string(method_name(method));
        r.value = s.value;
        if (opt.loss_diff) {
          r.method = "loss-diff:" + r.method;
          r.value = -s.value;
        }
        r.occupancy = s.occupancy;
        r.span = s.span;
        if (item.utt.labels) r.label = (*item.utt.labels)[i];
        per_utt[u].push_back(std::move(r));
      }
    } catch (const std::exception& e) {
      failures[u] = e.what();
      per_utt[u].clear();
    }
  });

  Sink sink(common.output, out);
  std::vector<BatchError> errors;
  std::size_t n_records = 0;
  for (std::size_t u = 0; u < corpus.size(); ++u) {
    if (failures[u]) {
      errors.push_back({corpus[u].utt.id, *failures[u]});
      continue;
    }
    for (const ScoreRecord& r : per_utt[u]) *sink << format_score_record(r) << '\n';
    n_records += per_utt[u].size();
  }
  report_errors(err, errors);
  err << "gopaf: scored " << n_records << " phones, " << errors.size()
      << " utterance(s) failed\n";
  return kExitOk;
}

// utt_id -> per-phone labels, for score records without a label field.
std::map<std::string, std::vector<int>> label_table(const std::string& path,
                                                    bool unproblematic_correct) {
  std::map<std::string, std::vector<int>> table;
  if (path.empty()) return table;
  for (const ManifestEntry& e : read_manifest(path).entries)
    if (auto labels = manifest_labels(e, unproblematic_correct)) table[e.utt_id] = *labels;
  return table;
}

struct LabelledScores {
  std::string method;
  std::vector<double> scores;
  std::vector<int> labels;
};

LabelledScores load_labelled(const std::string& scores_path,
                             const std::string& manifest_path,
                             bool unproblematic_correct) {
  const auto table = label_table(manifest_path, unproblematic_correct);
  LabelledScores out;
  for (const ScoreRecord& r : read_scores(scores_path)) {
    std::optional<int> label = r.label;
    if (auto it = table.find(r.utt_id); it != table.end()) {
      if (r.phone_index < 0 || r.phone_index >= static_cast<int>(it->second.size()))
        throw Error("score record for '" + r.utt_id + "' has phone index out of range");
      label = it->second[r.phone_index];
    }
    if (!label)
      throw Error("no label for utterance '" + r.utt_id + "' phone " +
                  std::to_string(r.phone_index));
    if (out.method.empty()) out.method = r.method;
    out.scores.push_back(r.value);
    out.labels.push_back(*label);
  }
  if (out.scores.empty()) throw Error("'" + scores_path + "' holds no score records");
  return out;
}

std::string fixed(double v, int digits) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

int run_evaluate(const EvaluateOptions& opt, std::ostream& out) {
  const std::string metric = lower(opt.metric);
  if (metric != "auc" && metric != "pcc")
    throw Error("unknown metric '" + opt.metric + "' (expected auc or pcc)");
  if (opt.format != "json" && opt.format != "table")
    throw Error("unknown format '" + opt.format + "' (expected json or table)");
  const Orientation orientation = parse_orientation(lower(opt.orientation));

  std::optional<Poly2Fit> train_fit;
  if (metric == "pcc" && !opt.train_scores.empty()) {
    const LabelledScores train =
        load_labelled(opt.train_scores, opt.train_manifest, opt.unproblematic_correct);
    const std::vector<double> y(train.labels.begin(), train.labels.end());
    train_fit = poly2_regression(train.scores, y);
  }

  Sink sink(opt.output, out);
  if (opt.format == "table")
    *sink << (metric == "auc" ? "method\tAUC (95% CI)\tn_pos\tn_neg\n" : "method\tPCC\tn\n");
  for (const std::string& path : opt.scores) {
    const LabelledScores data =
        load_labelled(path, opt.manifest, opt.unproblematic_correct);
    json report = json::object();
    report["scores"] = path;
    report["method"] = data.method;
    report["metric"] = metric;
    if (metric == "auc") {
      std::vector<ScoredPhone> phones;
      phones.reserve(data.scores.size());
      for (std::size_t k = 0; k < data.scores.size(); ++k)
        phones.push_back({"", 0, data.scores[k], data.labels[k]});
      const AucResult r = auc_roc(phones, opt.positive_label, orientation);
      report["auc"] = r.auc;
      report["ci95_halfwidth"] = r.ci95_halfwidth;
      report["n_pos"] = r.n_pos;
      report["n_neg"] = r.n_neg;
      report["positive_label"] = opt.positive_label;
      report["orientation"] = std::string(orientation_name(orientation));
      if (opt.format == "table")
        *sink << data.method << '\t' << fixed(r.auc, 3) << " (±" << fixed(r.ci95_halfwidth, 3)
              << ")\t" << r.n_pos << '\t' << r.n_neg << '\n';
    } else {
      const std::vector<double> y(data.labels.begin(), data.labels.end());
      std::vector<double> pred = data.scores;
      const std::string regression = lower(opt.regression);
      if (regression == "poly2") {
        const Poly2Fit fit = train_fit ? *train_fit : poly2_regression(data.scores, y);
        pred = fit.predict(data.scores);
        report["coef"] = fit.coef;
      } else if (regression != "none") {
        throw Error("unknown regression '" + opt.regression + "' (expected poly2 or none)");
      }
      if (opt.round) {
        const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
        for (double& p : pred) p = std::clamp(std::round(p), *lo, *hi);
      }
      const double r = pcc(pred, y);
      report["pcc"] = r;
      report["n"] = data.scores.size();
      report["regression"] = regression;
      report["fit_on"] = train_fit ? "train" : "self";
      report["rounded"] = opt.round;
      if (opt.format == "table")
        *sink << data.method << '\t' << fixed(r, 3) << '\t' << data.scores.size() << '\n';
    }
    if (opt.format == "json") *sink << report.dump() << '\n';
  }
  return kExitOk;
}

int run_features(const CommonOptions& common, bool with_occ, std::ostream& out,
                 std::ostream& err) {
  const PhoneInventory inventory = read_inventory(common.inventory);
  const Manifest manifest = read_manifest(common.manifest);
  const std::vector<CorpusItem> corpus =
      load_corpus(manifest, inventory, common.unproblematic_correct, common.jobs);
  const FgopBatch batch = fgop_batch(corpus, inventory, with_occ, common.jobs);

  std::map<std::string, std::size_t> index_of;
  for (std::size_t u = 0; u < corpus.size(); ++u) index_of[corpus[u].utt.id] = u;

  Sink sink(common.output, out);
  *sink << json{{"columns", fgop_columns(inventory, with_occ)}}.dump() << '\n';
  for (const FgopVector& v : batch.vectors) {
    const std::size_t u = index_of.at(v.utterance_id);
    const std::vector<int> targets = targets_of(manifest.entries[u]);
    if (std::find(targets.begin(), targets.end(), v.phone_index) == targets.end()) continue;
    const CanonicalUtterance& utt = corpus[u].utt;
    json j = {{"utt_id", v.utterance_id},
              {"phone_index", v.phone_index},
              {"phone", inventory.name(utt.phones[v.phone_index])},
              {"features", v.flatten()}};
    if (utt.labels) j["label"] = (*utt.labels)[v.phone_index];
    *sink << j.dump() << '\n';
  }
  report_errors(err, batch.errors);
  return kExitOk;
}

int run_peakiness(const CommonOptions& common, bool per_utterance,
                  std::ostream& out, std::ostream& err) {
  const PhoneInventory inventory = read_inventory(common.inventory);
  const Manifest manifest = read_manifest(common.manifest);
  const std::vector<CorpusItem> corpus = load_corpus(manifest, inventory, false, common.jobs);
  const PeakinessReport report = peakiness_report(corpus, inventory, common.jobs);

  Sink sink(common.output, out);
  *sink << json{{"blank_coverage", report.blank_coverage},
                {"cond_entropy", report.cond_entropy},
                {"n_utterances", report.n_utterances},
                {"n_errors", report.errors.size()}}
               .dump()
        << '\n';
  if (per_utterance)
    for (const UtterancePeakiness& p : report.per_utterance)
      *sink << json{{"utt_id", p.utterance_id},
                    {"blank_coverage", p.blank_coverage},
                    {"cond_entropy", p.cond_entropy}}
                   .dump()
            << '\n';
  report_errors(err, report.errors);
  return kExitOk;
}

// Path of `target` as written in a manifest stored in `dir`.
std::string relocate(const fs::path& target, const fs::path& dir) {
  const fs::path abs_target = fs::absolute(target).lexically_normal();
  const fs::path rel = abs_target.lexically_relative(fs::absolute(dir).lexically_normal());
  return rel.empty() ? abs_target.string() : rel.string();
}

int run_simulate(const CommonOptions& common, const SimulateOptions& opt,
                 std::ostream& out, std::ostream& err) {
  SubstitutionStrategy strategy;
  const std::string kind = lower(opt.strategy);
  if (kind == "cyclic") {
    strategy.kind = SubstitutionKind::kCyclic;
  } else if (kind == "seeded") {
    strategy.kind = SubstitutionKind::kSeeded;
  } else {
    throw Error("unknown strategy '" + opt.strategy + "' (expected cyclic or seeded)");
  }
  strategy.seed = opt.seed;

  const PhoneInventory inventory = read_inventory(common.inventory);
  const Manifest manifest = read_manifest(common.manifest);
  const fs::path out_dir =
      common.output.empty() ? fs::current_path() : fs::path(common.output).parent_path();

  std::vector<ManifestEntry> entries;
  for (std::size_t u = 0; u < manifest.entries.size(); ++u) {
    const ManifestEntry& e = manifest.entries[u];
    CanonicalUtterance utt = to_utterance(e, inventory);
    utt.labels.reset();
    // Utterance u draws from a generator seeded with seed + u.
    SubstitutionStrategy s = strategy;
    s.seed = strategy.seed + u;
    const std::string pg = relocate(manifest.posteriorgram_path(e), out_dir);
    for (const CanonicalUtterance& c : simulate_errors(utt, inventory, s)) {
      ManifestEntry ce = to_manifest_entry(c, inventory, pg);
      ce.frame_rate = e.frame_rate;
      entries.push_back(std::move(ce));
    }
  }
  Sink sink(common.output, out);
  for (const ManifestEntry& e : entries) *sink << format_manifest_line(e) << '\n';
  err << "gopaf: wrote " << entries.size() << " corrupted utterance(s)\n";
  return kExitOk;
}

int run_crop(const CommonOptions& common, const CropOptions& opt, std::ostream& err) {
  if (opt.output_dir.empty()) throw Error("crop needs --output-dir");
  const PhoneInventory inventory = read_inventory(common.inventory);
  const Manifest manifest = read_manifest(common.manifest);
  const std::vector<CorpusItem> corpus =
      load_corpus(manifest, inventory, common.unproblematic_correct, common.jobs);

  std::vector<std::optional<int>> sweep(opt.context_k.begin(), opt.context_k.end());
  if (!opt.no_full) sweep.push_back(std::nullopt);
  for (const std::optional<int>& k : sweep) {
    if (k && *k < 0) throw Error("--context-k values must be non-negative");
    const fs::path dir = fs::path(opt.output_dir) / (k ? "k" + std::to_string(*k) : "full");
    fs::create_directories(dir);
    std::vector<ManifestEntry> entries;
    std::vector<BatchError> errors;
    for (std::size_t u = 0; u < corpus.size(); ++u) {
      const ManifestEntry& e = manifest.entries[u];
      for (int i : targets_of(e)) {
        try {
          const CroppedUtterance c = crop_context(corpus[u].post, corpus[u].utt, i, k);
          std::string pg;
          if (k) {
            const std::string file = "u" + std::to_string(u) + "_p" + std::to_string(i) + ".gopg";
            write_posteriorgram(dir / file, c.post);
            pg = file;
          } else {
            pg = relocate(manifest.posteriorgram_path(e), dir);
          }
          CanonicalUtterance cu = c.utt;
          cu.id = e.utt_id + "@" + std::to_string(i);
          ManifestEntry ce = to_manifest_entry(cu, inventory, pg);
          ce.targets = std::vector<int>{c.target_index};
          ce.frame_rate = e.frame_rate;
          entries.push_back(std::move(ce));
        } catch (const Error& ex) {
          errors.push_back({e.utt_id, ex.what()});
        }
      }
    }
    write_manifest(dir / "manifest.jsonl", entries);
    report_errors(err, errors);
  }
  err << "gopaf: wrote " << sweep.size() << " manifest(s) under " << opt.output_dir << '\n';
  return kExitOk;
}

void add_common(CLI::App* cmd, CommonOptions& common, bool with_output = true) {
  cmd->add_option("--manifest", common.manifest, "Corpus manifest (JSON lines)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--inventory", common.inventory, "Phone inventory file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("-j,--jobs", common.jobs, "Worker threads")->check(CLI::PositiveNumber);
  if (with_output) cmd->add_option("-o,--output", common.output, "Output file (default stdout)");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Goodness-of-pronunciation scoring on CTC posteriorgrams", "gopaf"};
  app.require_subcommand(1);

  CommonOptions common;
  ScoreOptions score_opt;
  EvaluateOptions eval_opt;
  SimulateOptions sim_opt;
  CropOptions crop_opt;
  bool with_occ = false;
  bool per_utterance = false;

  CLI::App* score = app.add_subcommand("score", "Score every canonical phone");
  add_common(score, common);
  score->add_option("--method", score_opt.method,
                    "avg-ea, sa, af-s, af-sd, af-sdi, or af with --variant");
  score->add_option("--variant", score_opt.variant, "s, sd or sdi (with --method af)");
  score->add_flag("--norm", score_opt.norm, "Divide alignment-free scores by the occupancy");
  score->add_flag("--loss-diff", score_opt.loss_diff,
                  "Emit CTC loss(canonical) - CTC loss(variant), the negated score");
  score->add_option("--occupancy", score_opt.occupancy, "forward or forward-backward");
  score->add_flag("--unproblematic-correct", common.unproblematic_correct,
                  "Label utterances with problematic=false as all correct");

  CLI::App* evaluate = app.add_subcommand("evaluate", "AUC or PCC of score files");
  evaluate->add_option("--scores", eval_opt.scores, "Score files")->required();
  evaluate->add_option("--manifest", eval_opt.manifest, "Manifest supplying labels");
  evaluate->add_option("--metric", eval_opt.metric, "auc or pcc");
  evaluate->add_option("--positive-label", eval_opt.positive_label, "Positive class for AUC");
  evaluate->add_option("--orientation", eval_opt.orientation,
                       "negated (low score = positive) or raw");
  evaluate->add_option("--regression", eval_opt.regression, "poly2 or none (PCC)");
  evaluate->add_option("--train-scores", eval_opt.train_scores, "Scores to fit the regression on");
  evaluate->add_option("--train-manifest", eval_opt.train_manifest, "Labels for --train-scores");
  evaluate->add_flag("--round", eval_opt.round, "Round regression output to the label grid");
  evaluate->add_flag("--unproblematic-correct", eval_opt.unproblematic_correct,
                     "Label utterances with problematic=false as all correct");
  evaluate->add_option("--format", eval_opt.format, "json or table");
  evaluate->add_option("-o,--output", eval_opt.output, "Output file (default stdout)");

  CLI::App* features = app.add_subcommand("features", "Alignment-free feature vectors");
  add_common(features, common);
  features->add_flag("--occ", with_occ, "Append the occupancy");
  features->add_flag("--unproblematic-correct", common.unproblematic_correct,
                     "Label utterances with problematic=false as all correct");

  CLI::App* peakiness = app.add_subcommand("peakiness", "Blank coverage and path entropy");
  add_common(peakiness, common);
  peakiness->add_flag("--per-utterance", per_utterance, "Also emit one line per utterance");

  CLI::App* simulate = app.add_subcommand("simulate", "Corrupt each canonical phone in turn");
  add_common(simulate, common);
  simulate->add_option("--strategy", sim_opt.strategy, "cyclic or seeded");
  simulate->add_option("--seed", sim_opt.seed, "Seed for the seeded strategy");

  CLI::App* crop = app.add_subcommand("crop", "Context-length sweep manifests");
  add_common(crop, common, false);
  crop->add_option("--context-k", crop_opt.context_k, "Context phones per side")
      ->delimiter(',');
  crop->add_flag("--no-full", crop_opt.no_full, "Skip the uncropped manifest");
  crop->add_option("--output-dir", crop_opt.output_dir, "Destination directory")->required();
  crop->add_flag("--unproblematic-correct", common.unproblematic_correct,
                 "Label utterances with problematic=false as all correct");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*score) return run_score(common, score_opt, out, err);
    if (*evaluate) return run_evaluate(eval_opt, out);
    if (*features) return run_features(common, with_occ, out, err);
    if (*peakiness) return run_peakiness(common, per_utterance, out, err);
    if (*simulate) return run_simulate(common, sim_opt, out, err);
    if (*crop) return run_crop(common, crop_opt, err);
  } catch (const std::exception& e) {
    err << "gopaf: error: " << e.what() << '\n';
    return kExitFatal;
  }
  return kExitUsage;
}

}  // namespace gopaf
