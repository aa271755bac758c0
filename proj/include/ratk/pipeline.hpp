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
//
// Corpus -> archive -> kernel -> split -> one-vs-rest SVM -> metrics.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ratk/archive.hpp"
#include "ratk/corpus.hpp"
#include "ratk/document.hpp"
#include "ratk/kernel.hpp"
#include "ratk/metrics.hpp"
#include "ratk/parallel.hpp"
#include "ratk/root_scorer.hpp"
#include "ratk/stemmer.hpp"
#include "ratk/svm.hpp"

namespace ratk {

struct Toolkit {
  Stemmer stemmer;
  RootScorer scorer;
  Stopwords stopwords;

  static Toolkit load(const std::filesystem::path& dir,
                      bool smoothing = false) {
    Toolkit t;
    t.stemmer = Stemmer::build(StemmerConfig::from_dir(dir));
    t.scorer = train_scorer(load_roots(dir / "roots.txt"), t.stemmer.alphabet,
                            smoothing);
    t.stopwords = load_stopwords(dir / "stopwords.txt", t.stemmer.alphabet);
    return t;
  }
};

struct ArchiveOptions {
  bool stem = true;
  bool boundaries = true;
};

// Document machines for every document, in order. Distinct tokens are
// stemmed once each, in parallel.
inline FstArchive build_archive(const std::vector<Document>& docs,
                                const Toolkit& tk,
                                const ArchiveOptions& opt = {}) {
  const auto& alphabet = tk.stemmer.alphabet;
  std::vector<std::vector<LabelString>> tokens(docs.size());
  std::map<LabelString, LabelString> stems;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    tokens[i] = normalize(docs[i], tk.stopwords, alphabet);
    for (const auto& t : tokens[i]) stems.emplace(t, LabelString{});
  }
  if (opt.stem) {
    std::vector<std::map<LabelString, LabelString>::iterator> slots;
    for (auto it = stems.begin(); it != stems.end(); ++it) slots.push_back(it);
    parallel_for(slots.size(), [&](std::size_t i) {
      slots[i]->second = stem(tk.stemmer.fst, tk.scorer, slots[i]->first).stem;
    });
  }
  FstArchive ar;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    std::vector<LabelString> words;
    words.reserve(tokens[i].size());
    for (const auto& t : tokens[i]) words.push_back(opt.stem ? stems.at(t) : t);
    ar.add(docs[i].id, linear_document(words, alphabet, opt.boundaries));
  }
  return ar;
}

inline std::string format_predictions(
    const std::vector<std::pair<std::string, Prediction>>& preds) {
  std::string out;
  for (const auto& [name, p] : preds) {
    out += name + "\t" + p.label;
    for (double v : p.decision_values) out += "\t" + detail::format_17g(v);
    out += "\n";
  }
  return out;
}

// (document, predicted class) pairs from a predictions file.
inline Labelled read_predictions(const std::filesystem::path& path) {
  return read_labels(path);
}

// Predictions aligned with gold by document name.
inline MetricsReport evaluate_files(const Labelled& predicted,
                                    const Labelled& gold) {
  std::map<std::string, std::string> by_name;
  for (const auto& [name, label] : predicted) by_name[name] = label;
  std::vector<std::string> p, g;
  for (const auto& [name, label] : gold) {
    const auto it = by_name.find(name);
    if (it == by_name.end()) {
      throw Error("evaluate: no prediction for document '" + name + "'");
    }
    p.push_back(it->second);
    g.push_back(label);
  }
  if (by_name.size() != gold.size()) {
    throw Error("evaluate: predictions and gold labels cover different "
                "documents");
  }
  return evaluate(p, g);
}

struct PipelineConfig {
  std::filesystem::path manifest;
  std::filesystem::path data_dir;
  std::filesystem::path out_dir;
  std::size_t order = 3;
  std::size_t sigma = 29;
  bool normalize = true;
  bool stem = true;
  double C = 1.0;
  double tol = 1e-3;
  double ratio = 0.8;
  std::uint64_t seed = 42;
};

struct PipelineResult {
  KernelMatrix kernel;
  Split split;
  OvrModel model;
  std::vector<std::pair<std::string, Prediction>> predictions;
  MetricsReport metrics;
};

// Writes docs.far, kernel.txt, train.tsv, test.tsv, model.txt,
// predictions.tsv and metrics.txt into cfg.out_dir.
inline PipelineResult run_pipeline(const PipelineConfig& cfg,
                                   const Toolkit& tk) {
  if (cfg.order == 0) throw Error("pipeline: order must be at least 1");
  const auto manifest = read_manifest(cfg.manifest);
  Labelled labelled;
  for (const auto& e : manifest) {
    if (e.label.empty()) {
      throw Error("pipeline: document '" + e.name + "' has no label");
    }
    labelled.emplace_back(e.name, e.label);
  }
  const auto docs = load_documents(manifest);
  const auto ar = build_archive(docs, tk, {.stem = cfg.stem});

  PipelineResult r;
  r.kernel = kernel_matrix(ar, {.order = cfg.order,
                                .sigma = cfg.sigma,
                                .normalize = cfg.normalize,
                                .boundary = tk.stemmer.alphabet.boundary()});
  r.split = stratified_split(labelled, cfg.ratio, cfg.seed);
  r.model = ovr_train(r.kernel, r.split.train, cfg.C, cfg.tol);
  std::vector<std::string> pred, gold;
  for (const auto& [name, label] : r.split.test) {
    auto p = predict(r.model, r.kernel, name);
    pred.push_back(p.label);
    gold.push_back(label);
    r.predictions.emplace_back(name, std::move(p));
  }
  r.metrics = evaluate(pred, gold);

  const auto& out = cfg.out_dir;
  std::filesystem::create_directories(out);
  ar.write(out / "docs.far");
  io::write_file_atomic(out / "kernel.txt", serialize_kernel(r.kernel));
  io::write_file_atomic(out / "train.tsv", format_labels(r.split.train));
  io::write_file_atomic(out / "test.tsv", format_labels(r.split.test));
  io::write_file_atomic(out / "model.txt", serialize_model(r.model));
  io::write_file_atomic(out / "predictions.tsv",
                        format_predictions(r.predictions));
  io::write_file_atomic(out / "metrics.txt", format_metrics(r.metrics));
  return r;
}

// Generates the synthetic six-class corpus under out_dir/corpus and runs
// the whole pipeline on it.
inline PipelineResult run_demo(const std::filesystem::path& data_dir,
                               const std::filesystem::path& out_dir,
                               std::uint64_t seed = 42,
                               const SyntheticOptions& corpus = {}) {
  const Toolkit tk = Toolkit::load(data_dir);
  std::vector<LabelString> roots;
  for (const auto& r : load_roots(data_dir / "roots.txt")) {
    roots.push_back(tk.stemmer.alphabet.encode(r));
  }
  const std::vector<LabelString> stops(tk.stopwords.begin(),
                                       tk.stopwords.end());
  SyntheticOptions opt = corpus;
  opt.seed = seed;
  const auto c = synthetic_corpus(tk.stemmer, roots, stops, opt);
  PipelineConfig cfg;
  cfg.manifest = write_corpus(c, out_dir / "corpus");
  cfg.data_dir = data_dir;
  cfg.out_dir = out_dir;
  cfg.seed = seed;
  return run_pipeline(cfg, tk);
}

}  // namespace ratk
