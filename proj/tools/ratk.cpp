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
// Command-line front end. Every subcommand is a thin wrapper around the
// library. Exit codes: 0 success, 1 usage error, 2 data error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ratk/ratk.hpp"

namespace fs = std::filesystem;
using namespace ratk;

namespace {

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-") {
    std::cout << content;
  } else {
    io::write_file_atomic(out_path, content);
  }
}

std::string render(const ArabicAlphabet& a, const LabelString& s,
                   bool translit) {
  return translit ? a.to_translit(s) : a.to_arabic(s);
}

int cmd_stem(const std::vector<std::string>& words, const std::string& file,
             const fs::path& data, bool smoothing) {
  const Stemmer st = Stemmer::build(StemmerConfig::from_dir(data));
  const RootScorer scorer =
      train_scorer(load_roots(data / "roots.txt"), st.alphabet, smoothing);
  std::vector<std::string> input = words;
  if (!file.empty()) {
    for (auto& line : io::read_data_lines(file)) {
      std::istringstream ls(line);
      for (std::string w; ls >> w;) input.push_back(w);
    }
  }
  for (const auto& w : input) {
    const bool translit = utf8::is_ascii(w);
    const auto r = stem(st.fst, scorer, st.alphabet.encode(w));
    std::string cands;
    for (const auto& c : r.candidates) {
      if (!cands.empty()) cands += ',';
      cands += render(st.alphabet, c, translit);
    }
    std::cout << w << '\t' << render(st.alphabet, r.stem, translit) << '\t'
              << cands << '\t' << detail::format_17g(r.score) << '\n';
  }
  return 0;
}

RealFst read_fst(const std::string& path) {
  return from_text<RealSemiring>(io::read_file(path));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rational-kernel Arabic text categorization toolkit"};
  app.require_subcommand(1);
  std::string data_dir = io::data_dir().string();
  app.add_option("--data-dir", data_dir,
                 "Directory with alphabet, patterns, affixes, roots and "
                 "stopwords (env RATK_DATA_DIR)");

  std::string out;
  bool smoothing = false;

  auto* stem_cmd = app.add_subcommand("stem", "Stem words (Arabic script or "
                                              "transliteration)");
  std::vector<std::string> words;
  std::string word_file;
  stem_cmd->add_option("words", words, "Words to stem");
  stem_cmd->add_option("--file,-f", word_file, "File of words")
      ->check(CLI::ExistingFile);
  stem_cmd->add_flag("--smoothing", smoothing, "Add-one smoothing in scoring");

  auto* compile_cmd =
      app.add_subcommand("compile-stemmer", "Write the stemmer transducer");
  compile_cmd->add_option("-o,--output", out, "Output file (default stdout)");

  std::vector<std::string> fst_inputs;
  auto* compose_cmd = app.add_subcommand("compose", "Compose two transducers");
  compose_cmd->add_option("inputs", fst_inputs, "Two AT&T text files")
      ->required()
      ->expected(2);
  compose_cmd->add_option("-o,--output", out, "Output file (default stdout)");
  auto* concat_cmd = app.add_subcommand("concat", "Concatenate transducers");
  concat_cmd->add_option("inputs", fst_inputs, "Two AT&T text files")
      ->required()
      ->expected(2);
  concat_cmd->add_option("-o,--output", out, "Output file (default stdout)");
  auto* union_cmd = app.add_subcommand("union", "Union of transducers");
  union_cmd->add_option("inputs", fst_inputs, "Two AT&T text files")
      ->required()
      ->expected(2);
  union_cmd->add_option("-o,--output", out, "Output file (default stdout)");

  bool no_stem = false, no_boundaries = false;
  std::string text_file;
  auto* doc_cmd = app.add_subcommand("doc2fst", "Document to linear machine");
  doc_cmd->add_option("input", text_file, "UTF-8 text file")
      ->required()
      ->check(CLI::ExistingFile);
  doc_cmd->add_option("-o,--output", out, "Output file (default stdout)");
  doc_cmd->add_flag("--no-stem", no_stem, "Keep surface forms");
  doc_cmd->add_flag("--no-boundaries", no_boundaries,
                    "Do not separate words with the boundary symbol");

  std::string manifest, archive;
  auto* far_cmd =
      app.add_subcommand("far", "Build a document archive from a manifest");
  far_cmd->add_option("manifest", manifest, "Lines of path<TAB>label")
      ->required();
  far_cmd->add_option("-o,--output", out, "Archive file")->required();
  far_cmd->add_flag("--no-stem", no_stem, "Keep surface forms");
  far_cmd->add_flag("--no-boundaries", no_boundaries,
                    "Do not separate words with the boundary symbol");

  auto* far_print_cmd =
      app.add_subcommand("far-print", "Print the entries of an archive");
  far_print_cmd->add_option("archive", archive, "Archive file")->required();

  std::size_t order = 3, sigma = 29;
  bool normalize = true;
  auto* kernel_cmd =
      app.add_subcommand("kernel", "n-gram kernel matrix of an archive");
  kernel_cmd->add_option("archive", archive, "Archive file")->required();
  kernel_cmd->add_option("-o,--output", out, "Kernel file (default stdout)");
  kernel_cmd->add_option("--order", order, "n-gram order")
      ->check(CLI::PositiveNumber);
  kernel_cmd->add_option("--sigma", sigma, "Alphabet size");
  kernel_cmd->add_flag("--normalize,!--no-normalize", normalize,
                       "Cosine-normalize the matrix (default on)");

  double ratio = 0.8;
  std::uint64_t seed = 42;
  std::string out_dir;
  auto* split_cmd =
      app.add_subcommand("split", "Stratified seeded train/test split");
  split_cmd->add_option("manifest", manifest, "Lines of path<TAB>label")
      ->required();
  split_cmd->add_option("-o,--output-dir", out_dir,
                        "Directory for train.tsv and test.tsv")
      ->required();
  split_cmd->add_option("--ratio", ratio, "Training fraction");
  split_cmd->add_option("--seed", seed, "Shuffle seed");

  std::string kernel_file, labels_file, model_file, pred_file;
  double C = 1.0, tol = 1e-3;
  auto* train_cmd = app.add_subcommand("train", "One-vs-rest SVM training");
  train_cmd->add_option("--kernel,-k", kernel_file, "Kernel file")
      ->required();
  train_cmd->add_option("--labels,-l", labels_file,
                        "Training documents, name<TAB>label")
      ->required();
  train_cmd->add_option("-o,--output", out, "Model file")->required();
  train_cmd->add_option("-C", C, "Regularization")
      ->check(CLI::PositiveNumber);
  train_cmd->add_option("--tol", tol, "Stopping tolerance")
      ->check(CLI::PositiveNumber);

  auto* predict_cmd = app.add_subcommand("predict", "Classify documents");
  predict_cmd->add_option("--model,-m", model_file, "Model file")->required();
  predict_cmd->add_option("--kernel,-k", kernel_file, "Kernel file")
      ->required();
  predict_cmd->add_option("--docs,-d", labels_file,
                          "Documents to classify, name[<TAB>label]")
      ->required();
  predict_cmd->add_option("-o,--output", out,
                          "Predictions file (default stdout)");

  auto* eval_cmd = app.add_subcommand("eval", "Accuracy, precision, recall, F1");
  eval_cmd->add_option("--predictions,-p", pred_file, "Predictions file")
      ->required();
  eval_cmd->add_option("--gold,-g", labels_file, "Gold name<TAB>label")
      ->required();
  eval_cmd->add_option("-o,--output", out, "Table file (default stdout)");

  auto* demo_cmd = app.add_subcommand(
      "demo", "Generate a synthetic corpus and run the whole pipeline");
  demo_cmd->add_option("-o,--output-dir", out_dir, "Output directory")
      ->required();
  demo_cmd->add_option("--seed", seed, "Corpus and split seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  const fs::path data(data_dir);
  try {
    if (*stem_cmd) return cmd_stem(words, word_file, data, smoothing);
    if (*compile_cmd) {
      const Stemmer st = Stemmer::build(StemmerConfig::from_dir(data));
      emit(out, to_text(st.fst));
      return 0;
    }
    if (*compose_cmd) {
      emit(out, to_text(compose(read_fst(fst_inputs[0]),
                                read_fst(fst_inputs[1]))));
      return 0;
    }
    if (*concat_cmd) {
      emit(out, to_text(concat(read_fst(fst_inputs[0]),
                               read_fst(fst_inputs[1]))));
      return 0;
    }
    if (*union_cmd) {
      emit(out, to_text(fst_union(read_fst(fst_inputs[0]),
                                  read_fst(fst_inputs[1]))));
      return 0;
    }
    if (*doc_cmd) {
      const Toolkit tk = Toolkit::load(data, smoothing);
      Document d{fs::path(text_file).stem().string(),
                 io::read_file(text_file), std::nullopt};
      const auto tokens = ratk::normalize(d, tk.stopwords, tk.stemmer.alphabet);
      const RealFst t =
          no_stem ? linear_document(tokens, tk.stemmer.alphabet,
                                    !no_boundaries)
                  : doc_to_fst(tokens, tk.stemmer.fst, tk.scorer,
                               tk.stemmer.alphabet, !no_boundaries);
      emit(out, to_text(t));
      return 0;
    }
    if (*far_cmd) {
      const Toolkit tk = Toolkit::load(data, smoothing);
      const auto docs = load_documents(read_manifest(manifest));
      build_archive(docs, tk, {.stem = !no_stem, .boundaries = !no_boundaries})
          .write(out);
      return 0;
    }
    if (*far_print_cmd) {
      for (const auto& e : FstArchive::read(archive).entries()) {
        std::cout << "# " << e.name << '\n' << e.text;
      }
      return 0;
    }
    if (*kernel_cmd) {
      const auto ar = FstArchive::read(archive);
      const auto k = kernel_matrix(
          ar, {.order = order,
               .sigma = sigma,
               .normalize = normalize,
               .boundary = static_cast<Label>(ArabicAlphabet::kLetterCount + 1)});
      emit(out, serialize_kernel(k));
      return 0;
    }
    if (*split_cmd) {
      Labelled docs;
      for (const auto& e : read_manifest(manifest)) {
        if (e.label.empty()) {
          throw Error("split: document '" + e.name + "' has no label");
        }
        docs.emplace_back(e.name, e.label);
      }
      const auto s = stratified_split(docs, ratio, seed);
      fs::create_directories(out_dir);
      io::write_file_atomic(fs::path(out_dir) / "train.tsv",
                            format_labels(s.train));
      io::write_file_atomic(fs::path(out_dir) / "test.tsv",
                            format_labels(s.test));
      return 0;
    }
    if (*train_cmd) {
      const auto k = deserialize_kernel(io::read_file(kernel_file));
      const auto m = ovr_train(k, read_labels(labels_file), C, tol);
      io::write_file_atomic(out, serialize_model(m));
      return 0;
    }
    if (*predict_cmd) {
      const auto m = deserialize_model(io::read_file(model_file));
      const auto k = deserialize_kernel(io::read_file(kernel_file));
      check_compatible(m, k);
      std::vector<std::pair<std::string, Prediction>> preds;
      for (const auto& line : io::read_data_lines(labels_file)) {
        const std::string name(io::split(line, '\t')[0]);
        preds.emplace_back(name, predict(m, k, name));
      }
      emit(out, format_predictions(preds));
      return 0;
    }
    if (*eval_cmd) {
      const auto r = evaluate_files(read_predictions(pred_file),
                                    read_labels(labels_file));
      emit(out, format_metrics(r));
      return 0;
    }
    if (*demo_cmd) {
      const auto r = run_demo(data, out_dir, seed);
      std::cout << format_metrics(r.metrics);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
