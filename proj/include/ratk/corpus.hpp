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
// Corpus manifests, seeded train/test splits and a synthetic labelled
// corpus built from the bundled morphology.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ratk/alphabet.hpp"
#include "ratk/document.hpp"
#include "ratk/error.hpp"
#include "ratk/io.hpp"
#include "ratk/stemmer.hpp"

namespace ratk {

struct ManifestEntry {
  std::string name;  // file name without directory and extension
  std::filesystem::path path;
  std::string label;  // empty when the manifest has no label column
};

// Lines are `path[<TAB>label]`; relative paths resolve against the
// manifest's directory.
inline std::vector<ManifestEntry> read_manifest(
    const std::filesystem::path& manifest) {
  std::vector<ManifestEntry> out;
  std::set<std::string> seen;
  const auto base = manifest.parent_path();
  for (const auto& line : io::read_data_lines(manifest)) {
    const auto f = io::split(line, '\t');
    if (f.empty() || f.size() > 2 || f[0].empty()) {
      throw Error(manifest.string() + ": expected path<TAB>label in '" +
                  line + "'");
    }
    ManifestEntry e;
    e.path = std::filesystem::path(std::string(f[0]));
    if (e.path.is_relative()) e.path = base / e.path;
    e.name = e.path.stem().string();
    if (f.size() == 2) e.label = std::string(f[1]);
    if (!seen.insert(e.name).second) {
      throw Error(manifest.string() + ": duplicate document name '" + e.name +
                  "'");
    }
    out.push_back(std::move(e));
  }
  return out;
}

inline std::vector<Document> load_documents(
    const std::vector<ManifestEntry>& manifest) {
  std::vector<Document> docs;
  docs.reserve(manifest.size());
  for (const auto& e : manifest) {
    Document d;
    d.id = e.name;
    d.text = io::read_file(e.path);
    if (!e.label.empty()) d.label = e.label;
    docs.push_back(std::move(d));
  }
  return docs;
}

using Labelled = std::vector<std::pair<std::string, std::string>>;

// `name<TAB>label` lines.
inline Labelled read_labels(const std::filesystem::path& path) {
  Labelled out;
  for (const auto& line : io::read_data_lines(path)) {
    const auto f = io::split(line, '\t');
    if (f.size() < 2 || f[0].empty() || f[1].empty()) {
      throw Error(path.string() + ": expected name<TAB>label in '" + line +
                  "'");
    }
    out.emplace_back(std::string(f[0]), std::string(f[1]));
  }
  return out;
}

inline std::string format_labels(const Labelled& l) {
  std::string out;
  for (const auto& [name, label] : l) out += name + "\t" + label + "\n";
  return out;
}

inline std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(rng() % n);
}

template <class T>
void seeded_shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[uniform_index(rng, i)]);
  }
}

struct Split {
  Labelled train;
  Labelled test;
};

// Per class (in name order) the documents are shuffled and the first
// round(ratio * n) go to training. Each class with two or more documents
// keeps at least one on each side. Output preserves input order.
inline Split stratified_split(const Labelled& docs, double ratio,
                              std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw Error("split: ratio must lie strictly between 0 and 1");
  }
  std::map<std::string, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    by_class[docs[i].second].push_back(i);
  }
  std::mt19937_64 rng(seed);
  std::vector<bool> is_train(docs.size(), false);
  for (auto& [label, idx] : by_class) {
    seeded_shuffle(idx, rng);
    auto k = static_cast<std::size_t>(
        std::llround(ratio * static_cast<double>(idx.size())));
    if (idx.size() >= 2) k = std::clamp<std::size_t>(k, 1, idx.size() - 1);
    for (std::size_t i = 0; i < k && i < idx.size(); ++i) {
      is_train[idx[i]] = true;
    }
  }
  Split s;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    (is_train[i] ? s.train : s.test).push_back(docs[i]);
  }
  return s;
}

inline const std::vector<std::string>& default_class_names() {
  static const std::vector<std::string> names = {
      "culture", "economic", "general", "politics", "social", "sport"};
  return names;
}

struct SyntheticOptions {
  std::size_t classes = 6;
  std::size_t docs_per_class = 40;
  std::size_t roots_per_class = 8;
  std::size_t min_words = 15;
  std::size_t max_words = 30;
  double affix_rate = 0.5;     // chance of a prefix, and separately a suffix
  double stopword_rate = 0.1;  // chance of a stopword before each word
  std::uint64_t seed = 1;
};

struct SyntheticDocument {
  Document doc;
  std::vector<LabelString> roots;  // generating root of every content word
};

struct SyntheticCorpus {
  std::vector<std::string> classes;
  std::map<std::string, std::vector<LabelString>> class_roots;
  std::vector<SyntheticDocument> docs;
};

// Content words are prefix + pattern(root) + suffix with triliteral
// patterns only; the classes draw from disjoint root sets.
inline SyntheticCorpus synthetic_corpus(const Stemmer& stemmer,
                                        const std::vector<LabelString>& roots,
                                        const std::vector<LabelString>& stops,
                                        const SyntheticOptions& opt) {
  if (opt.classes == 0 || opt.docs_per_class == 0 ||
      opt.roots_per_class == 0 || opt.min_words == 0 ||
      opt.min_words > opt.max_words) {
    throw Error("synthetic corpus: bad options");
  }
  std::vector<LabelString> pool;
  for (const auto& r : roots) {
    if (r.size() == 3) pool.push_back(r);
  }
  if (pool.size() < opt.classes * opt.roots_per_class) {
    throw Error("synthetic corpus: not enough roots for disjoint classes");
  }
  std::vector<const Pattern*> patterns[2];
  for (const auto& p : stemmer.patterns) {
    if (p.arity == 3) {
      patterns[p.category == Category::kNoun ? 0 : 1].push_back(&p);
    }
  }
  if (patterns[0].empty() || patterns[1].empty()) {
    throw Error("synthetic corpus: need triliteral noun and verb patterns");
  }

  std::mt19937_64 rng(opt.seed);
  auto chance = [&](double p) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p;
  };
  seeded_shuffle(pool, rng);

  SyntheticCorpus c;
  for (std::size_t k = 0; k < opt.classes; ++k) {
    c.classes.push_back(k < default_class_names().size()
                            ? default_class_names()[k]
                            : "class" + std::to_string(k));
  }
  for (std::size_t k = 0; k < opt.classes; ++k) {
    auto& v = c.class_roots[c.classes[k]];
    v.assign(pool.begin() + static_cast<std::ptrdiff_t>(k * opt.roots_per_class),
             pool.begin() +
                 static_cast<std::ptrdiff_t>((k + 1) * opt.roots_per_class));
  }
  const auto& alphabet = stemmer.alphabet;
  for (std::size_t k = 0; k < opt.classes; ++k) {
    const auto& label = c.classes[k];
    const auto& vocab = c.class_roots[label];
    for (std::size_t d = 0; d < opt.docs_per_class; ++d) {
      SyntheticDocument sd;
      sd.doc.id = label + "_" + std::to_string(d);
      sd.doc.label = label;
      const std::size_t len =
          opt.min_words + uniform_index(rng, opt.max_words - opt.min_words + 1);
      for (std::size_t w = 0; w < len; ++w) {
        if (!stops.empty() && chance(opt.stopword_rate)) {
          sd.doc.text +=
              alphabet.to_arabic(stops[uniform_index(rng, stops.size())]) +
              " ";
        }
        const auto& root = vocab[uniform_index(rng, vocab.size())];
        const int cat = static_cast<int>(uniform_index(rng, 2));
        const auto& pats = patterns[cat];
        LabelString word;
        const auto& prefixes = stemmer.affixes.prefixes(
            cat == 0 ? Category::kNoun : Category::kVerb);
        if (!prefixes.empty() && chance(opt.affix_rate)) {
          const auto& p = prefixes[uniform_index(rng, prefixes.size())];
          word.insert(word.end(), p.begin(), p.end());
        }
        const auto body = pats[uniform_index(rng, pats.size())]->instantiate(root);
        word.insert(word.end(), body.begin(), body.end());
        const auto& suffixes = stemmer.affixes.suffixes;
        if (!suffixes.empty() && chance(opt.affix_rate)) {
          const auto& s = suffixes[uniform_index(rng, suffixes.size())];
          word.insert(word.end(), s.begin(), s.end());
        }
        sd.doc.text += alphabet.to_arabic(word);
        sd.doc.text += (w + 1 == len) ? ".\n" : (w % 7 == 6 ? "، " : " ");
        sd.roots.push_back(root);
      }
      c.docs.push_back(std::move(sd));
    }
  }
  return c;
}

// Writes one UTF-8 text file per document plus manifest.tsv into dir and
// returns the manifest path.
inline std::filesystem::path write_corpus(const SyntheticCorpus& c,
                                          const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::string manifest;
  for (const auto& sd : c.docs) {
    const std::string file = sd.doc.id + ".txt";
    io::write_file_atomic(dir / file, sd.doc.text);
    manifest += file + "\t" + sd.doc.label.value_or("") + "\n";
  }
  io::write_file_atomic(dir / "manifest.tsv", manifest);
  return dir / "manifest.tsv";
}

}  // namespace ratk
