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
// Pattern-based root extraction with transducers.
//
// A pattern such as m123T becomes a linear machine in which each root slot
// is a bundle of identity arcs (x:x for every letter) and each fixed letter
// is deleted (letter:eps). Affix inventories become unions of deleting
// chains plus the empty affix. The stemmer is
//
//   (noun prefixes . noun patterns . suffixes) + (verb prefixes . verb
//   patterns . suffixes)
//
// so composing a word with it and reading the output tape yields every
// root the word can be decomposed into.

#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ratk/alphabet.hpp"
#include "ratk/error.hpp"
#include "ratk/io.hpp"
#include "ratk/operations.hpp"
#include "ratk/paths.hpp"
#include "ratk/root_scorer.hpp"
#include "ratk/utf8.hpp"
#include "ratk/wfst.hpp"

namespace ratk {

enum class Category { kNoun, kVerb };

inline std::string_view category_name(Category c) {
  return c == Category::kNoun ? "noun" : "verb";
}

struct Pattern {
  struct Item {
    int slot = 0;              // 1..4 for a root slot, 0 for a fixed letter
    Label letter = kEpsilon;   // fixed letter when slot == 0
    friend bool operator==(const Item&, const Item&) = default;
  };

  Category category = Category::kNoun;
  std::vector<Item> items;
  int arity = 0;
  std::string text;

  // Digits 1-4 are root slots, everything else a fixed letter. Slots must
  // appear in order, each exactly once, and the arity must be 3 or 4.
  static Pattern parse(Category category, std::string_view text,
                       const ArabicAlphabet& alphabet) {
    Pattern p;
    p.category = category;
    p.text = std::string(text);
    int next_slot = 1;
    for (char32_t cp : utf8::decode(text)) {
      if (cp >= U'1' && cp <= U'9') {
        const int slot = static_cast<int>(cp - U'0');
        if (slot != next_slot || slot > 4) {
          throw Error("malformed pattern '" + p.text +
                      "': root slots must appear once each, in order 1..4");
        }
        p.items.push_back({slot, kEpsilon});
        ++next_slot;
        continue;
      }
      std::string ch;
      utf8::append(ch, cp);
      LabelString enc;
      try {
        enc = alphabet.encode(ch);
      } catch (const Error& e) {
        throw Error("malformed pattern '" + p.text + "': " + e.what());
      }
      for (Label l : enc) p.items.push_back({0, l});
    }
    p.arity = next_slot - 1;
    if (p.arity != 3 && p.arity != 4) {
      throw Error("malformed pattern '" + p.text +
                  "': expected 3 or 4 root slots");
    }
    return p;
  }

  // Surface form of this pattern instantiated with root.
  LabelString instantiate(std::span<const Label> root) const {
    if (root.size() != static_cast<std::size_t>(arity)) {
      throw Error("pattern '" + text + "' needs a root of length " +
                  std::to_string(arity));
    }
    LabelString out;
    for (const auto& it : items) {
      out.push_back(it.slot ? root[it.slot - 1] : it.letter);
    }
    return out;
  }
};

inline std::vector<Pattern> load_patterns(const std::filesystem::path& path,
                                          const ArabicAlphabet& alphabet) {
  std::vector<Pattern> out;
  for (const auto& line : io::read_data_lines(path)) {
    auto f = io::split(line, '\t');
    if (f.size() != 2) {
      throw Error(path.string() + ": expected category<TAB>template in '" +
                  line + "'");
    }
    Category c;
    if (f[0] == "noun") {
      c = Category::kNoun;
    } else if (f[0] == "verb") {
      c = Category::kVerb;
    } else {
      throw Error(path.string() + ": unknown category '" + std::string(f[0]) +
                  "'");
    }
    out.push_back(Pattern::parse(c, f[1], alphabet));
  }
  return out;
}

struct AffixInventory {
  std::vector<LabelString> verb_prefixes;
  std::vector<LabelString> noun_prefixes;
  std::vector<LabelString> suffixes;

  // Entries are normalized on load; duplicates after normalization (T and
  // t both become t) are kept once, in first-seen order.
  static AffixInventory load(const std::filesystem::path& path,
                             const ArabicAlphabet& alphabet) {
    AffixInventory inv;
    auto add = [](std::vector<LabelString>& v, LabelString s) {
      if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
    };
    for (const auto& line : io::read_data_lines(path)) {
      auto f = io::split(line, '\t');
      if (f.size() != 2) {
        throw Error(path.string() + ": expected kind<TAB>letters in '" + line +
                    "'");
      }
      LabelString letters = alphabet.encode(f[1]);
      if (letters.empty()) {
        throw Error(path.string() + ": empty affix in '" + line + "'");
      }
      if (f[0] == "verb_prefix") {
        add(inv.verb_prefixes, std::move(letters));
      } else if (f[0] == "noun_prefix") {
        add(inv.noun_prefixes, std::move(letters));
      } else if (f[0] == "suffix") {
        add(inv.suffixes, std::move(letters));
      } else {
        throw Error(path.string() + ": unknown affix kind '" +
                    std::string(f[0]) + "'");
      }
    }
    return inv;
  }

  const std::vector<LabelString>& prefixes(Category c) const {
    return c == Category::kNoun ? noun_prefixes : verb_prefixes;
  }
};

struct StemmerConfig {
  std::filesystem::path patterns;
  std::filesystem::path affixes;
  std::filesystem::path alphabet;
  std::filesystem::path normalization;

  static StemmerConfig from_dir(const std::filesystem::path& dir) {
    return {dir / "patterns.tsv", dir / "affixes.tsv", dir / "alphabet.tsv",
            dir / "normalization.tsv"};
  }
  static StemmerConfig defaults() { return from_dir(io::data_dir()); }
};

inline RealFst compile_pattern(const Pattern& p,
                               const ArabicAlphabet& alphabet) {
  const LabelSet letters = alphabet.letters();
  RealFst t(letters, letters);
  t.add_states(p.items.size() + 1);
  for (std::size_t i = 0; i < p.items.size(); ++i) {
    const auto src = static_cast<StateId>(i);
    const auto dst = static_cast<StateId>(i + 1);
    const auto& item = p.items[i];
    if (item.slot) {
      for (Label x : letters) t.add_arc(src, x, x, 1.0, dst);
    } else {
      t.add_arc(src, item.letter, kEpsilon, 1.0, dst);
    }
  }
  t.set_initial(0);
  t.set_final(static_cast<StateId>(p.items.size()));
  return t;
}

// Union of deleting chains (affix -> eps), plus the empty affix.
inline RealFst compile_affixes(std::span<const LabelString> affixes,
                               const ArabicAlphabet& alphabet) {
  const LabelSet letters = alphabet.letters();
  std::vector<RealFst> parts;
  RealFst empty(letters, letters);
  empty.add_state();
  empty.set_initial(0);
  empty.set_final(0);
  parts.push_back(std::move(empty));
  for (const auto& affix : affixes) {
    RealFst chain(letters, letters);
    chain.add_states(affix.size() + 1);
    for (std::size_t i = 0; i < affix.size(); ++i) {
      chain.add_arc(static_cast<StateId>(i), affix[i], kEpsilon, 1.0,
                    static_cast<StateId>(i + 1));
    }
    chain.set_initial(0);
    chain.set_final(static_cast<StateId>(affix.size()));
    parts.push_back(std::move(chain));
  }
  return fst_union<RealSemiring>(parts, letters, letters);
}

inline RealFst compile_patterns(std::span<const Pattern> patterns,
                                Category category,
                                const ArabicAlphabet& alphabet) {
  std::vector<RealFst> parts;
  for (const auto& p : patterns) {
    if (p.category == category) parts.push_back(compile_pattern(p, alphabet));
  }
  const LabelSet letters = alphabet.letters();
  return fst_union<RealSemiring>(parts, letters, letters);
}

inline RealFst build_stemmer(std::span<const Pattern> patterns,
                             const AffixInventory& affixes,
                             const ArabicAlphabet& alphabet) {
  if (patterns.empty()) throw Error("build_stemmer: no patterns");
  const RealFst suffixes = compile_affixes(affixes.suffixes, alphabet);
  auto branch = [&](Category c) {
    return concat(concat(compile_affixes(affixes.prefixes(c), alphabet),
                         compile_patterns(patterns, c, alphabet)),
                  suffixes);
  };
  return trim(fst_union(branch(Category::kNoun), branch(Category::kVerb)));
}

// Everything needed to stem words: data, inventories and the machine.
struct Stemmer {
  ArabicAlphabet alphabet;
  std::vector<Pattern> patterns;
  AffixInventory affixes;
  RealFst fst;

  static Stemmer build(const StemmerConfig& cfg) {
    Stemmer s;
    s.alphabet = ArabicAlphabet::load(cfg.alphabet, cfg.normalization);
    s.patterns = load_patterns(cfg.patterns, s.alphabet);
    if (s.patterns.empty()) {
      throw Error("build_stemmer: pattern file " + cfg.patterns.string() +
                  " has no patterns");
    }
    s.affixes = AffixInventory::load(cfg.affixes, s.alphabet);
    s.fst = build_stemmer(s.patterns, s.affixes, s.alphabet);
    return s;
  }
};

// Output-projection language of linear(word) o stemmer, sorted, each
// candidate once.
inline std::vector<LabelString> candidate_stems(const RealFst& stemmer,
                                                std::span<const Label> word) {
  const RealFst w = linear_from_string<RealSemiring>(
      word, stemmer.input_alphabet());
  const RealFst roots = project(compose(w, stemmer), Side::kOutput);
  auto order = require_topological_order(roots, "candidate_stems");
  std::set<LabelString> found;
  for (const auto& p : enumerate_paths(roots, roots.num_states())) {
    found.insert(p.output);
  }
  return {found.begin(), found.end()};
}

struct StemResult {
  LabelString stem;
  bool stemmed = false;  // false: no candidate, stem is the word itself
  double score = 0.0;
  std::vector<LabelString> candidates;
};

// Best-scoring candidate; ties (including all-zero scores) go to the
// lexicographically smallest candidate.
inline StemResult stem(const RealFst& stemmer, const RootScorer& scorer,
                       std::span<const Label> word) {
  StemResult r;
  r.candidates = candidate_stems(stemmer, word);
  if (r.candidates.empty()) {
    r.stem.assign(word.begin(), word.end());
    return r;
  }
  r.stemmed = true;
  bool first = true;
  for (const auto& c : r.candidates) {  // ascending, so '>' keeps the smallest
    const double s = scorer.score(c);
    if (first || s > r.score) {
      r.score = s;
      r.stem = c;
      first = false;
    }
  }
  return r;
}

// Tropical acceptor whose accepting paths are the candidates weighted by
// -log(score). Its best path is the stem chosen by stem() whenever some
// candidate has a positive score.
inline TropicalFst scored_candidates(std::span<const LabelString> candidates,
                                     const RootScorer& scorer,
                                     const LabelSet& alphabet) {
  TropicalFst t(alphabet, alphabet);
  const StateId start = t.add_state();
  t.set_initial(start);
  for (const auto& c : candidates) {
    StateId prev = start;
    const double w = -std::log(scorer.score(c));
    for (std::size_t i = 0; i < c.size(); ++i) {
      StateId next = t.add_state();
      t.add_arc(prev, c[i], c[i], i == 0 ? w : 0.0, next);
      prev = next;
    }
    t.set_final(prev);
  }
  return t;
}

}  // namespace ratk
