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
// Random machine generators and brute-force oracles shared by the unit
// tests and the acceptance binary. Nothing here calls the operations under
// test except enumerate_paths.

#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ratk/ratk.hpp"

namespace ratk::testing {

using PairMap = std::map<std::pair<LabelString, LabelString>, double>;

inline std::size_t rnd(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(rng() % n);
}

inline LabelSet label_range(Label k) {
  LabelSet s;
  for (Label l = 1; l <= k; ++l) s.insert(l);
  return s;
}

struct RandomFstOptions {
  std::size_t max_states = 6;
  std::size_t max_arcs = 10;
  Label alphabet = 3;
  double epsilon_rate = 0.2;
};

// Acyclic: every arc goes from a lower to a higher state id. Weights are
// small integers so Real sums and products stay exact.
template <Semiring S>
Wfst<S> random_acyclic(std::mt19937_64& rng, const RandomFstOptions& o = {}) {
  const LabelSet sigma = label_range(o.alphabet);
  Wfst<S> t(sigma, sigma);
  const std::size_t n = 1 + rnd(rng, o.max_states);
  t.add_states(n);
  auto weight = [&] {
    if constexpr (std::is_same_v<S, TropicalSemiring>) {
      return static_cast<double>(rnd(rng, 6));
    } else {
      return static_cast<double>(1 + rnd(rng, 3));
    }
  };
  auto label = [&] {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    if (u < o.epsilon_rate) return kEpsilon;
    return static_cast<Label>(1 + rnd(rng, static_cast<std::size_t>(o.alphabet)));
  };
  if (n > 1) {
    const std::size_t arcs = rnd(rng, o.max_arcs + 1);
    for (std::size_t i = 0; i < arcs; ++i) {
      const auto src = static_cast<StateId>(rnd(rng, n - 1));
      const auto dst = static_cast<StateId>(
          src + 1 + rnd(rng, n - 1 - static_cast<std::size_t>(src)));
      t.add_arc(src, label(), label(), weight(), dst);
    }
  }
  const std::size_t ni = 1 + rnd(rng, 2);
  for (std::size_t i = 0; i < ni; ++i) {
    t.set_initial(static_cast<StateId>(rnd(rng, n)), weight());
  }
  const std::size_t nf = 1 + rnd(rng, 3);
  for (std::size_t i = 0; i < nf; ++i) {
    t.set_final(static_cast<StateId>(rnd(rng, n)), weight());
  }
  return t;
}

// (input, output) -> total weight, from path enumeration.
template <Semiring S>
PairMap pair_weights(const Wfst<S>& t) {
  PairMap m;
  for (const auto& p : enumerate_paths(t, t.num_states())) {
    const auto key = std::make_pair(p.input, p.output);
    const auto w = p.total(t);
    auto it = m.find(key);
    if (it == m.end()) {
      m.emplace(key, w);
    } else {
      it->second = S::plus(it->second, w);
    }
  }
  std::erase_if(m, [](const auto& kv) { return is_zero<S>(kv.second); });
  return m;
}

template <Semiring S>
double lookup(const PairMap& m, const LabelString& x, const LabelString& y) {
  auto it = m.find({x, y});
  return it == m.end() ? S::zero() : it->second;
}

template <Semiring S>
void accumulate(PairMap& m, const LabelString& x, const LabelString& y,
                double w) {
  if (is_zero<S>(w)) return;
  auto [it, fresh] = m.emplace(std::make_pair(x, y), w);
  if (!fresh) it->second = S::plus(it->second, w);
}

template <Semiring S>
PairMap union_oracle(const PairMap& a, const PairMap& b) {
  PairMap m = a;
  for (const auto& [k, w] : b) accumulate<S>(m, k.first, k.second, w);
  return m;
}

inline LabelString cat(const LabelString& a, const LabelString& b) {
  LabelString r = a;
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

// Sum over every split x = x1 x2, y = y1 y2.
template <Semiring S>
PairMap concat_oracle(const PairMap& a, const PairMap& b) {
  PairMap m;
  for (const auto& [ka, wa] : a) {
    for (const auto& [kb, wb] : b) {
      accumulate<S>(m, cat(ka.first, kb.first), cat(ka.second, kb.second),
                    S::times(wa, wb));
    }
  }
  return m;
}

// Sum over intermediate strings z.
template <Semiring S>
PairMap compose_oracle(const PairMap& a, const PairMap& b) {
  PairMap m;
  for (const auto& [ka, wa] : a) {
    for (const auto& [kb, wb] : b) {
      if (ka.second == kb.first) {
        accumulate<S>(m, ka.first, kb.second, S::times(wa, wb));
      }
    }
  }
  return m;
}

inline std::vector<LabelString> all_strings(Label alphabet, std::size_t max_len) {
  std::vector<LabelString> out{{}};
  std::size_t begin = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    const std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i) {
      for (Label l = 1; l <= alphabet; ++l) {
        LabelString s = out[i];
        s.push_back(l);
        out.push_back(std::move(s));
      }
    }
    begin = end;
  }
  return out;
}

// Sliding-window n-gram counts of a plain string; windows touching the
// boundary label are skipped.
inline std::map<LabelString, long long> window_counts(const LabelString& s,
                                                      std::size_t n,
                                                      Label boundary) {
  std::map<LabelString, long long> c;
  for (std::size_t i = 0; i + n <= s.size(); ++i) {
    LabelString g(s.begin() + static_cast<std::ptrdiff_t>(i),
                  s.begin() + static_cast<std::ptrdiff_t>(i + n));
    bool skip = false;
    for (Label l : g) skip = skip || l == boundary;
    if (!skip) ++c[g];
  }
  return c;
}

inline long long window_dot(const std::map<LabelString, long long>& a,
                            const std::map<LabelString, long long>& b) {
  long long s = 0;
  for (const auto& [g, c] : a) {
    auto it = b.find(g);
    if (it != b.end()) s += c * it->second;
  }
  return s;
}

// Every root obtainable by splitting word as prefix + pattern body +
// suffix, using plain string matching against the inventories.
inline std::set<LabelString> decompositions(const Stemmer& st,
                                            const LabelString& word) {
  std::set<LabelString> roots;
  auto starts = [&](const LabelString& a) {
    return a.size() <= word.size() &&
           std::equal(a.begin(), a.end(), word.begin());
  };
  auto ends = [&](const LabelString& a) {
    return a.size() <= word.size() &&
           std::equal(a.rbegin(), a.rend(), word.rbegin());
  };
  for (Category cat : {Category::kNoun, Category::kVerb}) {
    std::vector<LabelString> prefixes{{}};
    for (const auto& p : st.affixes.prefixes(cat)) prefixes.push_back(p);
    std::vector<LabelString> suffixes{{}};
    for (const auto& s : st.affixes.suffixes) suffixes.push_back(s);
    for (const auto& p : prefixes) {
      if (!starts(p)) continue;
      for (const auto& s : suffixes) {
        if (!ends(s) || p.size() + s.size() > word.size()) continue;
        const LabelString body(word.begin() + static_cast<std::ptrdiff_t>(p.size()),
                               word.end() - static_cast<std::ptrdiff_t>(s.size()));
        for (const auto& pat : st.patterns) {
          if (pat.category != cat || pat.items.size() != body.size()) continue;
          LabelString root;
          bool ok = true;
          for (std::size_t i = 0; i < body.size() && ok; ++i) {
            if (pat.items[i].slot) {
              root.push_back(body[i]);
            } else {
              ok = pat.items[i].letter == body[i];
            }
          }
          if (ok) roots.insert(root);
        }
      }
    }
  }
  return roots;
}

struct GeneratedWord {
  LabelString word;
  LabelString root;
};

// prefix (maybe empty) + pattern(root) + suffix (maybe empty).
inline GeneratedWord generate_word(const Stemmer& st,
                                   const std::vector<LabelString>& roots3,
                                   std::mt19937_64& rng) {
  const Pattern& pat = st.patterns[rnd(rng, st.patterns.size())];
  LabelString root;
  if (pat.arity == 3) {
    root = roots3[rnd(rng, roots3.size())];
  } else {
    for (int i = 0; i < 4; ++i) root.push_back(static_cast<Label>(1 + rnd(rng, 28)));
  }
  const auto& prefixes = st.affixes.prefixes(pat.category);
  LabelString word;
  if (rnd(rng, 2)) {
    const auto& p = prefixes[rnd(rng, prefixes.size())];
    word = p;
  }
  word = cat(word, pat.instantiate(root));
  if (rnd(rng, 2)) {
    word = cat(word, st.affixes.suffixes[rnd(rng, st.affixes.suffixes.size())]);
  }
  return {word, root};
}

inline const Stemmer& default_stemmer() {
  static const Stemmer st = Stemmer::build(StemmerConfig::defaults());
  return st;
}

inline const RootScorer& default_scorer() {
  static const RootScorer sc = train_scorer(
      load_roots(io::data_dir() / "roots.txt"), default_stemmer().alphabet);
  return sc;
}

inline std::vector<LabelString> default_roots() {
  std::vector<LabelString> out;
  for (const auto& r : load_roots(io::data_dir() / "roots.txt")) {
    out.push_back(default_stemmer().alphabet.encode(r));
  }
  return out;
}

}  // namespace ratk::testing
