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
// Raw text -> normalized tokens -> linear document machine of best stems.

#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ratk/alphabet.hpp"
#include "ratk/io.hpp"
#include "ratk/root_scorer.hpp"
#include "ratk/stemmer.hpp"
#include "ratk/utf8.hpp"
#include "ratk/wfst.hpp"

namespace ratk {

struct Document {
  std::string id;
  std::string text;
  std::optional<std::string> label;
};

using Stopwords = std::set<LabelString>;

inline bool is_separator(char32_t cp) {
  if (cp < 0x80) {
    const auto c = static_cast<unsigned char>(cp);
    return c <= 0x20 || c == 0x7F ||
           (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) ||
           (c >= 0x5B && c <= 0x60) || (c >= 0x7B && c <= 0x7E);
  }
  switch (cp) {
    case 0x060C:  // comma
    case 0x061B:  // semicolon
    case 0x061F:  // question mark
    case 0x06D4:  // full stop
    case 0x00A0:
    case 0x3000:
    case 0xFEFF:
      return true;
    default:
      break;
  }
  return (cp >= 0x066A && cp <= 0x066D) || (cp >= 0x00A1 && cp <= 0x00BF) ||
         (cp >= 0x2000 && cp <= 0x206F) || (cp >= 0xFD3E && cp <= 0xFD3F);
}

// Splits on whitespace and punctuation, deletes diacritics, maps variants
// onto canonical letters and drops every other codepoint (digits, Latin
// letters, symbols). Empty tokens disappear.
inline std::vector<LabelString> tokenize(std::string_view text,
                                         const ArabicAlphabet& alphabet) {
  std::vector<LabelString> tokens;
  LabelString cur;
  auto flush = [&] {
    if (!cur.empty()) tokens.push_back(std::move(cur));
    cur.clear();
  };
  for (char32_t cp : utf8::decode(text)) {
    if (is_separator(cp)) {
      flush();
      continue;
    }
    bool known = false;
    if (auto id = alphabet.normalize_codepoint(cp, &known)) cur.push_back(*id);
  }
  flush();
  return tokens;
}

inline Stopwords load_stopwords(const std::filesystem::path& path,
                                const ArabicAlphabet& alphabet) {
  Stopwords out;
  for (const auto& line : io::read_data_lines(path)) {
    for (auto& t : tokenize(line, alphabet)) out.insert(std::move(t));
  }
  return out;
}

inline std::vector<LabelString> normalize(const Document& d,
                                          const Stopwords& stopwords,
                                          const ArabicAlphabet& alphabet) {
  std::vector<LabelString> out;
  for (auto& t : tokenize(d.text, alphabet)) {
    if (!stopwords.contains(t)) out.push_back(std::move(t));
  }
  return out;
}

// Linear acceptor spelling the tokens in order, separated by the boundary
// symbol when `boundaries` is set.
inline RealFst linear_document(std::span<const LabelString> words,
                               const ArabicAlphabet& alphabet,
                               bool boundaries = true) {
  LabelString s;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i > 0 && boundaries) s.push_back(alphabet.boundary());
    s.insert(s.end(), words[i].begin(), words[i].end());
  }
  return linear_from_string<RealSemiring>(s, alphabet.letters_and_boundary());
}

// Best stem of every token, in order. Unstemmable tokens pass through.
inline std::vector<LabelString> stem_tokens(
    std::span<const LabelString> tokens, const RealFst& stemmer,
    const RootScorer& scorer) {
  std::vector<LabelString> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(stem(stemmer, scorer, t).stem);
  return out;
}

inline RealFst doc_to_fst(std::span<const LabelString> tokens,
                          const RealFst& stemmer, const RootScorer& scorer,
                          const ArabicAlphabet& alphabet,
                          bool boundaries = true) {
  return linear_document(stem_tokens(tokens, stemmer, scorer), alphabet,
                         boundaries);
}

}  // namespace ratk
