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
// The 28-letter canonical Arabic alphabet, its normalization map and an
// ASCII transliteration.
//
// Letters get symbol ids 1..28 in file order; id 29 is the word-boundary
// symbol used inside document machines; id 0 is epsilon. Words can be given
// in Arabic script or in the transliteration (any all-ASCII string is read
// as transliteration).

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ratk/error.hpp"
#include "ratk/io.hpp"
#include "ratk/text_format.hpp"
#include "ratk/utf8.hpp"
#include "ratk/wfst.hpp"

namespace ratk {

inline bool is_arabic_block(char32_t cp) {
  return (cp >= 0x0600 && cp <= 0x06FF) || (cp >= 0x0750 && cp <= 0x077F) ||
         (cp >= 0x08A0 && cp <= 0x08FF) || (cp >= 0xFB50 && cp <= 0xFDFF) ||
         (cp >= 0xFE70 && cp <= 0xFEFF);
}

class ArabicAlphabet {
 public:
  static constexpr std::size_t kLetterCount = 28;

  // alphabet file: `letter<TAB>codepoint<TAB>translit` (28 lines, order
  // defines ids) and `variant<TAB>codepoint<TAB>translit` for extra
  // transliteration characters of non-canonical codepoints.
  // normalization file: `from-codepoint<TAB>to-codepoint-or-DELETE`.
  static ArabicAlphabet load(const std::filesystem::path& alphabet_file,
                             const std::filesystem::path& normalization_file) {
    ArabicAlphabet a;
    for (const auto& line : io::read_data_lines(alphabet_file)) {
      auto f = io::split(line, '\t');
      if (f.size() != 3 || f[2].size() != 1) {
        throw Error(alphabet_file.string() + ": bad line '" + line + "'");
      }
      const char32_t cp = utf8::parse_codepoint(f[1]);
      const char tr = f[2][0];
      if (a.translit_.contains(tr)) {
        throw Error(alphabet_file.string() + ": transliteration '" +
                    std::string(1, tr) + "' used twice");
      }
      a.translit_[tr] = cp;
      if (f[0] == "letter") {
        if (a.ids_.contains(cp)) {
          throw Error(alphabet_file.string() + ": duplicate letter");
        }
        a.letters_.push_back(cp);
        a.ids_[cp] = static_cast<Label>(a.letters_.size());
        a.letter_translit_.push_back(tr);
      } else if (f[0] != "variant") {
        throw Error(alphabet_file.string() + ": unknown kind '" +
                    std::string(f[0]) + "'");
      }
    }
    if (a.letters_.size() != kLetterCount) {
      throw Error(alphabet_file.string() + ": expected " +
                  std::to_string(kLetterCount) + " letters, found " +
                  std::to_string(a.letters_.size()));
    }
    for (const auto& line : io::read_data_lines(normalization_file)) {
      auto f = io::split(line, '\t');
      if (f.size() != 2) {
        throw Error(normalization_file.string() + ": bad line '" + line + "'");
      }
      const char32_t from = utf8::parse_codepoint(f[0]);
      if (f[1] == "DELETE") {
        a.normalization_[from] = std::nullopt;
      } else {
        a.normalization_[from] = utf8::parse_codepoint(f[1]);
      }
    }
    // Every mapping must land on a canonical letter (or delete) so that
    // normalization is a single idempotent step.
    for (const auto& [from, to] : a.normalization_) {
      if (to && !a.ids_.contains(*to)) {
        throw Error(normalization_file.string() +
                    ": target of a mapping is not a canonical letter");
      }
      if (a.ids_.contains(from)) {
        throw Error(normalization_file.string() +
                    ": canonical letters cannot be remapped");
      }
    }
    return a;
  }

  static ArabicAlphabet load_default() {
    const auto dir = io::data_dir();
    return load(dir / "alphabet.tsv", dir / "normalization.tsv");
  }

  std::size_t size() const { return letters_.size(); }
  Label boundary() const { return static_cast<Label>(letters_.size() + 1); }

  LabelSet letters() const {
    LabelSet s;
    for (Label l = 1; l <= static_cast<Label>(letters_.size()); ++l) {
      s.insert(l);
    }
    return s;
  }
  LabelSet letters_and_boundary() const {
    LabelSet s = letters();
    s.insert(boundary());
    return s;
  }

  std::optional<Label> letter_id(char32_t cp) const {
    auto it = ids_.find(cp);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
  }

  char32_t codepoint(Label id) const { return letters_.at(id - 1); }

  // Canonical letter for cp, nullopt if cp is deleted or not a letter at
  // all. `known` tells the two apart.
  std::optional<Label> normalize_codepoint(char32_t cp, bool* known) const {
    if (auto id = letter_id(cp)) {
      if (known) *known = true;
      return id;
    }
    auto it = normalization_.find(cp);
    if (it == normalization_.end()) {
      if (known) *known = false;
      return std::nullopt;
    }
    if (known) *known = true;
    if (!it->second) return std::nullopt;
    return letter_id(*it->second);
  }

  // Strict encoding for configuration data and command-line words.
  LabelString encode(std::string_view word) const {
    LabelString out;
    if (utf8::is_ascii(word)) {
      for (char c : word) {
        auto it = translit_.find(c);
        if (it == translit_.end()) {
          throw Error("'" + std::string(1, c) + "' in '" + std::string(word) +
                      "' is not a transliterated letter");
        }
        bool known = false;
        auto id = normalize_codepoint(it->second, &known);
        if (!known) {
          throw Error("transliteration '" + std::string(1, c) +
                      "' maps to a codepoint with no normalization");
        }
        if (id) out.push_back(*id);
      }
      return out;
    }
    for (char32_t cp : utf8::decode(word)) {
      bool known = false;
      auto id = normalize_codepoint(cp, &known);
      if (!known) {
        std::string bad;
        utf8::append(bad, cp);
        throw Error("'" + bad + "' in '" + std::string(word) +
                    "' is not an Arabic letter");
      }
      if (id) out.push_back(*id);
    }
    return out;
  }

  std::string to_arabic(std::span<const Label> s) const {
    std::string out;
    for (Label l : s) {
      if (l == boundary()) {
        out.push_back(' ');
      } else {
        utf8::append(out, codepoint(l));
      }
    }
    return out;
  }

  std::string to_translit(std::span<const Label> s) const {
    std::string out;
    for (Label l : s) {
      out.push_back(l == boundary() ? '_' : letter_translit_.at(l - 1));
    }
    return out;
  }

  // Symbols are the Arabic letters; the boundary is "#".
  SymbolTable symbol_table() const {
    SymbolTable t;
    for (Label l = 1; l <= static_cast<Label>(letters_.size()); ++l) {
      std::string sym;
      utf8::append(sym, codepoint(l));
      t.add(sym, l);
    }
    t.add("#", boundary());
    return t;
  }

 private:
  std::vector<char32_t> letters_;
  std::vector<char> letter_translit_;
  std::map<char32_t, Label> ids_;
  std::map<char, char32_t> translit_;
  std::map<char32_t, std::optional<char32_t>> normalization_;
};

}  // namespace ratk
