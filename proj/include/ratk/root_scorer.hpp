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
// Bigram-window root scoring.
//
//   P1(c1, c2) = #(first = c1, second = c2) / #(first = c1)
//   P2(c2, c3) = #(second = c2, third = c3) / #(second = c2)
//   score(c1 c2 c3) = P1(c1, c2) * P2(c2, c3)
//
// Longer stems multiply one more P2 factor per extra letter. With add-one
// smoothing every count is incremented and the denominator grows by the
// alphabet size.

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ratk/alphabet.hpp"
#include "ratk/error.hpp"
#include "ratk/io.hpp"
#include "ratk/wfst.hpp"

namespace ratk {

class RootScorer {
 public:
  RootScorer() = default;

  // Roots are label strings over 1..alphabet_size, exactly 3 letters each.
  static RootScorer train(std::span<const LabelString> roots,
                          std::size_t alphabet_size, bool smoothing = false) {
    if (roots.empty()) throw Error("train_scorer: empty root list");
    RootScorer sc;
    sc.size_ = alphabet_size;
    sc.smoothing_ = smoothing;
    sc.root_count_ = roots.size();
    sc.first_.assign(alphabet_size + 1, 0);
    sc.second_.assign(alphabet_size + 1, 0);
    sc.pair1_.assign((alphabet_size + 1) * (alphabet_size + 1), 0);
    sc.pair2_.assign((alphabet_size + 1) * (alphabet_size + 1), 0);
    for (std::size_t i = 0; i < roots.size(); ++i) {
      const auto& r = roots[i];
      bool ok = r.size() == 3;
      for (Label l : r) {
        ok = ok && l >= 1 && static_cast<std::size_t>(l) <= alphabet_size;
      }
      if (!ok) {
        throw Error("train_scorer: root #" + std::to_string(i + 1) +
                    " is not three canonical letters");
      }
      ++sc.first_[r[0]];
      ++sc.second_[r[1]];
      ++sc.pair1_[sc.cell(r[0], r[1])];
      ++sc.pair2_[sc.cell(r[1], r[2])];
    }
    return sc;
  }

  // Probability of c2 in second position given c1 in first position.
  double p1(Label c1, Label c2) const {
    return ratio(pair1_[cell(c1, c2)], first_[check(c1)]);
  }
  // Probability of c3 in third position given c2 in second position.
  double p2(Label c2, Label c3) const {
    return ratio(pair2_[cell(c2, c3)], second_[check(c2)]);
  }

  double score(std::span<const Label> stem) const {
    if (stem.size() < 3) {
      throw Error("score: stem must have at least 3 letters");
    }
    double s = p1(stem[0], stem[1]);
    for (std::size_t k = 2; k < stem.size(); ++k) {
      s *= p2(stem[k - 1], stem[k]);
    }
    return s;
  }

  std::size_t alphabet_size() const { return size_; }
  std::size_t root_count() const { return root_count_; }
  bool smoothing() const { return smoothing_; }
  // Number of roots whose first (second) letter is c.
  std::uint64_t first_count(Label c) const { return first_[check(c)]; }
  std::uint64_t second_count(Label c) const { return second_[check(c)]; }

 private:
  Label check(Label c) const {
    if (c < 1 || static_cast<std::size_t>(c) > size_) {
      throw Error("score: label " + std::to_string(c) +
                  " is not a canonical letter");
    }
    return c;
  }
  std::size_t cell(Label a, Label b) const {
    return static_cast<std::size_t>(check(a)) * (size_ + 1) +
           static_cast<std::size_t>(check(b));
  }
  double ratio(std::uint64_t num, std::uint64_t den) const {
    if (smoothing_) {
      return static_cast<double>(num + 1) / static_cast<double>(den + size_);
    }
    if (den == 0) return 0.0;
    return static_cast<double>(num) / static_cast<double>(den);
  }

  std::size_t size_ = 0;
  bool smoothing_ = false;
  std::size_t root_count_ = 0;
  std::vector<std::uint64_t> first_, second_, pair1_, pair2_;
};

// Encodes roots given as text, naming the first malformed one.
inline RootScorer train_scorer(const std::vector<std::string>& roots,
                               const ArabicAlphabet& alphabet,
                               bool smoothing = false) {
  if (roots.empty()) throw Error("train_scorer: empty root list");
  std::vector<LabelString> encoded;
  encoded.reserve(roots.size());
  for (const auto& r : roots) {
    LabelString l;
    try {
      l = alphabet.encode(r);
    } catch (const Error& e) {
      throw Error("train_scorer: malformed root '" + r + "': " + e.what());
    }
    if (l.size() != 3) {
      throw Error("train_scorer: malformed root '" + r +
                  "': expected 3 letters");
    }
    encoded.push_back(std::move(l));
  }
  return RootScorer::train(encoded, alphabet.size(), smoothing);
}

inline std::vector<std::string> load_roots(const std::filesystem::path& path) {
  std::vector<std::string> out;
  for (auto& line : io::read_data_lines(path)) {
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t')) {
      line.pop_back();
    }
    if (!line.empty()) out.push_back(std::move(line));
  }
  return out;
}

}  // namespace ratk
