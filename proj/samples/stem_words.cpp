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
// Stems a handful of words and prints every candidate with its score.

#include <iostream>
#include <string>
#include <vector>

#include "ratk/ratk.hpp"

int main(int argc, char** argv) {
  const auto dir = ratk::io::data_dir();
  const auto st = ratk::Stemmer::build(ratk::StemmerConfig::from_dir(dir));
  const auto scorer =
      ratk::train_scorer(ratk::load_roots(dir / "roots.txt"), st.alphabet);

  std::vector<std::string> words(argv + 1, argv + argc);
  if (words.empty()) words = {"mdrsT", "AntSr", "yktbwn", "مكتبة"};

  std::cout << "stemmer: " << st.fst.num_states() << " states, "
            << st.fst.num_arcs() << " arcs\n";
  for (const auto& w : words) {
    const auto r = ratk::stem(st.fst, scorer, st.alphabet.encode(w));
    std::cout << w << " -> " << st.alphabet.to_translit(r.stem)
              << (r.stemmed ? "" : " (no analysis)") << '\n';
    for (const auto& c : r.candidates) {
      std::cout << "    " << st.alphabet.to_translit(c) << '\t'
                << scorer.score(c) << '\n';
    }
  }
}
