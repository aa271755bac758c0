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
// Two short documents about the same topic written with different surface
// forms: their 3-gram kernel distance with and without stemming.

#include <iostream>

#include "ratk/ratk.hpp"

int main() {
  const auto tk = ratk::Toolkit::load(ratk::io::data_dir());
  const std::vector<ratk::Document> docs = {
      {"a", "المدرسة كتب الطالب درسا في المكتبة", std::nullopt},
      {"b", "يدرس الطلاب في المدارس ويكتبون", std::nullopt},
  };
  for (bool stemmed : {false, true}) {
    const auto ar = ratk::build_archive(docs, tk, {.stem = stemmed});
    const auto k = ratk::kernel_matrix(ar, {});
    std::cout << (stemmed ? "stemmed  " : "surface  ")
              << "K(a,b)=" << k(0, 1)
              << "  distance=" << ratk::kernel_distance(k, 0, 1) << '\n';
  }
}
