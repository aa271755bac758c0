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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support.hpp"

namespace ratk {
namespace {

const Stemmer& st() { return testing::default_stemmer(); }
const ArabicAlphabet& ab() { return st().alphabet; }
LabelString enc(const std::string& w) { return ab().encode(w); }
const LabelSet kSigma = testing::label_range(29);
using testing::cat;

RealFst linear(const LabelString& s) {
  return linear_from_string<RealSemiring>(s, kSigma);
}

LabelString random_string(std::mt19937_64& rng, std::size_t max_len,
                          Label alphabet) {
  LabelString s(testing::rnd(rng, max_len + 1));
  for (auto& l : s) l = static_cast<Label>(1 + testing::rnd(rng, alphabet));
  return s;
}

TEST(Normalize, DropsDigitsLatinAndPunctuation) {
  const Document d{"d", "درس 2024 abc، الطالبُ!", std::nullopt};
  const auto tokens = normalize(d, {}, ab());
  ASSERT_EQ(tokens.size(), 2u);
  EXPECT_EQ(tokens[0], enc("drs"));
  EXPECT_EQ(tokens[1], enc("AlXAlb"));
}

TEST(Normalize, EmptyDocument) {
  EXPECT_TRUE(normalize(Document{"e", "", std::nullopt}, {}, ab()).empty());
  EXPECT_TRUE(normalize(Document{"e", "123 ... xyz", std::nullopt}, {}, ab())
                  .empty());
}

TEST(Normalize, DiacritizedEqualsBare) {
  const auto a = normalize({"a", "الْمَدْرَسَةُ", std::nullopt}, {}, ab());
  const auto b = normalize({"b", "المدرسة", std::nullopt}, {}, ab());
  EXPECT_EQ(a, b);
}

TEST(Normalize, RemovesStopwords) {
  const Stopwords stops = load_stopwords(io::data_dir() / "stopwords.txt", ab());
  EXPECT_TRUE(stops.contains(enc("fy")));
  const auto t = normalize({"s", "درس في المدرسة", std::nullopt}, stops, ab());
  EXPECT_EQ(t.size(), 2u);
}

TEST(Normalize, Idempotent) {
  const Stopwords stops = load_stopwords(io::data_dir() / "stopwords.txt", ab());
  const Document d{"x", "قَالَ الرَّئِيسُ: إنَّ المؤتمرَ (2019) ناجحٌ جداً في ليبيا.",
                   std::nullopt};
  const auto once = normalize(d, stops, ab());
  std::string rendered;
  for (const auto& t : once) rendered += ab().to_arabic(t) + " ";
  EXPECT_EQ(normalize({"y", rendered, std::nullopt}, stops, ab()), once);
}

TEST(DocToFst, SingleToken) {
  const auto t = doc_to_fst(std::vector<LabelString>{enc("mdrsT")}, st().fst,
                            testing::default_scorer(), ab());
  EXPECT_EQ(weight_of_pair(t, enc("drs"), enc("drs")), 1.0);
}

TEST(DocToFst, EmptyAcceptsEpsilon) {
  const auto t = doc_to_fst({}, st().fst, testing::default_scorer(), ab());
  EXPECT_EQ(weight_of_pair(t, LabelString{}, LabelString{}), 1.0);
  EXPECT_EQ(t.num_states(), 1u);
}

TEST(DocToFst, ConcatenatesStemsWithBoundaries) {
  const std::vector<LabelString> tokens = {enc("mdrsT"), enc("yktbwn"),
                                           enc("Ab")};
  const auto& sc = testing::default_scorer();
  LabelString expected;
  for (const auto& w : tokens) {
    if (!expected.empty()) expected.push_back(ab().boundary());
    const auto s = stem(st().fst, sc, w).stem;
    expected.insert(expected.end(), s.begin(), s.end());
  }
  EXPECT_EQ(expected, cat(cat(cat(cat(enc("drs"), {29}), enc("ktb")), {29}),
                          enc("Ab")));
  const auto t = doc_to_fst(tokens, st().fst, sc, ab());
  const auto paths = enumerate_paths(t, 100);
  ASSERT_EQ(paths.size(), 1u);
  EXPECT_EQ(paths[0].input, expected);
  for (StateId s = 0; s < static_cast<StateId>(t.num_states()); ++s) {
    if (!t.is_final(s)) {
      EXPECT_EQ(t.arcs(s).size(), 1u);
    }
  }
  const auto flat = doc_to_fst(tokens, st().fst, sc, ab(), false);
  EXPECT_EQ(enumerate_paths(flat, 100)[0].input,
            cat(cat(enc("drs"), enc("ktb")), enc("Ab")));
}

TEST(NgramCounts, Examples) {
  const LabelString abab = {1, 2, 1, 2};
  const auto c2 = ngram_counts(linear(abab), 2, kEpsilon);
  EXPECT_EQ(c2, (NgramCounts{{{1, 2}, 2.0}, {{2, 1}, 1.0}}));
  EXPECT_EQ(ngram_counts(linear({1, 2, 3}), 3, kEpsilon),
            (NgramCounts{{{1, 2, 3}, 1.0}}));
}

TEST(NgramCounts, MatchesSlidingWindow) {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 100; ++i) {
    const auto s = random_string(rng, 20, 5);
    for (std::size_t n : {2u, 3u, 4u}) {
      const auto c = ngram_counts(linear(s), n, 29);
      const auto w = testing::window_counts(s, n, 29);
      ASSERT_EQ(c.size(), w.size());
      for (const auto& [g, v] : w) EXPECT_EQ(c.at(g), static_cast<double>(v));
    }
  }
}

TEST(NgramCounts, ExpectedCountsOnWeightedAcceptor) {
  auto t = fst_union(linear({1, 2, 1}), linear({1, 2}));
  // Scale the two branches by initial weights 0.5 and 0.25.
  RealFst w(kSigma, kSigma);
  w = t;
  const StateId start = w.initial().begin()->first;
  w.mutable_arcs(start)[0].weight = 0.5;
  w.mutable_arcs(start)[1].weight = 0.25;
  const auto c = ngram_counts(w, 2, kEpsilon);
  EXPECT_EQ(c.at({1, 2}), 0.75);
  EXPECT_EQ(c.at({2, 1}), 0.5);
}

TEST(NgramCounts, CyclicRejected) {
  RealFst t(kSigma, kSigma);
  t.add_state();
  t.add_arc(0, 1, 1, 1.0, 0);
  t.set_initial(0);
  t.set_final(0);
  EXPECT_THROW(ngram_counts(t, 2, kEpsilon), Error);
}

TEST(NgramKernel, Examples) {
  EXPECT_EQ(ngram_kernel(linear({1, 2, 3}), linear({1, 2, 3}), 3, 29), 1.0);
  EXPECT_EQ(ngram_kernel(linear({1, 2, 1, 2}), linear({1, 2}), 2, 29), 2.0);
  EXPECT_EQ(ngram_kernel(linear({1, 2, 3}), linear({4, 5, 6}), 2, 29), 0.0);
}

TEST(NgramKernel, BoundaryExcluded) {
  const LabelString x = {1, 2, 29, 3, 4};
  const LabelString y = {2, 29, 3};
  EXPECT_EQ(ngram_kernel(linear(x), linear(y), 2, 29), 0.0);
  EXPECT_EQ(ngram_kernel(linear(x), linear(y), 2, kEpsilon), 2.0);
  for (const auto& [g, c] : ngram_counts(linear(x), 2, 29)) {
    EXPECT_EQ(std::count(g.begin(), g.end(), 29), 0);
  }
}

TEST(NgramKernel, CompositionRouteAgrees) {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 40; ++i) {
    auto x = random_string(rng, 10, 4);
    auto y = random_string(rng, 10, 4);
    if (!x.empty()) x[testing::rnd(rng, x.size())] = 29;
    for (std::size_t n : {1u, 2u, 3u}) {
      const double direct = ngram_kernel(linear(x), linear(y), n, 29);
      const double comp = ngram_kernel_by_composition(linear(x), linear(y), n, 29);
      EXPECT_NEAR(comp, direct, 1e-9 * std::max(1.0, direct));
    }
  }
}

FstArchive archive_of(const std::vector<LabelString>& docs) {
  FstArchive ar;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    ar.add("d" + std::to_string(i), linear(docs[i]));
  }
  return ar;
}

TEST(KernelMatrix, SingleDocument) {
  const auto ar = archive_of({{1, 2, 3, 1, 2, 3}});
  const auto raw = kernel_matrix(ar, {.order = 3, .normalize = false});
  ASSERT_EQ(raw.values.rows(), 1);
  EXPECT_EQ(raw(0, 0), 6.0);  // abc:2, bca:1, cab:1
  EXPECT_EQ(kernel_matrix(ar, {.order = 3})(0, 0), 1.0);
}

TEST(KernelMatrix, IdenticalDocuments) {
  const auto k = kernel_matrix(archive_of({{1, 2, 3, 4}, {1, 2, 3, 4}}), {});
  EXPECT_EQ(k(0, 1), 1.0);
}

TEST(KernelMatrix, EmptyDocumentHasZeroDiagonal) {
  const auto k = kernel_matrix(archive_of({{}, {1, 2, 3}}), {});
  EXPECT_EQ(k(0, 0), 0.0);
  EXPECT_EQ(k(1, 1), 1.0);
  EXPECT_EQ(k(0, 1), 0.0);
}

TEST(KernelMatrix, MatchesOracleAndIsPsd) {
  std::mt19937_64 rng(43);
  std::vector<LabelString> docs;
  for (int i = 0; i < 10; ++i) docs.push_back(random_string(rng, 15, 4));
  const auto k = kernel_matrix(archive_of(docs), {.order = 2, .normalize = false});
  for (std::size_t i = 0; i < docs.size(); ++i) {
    for (std::size_t j = 0; j < docs.size(); ++j) {
      EXPECT_EQ(k(i, j), static_cast<double>(testing::window_dot(
                             testing::window_counts(docs[i], 2, 29),
                             testing::window_counts(docs[j], 2, 29))));
      EXPECT_EQ(k(i, j), k(j, i));
    }
  }
  const auto [lo, hi] = eigen_range(k.values);
  EXPECT_GE(lo, -1e-9 * hi);
}

TEST(KernelMatrix, SigmaTooSmall) {
  EXPECT_THROW(kernel_matrix(archive_of({{1, 2, 9}}), {.sigma = 5}), Error);
  EXPECT_THROW(kernel_matrix(archive_of({{1}}), {.order = 0}), Error);
}

TEST(KernelDistance, Examples) {
  const auto k = kernel_matrix(
      archive_of({{1, 2, 3, 4}, {5, 6, 7, 8}, {1, 2, 3, 5, 6}}), {});
  EXPECT_EQ(kernel_distance(k, 0, 0), 0.0);
  EXPECT_DOUBLE_EQ(kernel_distance(k, 0, 1), std::sqrt(2.0));
  EXPECT_THROW(kernel_distance(1.0, 5.0, 1.0), Error);
  EXPECT_EQ(kernel_distance(1.0, 1.0 + 1e-12, 1.0), 0.0);
}

TEST(KernelDistance, TriangleInequality) {
  std::mt19937_64 rng(44);
  for (int r = 0; r < 30; ++r) {
    std::vector<LabelString> docs;
    for (int i = 0; i < 3; ++i) docs.push_back(random_string(rng, 12, 3));
    const auto k = kernel_matrix(archive_of(docs), {.order = 2});
    const double ab = kernel_distance(k, 0, 1), bc = kernel_distance(k, 1, 2),
                 ac = kernel_distance(k, 0, 2);
    EXPECT_LE(ac, ab + bc + 1e-12);
    EXPECT_LE(ab, ac + bc + 1e-12);
    EXPECT_LE(bc, ab + ac + 1e-12);
    EXPECT_LE(ab, std::sqrt(2.0) + 1e-12);
  }
}

TEST(KernelArchive, RoundTrip) {
  std::mt19937_64 rng(45);
  std::vector<LabelString> docs;
  for (int i = 0; i < 12; ++i) docs.push_back(random_string(rng, 20, 6));
  for (bool norm : {false, true}) {
    const auto k = kernel_matrix(archive_of(docs), {.order = 3, .normalize = norm});
    const std::string text = serialize_kernel(k);
    const auto back = deserialize_kernel(text);
    EXPECT_EQ(serialize_kernel(back), text);
    EXPECT_EQ(back.values, k.values);
    EXPECT_EQ(back.names, k.names);
    EXPECT_EQ(back.normalized, norm);
  }
}

TEST(KernelArchive, RejectsMalformed) {
  EXPECT_THROW(deserialize_kernel(""), Error);
  EXPECT_THROW(deserialize_kernel("RKKAR2 order=3 sigma=29 normalized=1\n0\n"),
               Error);
  EXPECT_THROW(deserialize_kernel("RKKAR1 order=3 normalized=1\n0\n"), Error);
  EXPECT_THROW(
      deserialize_kernel("RKKAR1 order=3 sigma=29 normalized=1\n1\na\n1 2\n"),
      Error);
  EXPECT_THROW(
      deserialize_kernel("RKKAR1 order=3 sigma=29 normalized=1\n1\na\nx\n"),
      Error);
}

}  // namespace
}  // namespace ratk
