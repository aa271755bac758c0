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

using testing::PairMap;

const LabelSet kAB = {1, 2, 3};

template <Semiring S>
Wfst<S> single_arc(Label i, Label o, double w) {
  Wfst<S> t(kAB, kAB);
  t.add_states(2);
  t.add_arc(0, i, o, w, 1);
  t.set_initial(0);
  t.set_final(1);
  return t;
}

TEST(Semiring, RealLaws) {
  using S = RealSemiring;
  for (double a : {0.0, 1.0, 2.5}) {
    EXPECT_EQ(S::plus(a, S::zero()), a);
    EXPECT_EQ(S::times(a, S::one()), a);
    EXPECT_EQ(S::times(a, S::zero()), 0.0);
  }
}

TEST(Semiring, TropicalLaws) {
  using S = TropicalSemiring;
  for (double a : {0.0, 1.0, 7.0}) {
    EXPECT_EQ(S::plus(a, S::zero()), a);
    EXPECT_EQ(S::times(a, S::one()), a);
    EXPECT_TRUE(std::isinf(S::times(a, S::zero())));
  }
  EXPECT_EQ(S::plus(3.0, 1.0), 1.0);
  EXPECT_EQ(S::times(3.0, 1.0), 4.0);
}

TEST(Wfst, ZeroBindingsAreAbsent) {
  RealFst t(kAB, kAB);
  t.add_state();
  t.set_initial(0, 2.0);
  t.set_final(0, 3.0);
  t.set_final(0, 0.0);
  EXPECT_TRUE(t.is_initial(0));
  EXPECT_FALSE(t.is_final(0));
  EXPECT_TRUE(t.finals().empty());
}

TEST(Wfst, RejectsBadArcs) {
  RealFst t(kAB, kAB);
  t.add_state();
  EXPECT_THROW(t.add_arc(0, 1, 1, 1.0, 5), Error);
  EXPECT_THROW(t.add_arc(0, 9, 1, 1.0, 0), Error);
  EXPECT_THROW(t.add_arc(0, 1, 9, 1.0, 0), Error);
}

TEST(LinearFromString, ChainAcceptsOnlyItself) {
  const LabelString drs = {1, 2, 3};
  const auto t = linear_from_string<RealSemiring>(drs, kAB);
  EXPECT_EQ(t.num_states(), 4u);
  EXPECT_EQ(weight_of_pair(t, drs, drs), 1.0);
  const auto m = testing::pair_weights(t);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m.begin()->first.first, drs);
}

TEST(LinearFromString, EmptyString) {
  const auto t = linear_from_string<RealSemiring>(LabelString{}, kAB);
  EXPECT_EQ(t.num_states(), 1u);
  EXPECT_TRUE(t.is_initial(0));
  EXPECT_TRUE(t.is_final(0));
}

TEST(LinearFromString, OutOfAlphabetNamesSymbol) {
  try {
    linear_from_string<RealSemiring>(LabelString{1, 7}, kAB);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find('7'), std::string::npos);
  }
}

TEST(WeightOfPair, ParallelPathsAdd) {
  RealFst t(kAB, kAB);
  t.add_states(2);
  t.add_arc(0, 1, 2, 0.5, 1);
  t.add_arc(0, 1, 2, 0.25, 1);
  t.set_initial(0);
  t.set_final(1);
  EXPECT_EQ(weight_of_pair(t, LabelString{1}, LabelString{2}), 0.75);
  EXPECT_EQ(weight_of_pair(t, LabelString{2}, LabelString{2}), 0.0);
}

TEST(WeightOfPair, CyclicNeedsBound) {
  RealFst t(kAB, kAB);
  t.add_state();
  t.add_arc(0, 1, 1, 0.5, 0);
  t.set_initial(0);
  t.set_final(0);
  try {
    weight_of_pair(t, LabelString{1}, LabelString{1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("not regulated"), std::string::npos);
  }
  EXPECT_EQ(weight_of_pair(t, LabelString{1, 1}, LabelString{1, 1}, 5), 0.25);
  EXPECT_THROW(shortest_distance(t), Error);
}

TEST(Union, AddsWeights) {
  const auto u = fst_union(single_arc<RealSemiring>(1, 2, 0.5),
                           single_arc<RealSemiring>(1, 2, 0.25));
  EXPECT_EQ(weight_of_pair(u, LabelString{1}, LabelString{2}), 0.75);
}

TEST(Union, EmptyIsIdentity) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    const auto t = testing::random_acyclic<RealSemiring>(rng);
    EXPECT_EQ(testing::pair_weights(fst_union(t, RealFst(kAB, kAB))),
              testing::pair_weights(t));
  }
}

TEST(Concat, LinearPieces) {
  const auto ab = linear_from_string<RealSemiring>(LabelString{1, 2}, kAB);
  const auto c = linear_from_string<RealSemiring>(LabelString{3}, kAB);
  const auto m = testing::pair_weights(concat(ab, c));
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m.begin()->first.first, (LabelString{1, 2, 3}));
  EXPECT_EQ(m.begin()->second, 1.0);
}

TEST(Concat, EpsilonAcceptorIsIdentity) {
  const auto eps = linear_from_string<RealSemiring>(LabelString{}, kAB);
  std::mt19937_64 rng(4);
  for (int i = 0; i < 20; ++i) {
    const auto t = testing::random_acyclic<RealSemiring>(rng);
    EXPECT_EQ(testing::pair_weights(concat(t, eps)), testing::pair_weights(t));
    EXPECT_EQ(testing::pair_weights(concat(eps, t)), testing::pair_weights(t));
  }
}

TEST(Compose, SingleIntermediate) {
  const auto r = compose(single_arc<RealSemiring>(1, 2, 0.5),
                         single_arc<RealSemiring>(2, 3, 0.2));
  EXPECT_DOUBLE_EQ(weight_of_pair(r, LabelString{1}, LabelString{3}), 0.1);
}

TEST(Compose, AlphabetMismatch) {
  RealFst a(kAB, LabelSet{1, 2});
  RealFst b(kAB, kAB);
  EXPECT_THROW(compose(a, b), Error);
}

// a:eps then eps:b against eps:eps-heavy partners; every interleaving of
// epsilon moves must be counted once.
TEST(Compose, EpsilonNoDoubleCounting) {
  RealFst t1(kAB, kAB);
  t1.add_states(3);
  t1.add_arc(0, 1, kEpsilon, 2.0, 1);
  t1.add_arc(1, kEpsilon, 2, 3.0, 2);
  t1.set_initial(0);
  t1.set_final(2);
  RealFst t2(kAB, kAB);
  t2.add_states(3);
  t2.add_arc(0, kEpsilon, 3, 5.0, 1);
  t2.add_arc(1, 2, kEpsilon, 7.0, 2);
  t2.set_initial(0);
  t2.set_final(2);
  const auto r = compose(t1, t2);
  EXPECT_EQ(weight_of_pair(r, LabelString{1}, LabelString{3}), 210.0);
  EXPECT_EQ(testing::pair_weights(r),
            testing::compose_oracle<RealSemiring>(testing::pair_weights(t1),
                                                  testing::pair_weights(t2)));
}

template <Semiring S>
void check_random_ops(std::uint64_t seed, int rounds) {
  std::mt19937_64 rng(seed);
  for (int i = 0; i < rounds; ++i) {
    const auto a = testing::random_acyclic<S>(rng);
    const auto b = testing::random_acyclic<S>(rng);
    const PairMap ma = testing::pair_weights(a), mb = testing::pair_weights(b);
    EXPECT_EQ(testing::pair_weights(fst_union(a, b)),
              (testing::union_oracle<S>(ma, mb)));
    EXPECT_EQ(testing::pair_weights(concat(a, b)),
              (testing::concat_oracle<S>(ma, mb)));
    EXPECT_EQ(testing::pair_weights(compose(a, b)),
              (testing::compose_oracle<S>(ma, mb)));
  }
}

TEST(RationalOps, RandomReal) { check_random_ops<RealSemiring>(11, 60); }
TEST(RationalOps, RandomTropical) { check_random_ops<TropicalSemiring>(12, 60); }

// weight_of_pair agrees with enumeration on every pair up to length 3.
TEST(WeightOfPair, MatchesEnumeration) {
  std::mt19937_64 rng(5);
  const auto strings = testing::all_strings(3, 3);
  for (int i = 0; i < 10; ++i) {
    const auto t = testing::random_acyclic<RealSemiring>(
        rng, {.max_states = 4, .max_arcs = 8, .alphabet = 3});
    const auto m = testing::pair_weights(t);
    for (const auto& x : strings) {
      for (const auto& y : strings) {
        ASSERT_EQ(weight_of_pair(t, x, y),
                  testing::lookup<RealSemiring>(m, x, y));
      }
    }
  }
}

TEST(Project, KeepsOneTape) {
  const auto t = single_arc<RealSemiring>(1, 2, 0.5);
  const auto in = project(t, Side::kInput);
  const auto out = project(t, Side::kOutput);
  EXPECT_EQ(weight_of_pair(in, LabelString{1}, LabelString{1}), 0.5);
  EXPECT_EQ(weight_of_pair(out, LabelString{2}, LabelString{2}), 0.5);
  const auto id = linear_from_string<RealSemiring>(LabelString{1, 3}, kAB);
  EXPECT_EQ(project(id, Side::kInput), id);
}

TEST(Invert, SwapsTapes) {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 20; ++i) {
    const auto t = testing::random_acyclic<RealSemiring>(rng);
    PairMap swapped;
    for (const auto& [k, w] : testing::pair_weights(t)) {
      swapped[{k.second, k.first}] = w;
    }
    EXPECT_EQ(testing::pair_weights(invert(t)), swapped);
  }
}

TEST(Trim, DropsDanglingState) {
  auto t = linear_from_string<RealSemiring>(LabelString{1, 2}, kAB);
  const StateId dead = t.add_state();
  t.add_arc(0, 3, 3, 1.0, dead);
  const auto r = trim(t);
  EXPECT_EQ(r.num_states(), t.num_states() - 1);
  EXPECT_EQ(testing::pair_weights(r), testing::pair_weights(t));
  EXPECT_EQ(trim(r), r);
}

TEST(Trim, PreservesRandomLanguages) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    const auto t = testing::random_acyclic<RealSemiring>(rng);
    EXPECT_EQ(testing::pair_weights(trim(t)), testing::pair_weights(t));
  }
}

TEST(EnumeratePaths, Basics) {
  EXPECT_TRUE(enumerate_paths(RealFst(kAB, kAB), 10).empty());
  const auto u =
      fst_union(linear_from_string<RealSemiring>(LabelString{1}, kAB),
                linear_from_string<RealSemiring>(LabelString{2, 2}, kAB));
  EXPECT_EQ(enumerate_paths(u, 10).size(), 2u);
}

TEST(ShortestDistance, TropicalMinimum) {
  TropicalFst t(kAB, kAB);
  t.add_states(2);
  t.add_arc(0, 1, 1, 3.0, 1);
  t.add_arc(0, 2, 2, 1.0, 1);
  t.set_initial(0);
  t.set_final(1);
  EXPECT_EQ(shortest_distance(t), 1.0);
  const auto p = best_path(t);
  ASSERT_TRUE(p);
  EXPECT_EQ(p->output, LabelString{2});
  EXPECT_EQ(p->total(t), 1.0);
}

TEST(ShortestDistance, LinearOwnWeight) {
  RealFst t(kAB, kAB);
  t.add_states(3);
  t.add_arc(0, 1, 1, 2.0, 1);
  t.add_arc(1, 2, 2, 3.0, 2);
  t.set_initial(0, 0.5);
  t.set_final(2, 4.0);
  EXPECT_EQ(shortest_distance(t), 12.0);
}

TEST(BestPath, TieGoesToSmallestOutput) {
  TropicalFst t(kAB, kAB);
  t.add_states(2);
  t.add_arc(0, 3, 3, 1.0, 1);
  t.add_arc(0, 1, 2, 1.0, 1);
  t.add_arc(0, 2, 1, 1.0, 1);
  t.set_initial(0);
  t.set_final(1);
  EXPECT_EQ(best_path(t)->output, LabelString{1});
}

TEST(BestPath, MatchesEnumerationMinimum) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 100; ++i) {
    const auto t = testing::random_acyclic<TropicalSemiring>(rng);
    double best = TropicalSemiring::zero();
    for (const auto& p : enumerate_paths(t, t.num_states())) {
      best = std::min(best, p.total(t));
    }
    EXPECT_EQ(shortest_distance(t), best);
    const auto p = best_path(t);
    if (std::isinf(best)) {
      EXPECT_FALSE(p);
    } else {
      ASSERT_TRUE(p);
      EXPECT_EQ(p->total(t), best);
    }
  }
}

TEST(ShortestDistance, RealMatchesEnumeration) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 100; ++i) {
    const auto t = testing::random_acyclic<RealSemiring>(rng);
    double sum = 0.0;
    for (const auto& p : enumerate_paths(t, t.num_states())) sum += p.total(t);
    EXPECT_EQ(shortest_distance(t), sum);
  }
}

TEST(ArcSort, OrdersByLabel) {
  RealFst t(kAB, kAB);
  t.add_states(2);
  t.add_arc(0, 3, 1, 1.0, 1);
  t.add_arc(0, 1, 2, 1.0, 1);
  t.add_arc(0, 2, 3, 1.0, 1);
  const auto in = arc_sort(t, Side::kInput);
  EXPECT_EQ(in.arcs(0)[0].ilabel, 1);
  EXPECT_EQ(in.arcs(0)[2].ilabel, 3);
  const auto out = arc_sort(t, Side::kOutput);
  EXPECT_EQ(out.arcs(0)[0].olabel, 1);
}

}  // namespace
}  // namespace ratk
