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
// Rational operations on weighted transducers: sum (union), product
// (concatenation) and composition, plus the structural helpers the rest of
// the toolkit relies on (projection, inversion, trimming, arc sorting and
// topological ordering). None of them mutate their arguments.

#pragma once

#include <algorithm>
#include <array>
#include <deque>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "ratk/error.hpp"
#include "ratk/wfst.hpp"

namespace ratk {

enum class Side { kInput, kOutput };

// Kahn order over all states, or nullopt when the machine has a cycle.
template <Semiring S>
std::optional<std::vector<StateId>> topological_order(const Wfst<S>& t) {
  const auto n = static_cast<StateId>(t.num_states());
  std::vector<int> indegree(n, 0);
  for (StateId s = 0; s < n; ++s) {
    for (const auto& a : t.arcs(s)) ++indegree[a.nextstate];
  }
  std::deque<StateId> ready;
  for (StateId s = 0; s < n; ++s) {
    if (indegree[s] == 0) ready.push_back(s);
  }
  std::vector<StateId> order;
  order.reserve(n);
  while (!ready.empty()) {
    StateId s = ready.front();
    ready.pop_front();
    order.push_back(s);
    for (const auto& a : t.arcs(s)) {
      if (--indegree[a.nextstate] == 0) ready.push_back(a.nextstate);
    }
  }
  if (order.size() != static_cast<std::size_t>(n)) return std::nullopt;
  return order;
}

template <Semiring S>
bool is_acyclic(const Wfst<S>& t) {
  return topological_order(t).has_value();
}

template <Semiring S>
std::vector<StateId> require_topological_order(const Wfst<S>& t,
                                               const char* what) {
  auto order = topological_order(t);
  if (!order) {
    throw Error(std::string(what) + ": machine is cyclic");
  }
  return *std::move(order);
}

// Chain of |s|+1 states mapping s to itself with weight one on every arc.
template <Semiring S = RealSemiring>
Wfst<S> linear_from_string(std::span<const Label> s,
                           const LabelSet& alphabet) {
  for (Label l : s) {
    if (l == kEpsilon || !alphabet.contains(l)) {
      throw Error("symbol " + std::to_string(l) + " is not in the alphabet");
    }
  }
  Wfst<S> t(alphabet, alphabet);
  t.add_states(s.size() + 1);
  for (std::size_t i = 0; i < s.size(); ++i) {
    t.add_arc(static_cast<StateId>(i), s[i], s[i], S::one(),
              static_cast<StateId>(i + 1));
  }
  t.set_initial(0);
  t.set_final(static_cast<StateId>(s.size()));
  return t;
}

namespace detail {

template <Semiring S>
void copy_arcs_into(const Wfst<S>& src, Wfst<S>& dst, StateId offset) {
  for (StateId s = 0; s < static_cast<StateId>(src.num_states()); ++s) {
    for (auto a : src.arcs(s)) {
      a.nextstate += offset;
      dst.add_arc(s + offset, a);
    }
  }
}

}  // namespace detail

// Sum of two machines: a fresh super-initial state 0 reaches every initial
// state of both operands through an epsilon arc weighted by its lambda.
template <Semiring S>
Wfst<S> fst_union(const Wfst<S>& t1, const Wfst<S>& t2) {
  Wfst<S> r(t1.input_alphabet(), t1.output_alphabet());
  r.extend_alphabets(t2.input_alphabet(), t2.output_alphabet());
  const StateId off1 = 1;
  const auto off2 = static_cast<StateId>(1 + t1.num_states());
  r.add_states(1 + t1.num_states() + t2.num_states());
  detail::copy_arcs_into(t1, r, off1);
  detail::copy_arcs_into(t2, r, off2);
  r.set_initial(0);
  for (const auto& [s, w] : t1.initial()) {
    r.add_arc(0, kEpsilon, kEpsilon, w, s + off1);
  }
  for (const auto& [s, w] : t2.initial()) {
    r.add_arc(0, kEpsilon, kEpsilon, w, s + off2);
  }
  for (const auto& [s, w] : t1.finals()) r.set_final(s + off1, w);
  for (const auto& [s, w] : t2.finals()) r.set_final(s + off2, w);
  return r;
}

// Union of many machines under one super-initial state.
template <Semiring S>
Wfst<S> fst_union(std::span<const Wfst<S>> parts, const LabelSet& in,
                  const LabelSet& out) {
  Wfst<S> r(in, out);
  for (const auto& p : parts) {
    r.extend_alphabets(p.input_alphabet(), p.output_alphabet());
  }
  r.add_state();
  r.set_initial(0);
  StateId offset = 1;
  for (const auto& p : parts) {
    r.add_states(p.num_states());
    detail::copy_arcs_into(p, r, offset);
    for (const auto& [s, w] : p.initial()) {
      r.add_arc(0, kEpsilon, kEpsilon, w, s + offset);
    }
    for (const auto& [s, w] : p.finals()) r.set_final(s + offset, w);
    offset += static_cast<StateId>(p.num_states());
  }
  return r;
}

// Product of two machines: every final state of t1 is bridged to every
// initial state of t2 by an epsilon arc weighted rho1 (x) lambda2.
template <Semiring S>
Wfst<S> concat(const Wfst<S>& t1, const Wfst<S>& t2) {
  Wfst<S> r(t1.input_alphabet(), t1.output_alphabet());
  r.extend_alphabets(t2.input_alphabet(), t2.output_alphabet());
  const auto off2 = static_cast<StateId>(t1.num_states());
  r.add_states(t1.num_states() + t2.num_states());
  detail::copy_arcs_into(t1, r, 0);
  detail::copy_arcs_into(t2, r, off2);
  for (const auto& [s, w] : t1.initial()) r.set_initial(s, w);
  for (const auto& [f, rho] : t1.finals()) {
    for (const auto& [i, lambda] : t2.initial()) {
      r.add_arc(f, kEpsilon, kEpsilon, S::times(rho, lambda), i + off2);
    }
  }
  for (const auto& [s, w] : t2.finals()) r.set_final(s + off2, w);
  return r;
}

// Stable sort of every state's arcs by the label on the given tape.
template <Semiring S>
Wfst<S> arc_sort(const Wfst<S>& t, Side side) {
  Wfst<S> r = t;
  for (StateId s = 0; s < static_cast<StateId>(r.num_states()); ++s) {
    auto& arcs = r.mutable_arcs(s);
    if (side == Side::kInput) {
      std::stable_sort(arcs.begin(), arcs.end(),
                       [](const auto& a, const auto& b) {
                         return a.ilabel < b.ilabel;
                       });
    } else {
      std::stable_sort(arcs.begin(), arcs.end(),
                       [](const auto& a, const auto& b) {
                         return a.olabel < b.olabel;
                       });
    }
  }
  return r;
}

// Keeps only states on some initial-to-final path, preserving their order.
template <Semiring S>
Wfst<S> trim(const Wfst<S>& t) {
  const auto n = static_cast<StateId>(t.num_states());
  std::vector<bool> accessible(n, false), coaccessible(n, false);
  std::vector<StateId> stack;
  for (const auto& [s, w] : t.initial()) {
    accessible[s] = true;
    stack.push_back(s);
  }
  while (!stack.empty()) {
    StateId s = stack.back();
    stack.pop_back();
    for (const auto& a : t.arcs(s)) {
      if (!accessible[a.nextstate]) {
        accessible[a.nextstate] = true;
        stack.push_back(a.nextstate);
      }
    }
  }
  std::vector<std::vector<StateId>> reverse(n);
  for (StateId s = 0; s < n; ++s) {
    for (const auto& a : t.arcs(s)) reverse[a.nextstate].push_back(s);
  }
  for (const auto& [s, w] : t.finals()) {
    coaccessible[s] = true;
    stack.push_back(s);
  }
  while (!stack.empty()) {
    StateId s = stack.back();
    stack.pop_back();
    for (StateId p : reverse[s]) {
      if (!coaccessible[p]) {
        coaccessible[p] = true;
        stack.push_back(p);
      }
    }
  }
  std::vector<StateId> remap(n, kNoState);
  Wfst<S> r(t.input_alphabet(), t.output_alphabet());
  for (StateId s = 0; s < n; ++s) {
    if (accessible[s] && coaccessible[s]) remap[s] = r.add_state();
  }
  for (StateId s = 0; s < n; ++s) {
    if (remap[s] == kNoState) continue;
    for (auto a : t.arcs(s)) {
      if (remap[a.nextstate] == kNoState) continue;
      a.nextstate = remap[a.nextstate];
      r.add_arc(remap[s], a);
    }
  }
  for (const auto& [s, w] : t.initial()) {
    if (remap[s] != kNoState) r.set_initial(remap[s], w);
  }
  for (const auto& [s, w] : t.finals()) {
    if (remap[s] != kNoState) r.set_final(remap[s], w);
  }
  return r;
}

// Acceptor over the chosen tape; weights preserved.
template <Semiring S>
Wfst<S> project(const Wfst<S>& t, Side side) {
  const LabelSet& alpha =
      side == Side::kInput ? t.input_alphabet() : t.output_alphabet();
  Wfst<S> r(alpha, alpha);
  r.add_states(t.num_states());
  for (StateId s = 0; s < static_cast<StateId>(t.num_states()); ++s) {
    for (auto a : t.arcs(s)) {
      if (side == Side::kInput) {
        a.olabel = a.ilabel;
      } else {
        a.ilabel = a.olabel;
      }
      r.add_arc(s, a);
    }
  }
  for (const auto& [s, w] : t.initial()) r.set_initial(s, w);
  for (const auto& [s, w] : t.finals()) r.set_final(s, w);
  return r;
}

// Swaps input and output tapes.
template <Semiring S>
Wfst<S> invert(const Wfst<S>& t) {
  Wfst<S> r(t.output_alphabet(), t.input_alphabet());
  r.add_states(t.num_states());
  for (StateId s = 0; s < static_cast<StateId>(t.num_states()); ++s) {
    for (auto a : t.arcs(s)) {
      std::swap(a.ilabel, a.olabel);
      r.add_arc(s, a);
    }
  }
  for (const auto& [s, w] : t.initial()) r.set_initial(s, w);
  for (const auto& [s, w] : t.finals()) r.set_final(s, w);
  return r;
}

// Composition t1 o t2 with the three-state epsilon-matching filter.
//
// Filter state 0: last move consumed a real symbol (or start); any move.
// Filter state 1: t1 advanced alone on an output-epsilon; only t1-alone
//                 moves or a real match may follow.
// Filter state 2: t2 advanced alone on an input-epsilon; only t2-alone
//                 moves or a real match may follow.
// Simultaneous epsilon moves are allowed from state 0 only. This leaves
// exactly one interleaving per pair of matched paths.
template <Semiring S>
Wfst<S> compose(const Wfst<S>& t1, const Wfst<S>& t2) {
  if (t1.output_alphabet() != t2.input_alphabet()) {
    throw Error(
        "compose: output alphabet of the left machine does not match the "
        "input alphabet of the right machine");
  }
  const Wfst<S> right = arc_sort(t2, Side::kInput);

  using Key = std::tuple<StateId, StateId, int>;
  std::map<Key, StateId> ids;
  std::deque<Key> queue;
  Wfst<S> r(t1.input_alphabet(), t2.output_alphabet());

  auto state_of = [&](StateId q1, StateId q2, int f) {
    Key k{q1, q2, f};
    auto it = ids.find(k);
    if (it != ids.end()) return it->second;
    StateId id = r.add_state();
    ids.emplace(k, id);
    queue.push_back(k);
    return id;
  };

  for (const auto& [i1, w1] : t1.initial()) {
    for (const auto& [i2, w2] : right.initial()) {
      StateId s = state_of(i1, i2, 0);
      r.set_initial(s, S::plus(r.initial_weight(s), S::times(w1, w2)));
    }
  }

  while (!queue.empty()) {
    const auto [q1, q2, f] = queue.front();
    queue.pop_front();
    const StateId src = ids.at(Key{q1, q2, f});

    const auto right_arcs = right.arcs(q2);
    auto matching = [&](Label l) {
      return std::equal_range(
          right_arcs.begin(), right_arcs.end(), l,
          [](const auto& x, const auto& y) {
            if constexpr (std::is_same_v<std::decay_t<decltype(x)>, Label>) {
              return x < y.ilabel;
            } else {
              return x.ilabel < y;
            }
          });
    };

    for (const auto& a1 : t1.arcs(q1)) {
      if (a1.olabel != kEpsilon) {
        auto [lo, hi] = matching(a1.olabel);
        for (auto it = lo; it != hi; ++it) {
          StateId dst = state_of(a1.nextstate, it->nextstate, 0);
          r.add_arc(src, a1.ilabel, it->olabel,
                    S::times(a1.weight, it->weight), dst);
        }
        continue;
      }
      // t1 output-epsilon: move alone.
      if (f == 0 || f == 1) {
        StateId dst = state_of(a1.nextstate, q2, 1);
        r.add_arc(src, a1.ilabel, kEpsilon, a1.weight, dst);
      }
      // Both epsilon together.
      if (f == 0) {
        auto [lo, hi] = matching(kEpsilon);
        for (auto it = lo; it != hi; ++it) {
          StateId dst = state_of(a1.nextstate, it->nextstate, 0);
          r.add_arc(src, a1.ilabel, it->olabel,
                    S::times(a1.weight, it->weight), dst);
        }
      }
    }
    // t2 input-epsilon: move alone.
    if (f == 0 || f == 2) {
      auto [lo, hi] = matching(kEpsilon);
      for (auto it = lo; it != hi; ++it) {
        StateId dst = state_of(q1, it->nextstate, 2);
        r.add_arc(src, kEpsilon, it->olabel, it->weight, dst);
      }
    }
    const auto rho = S::times(t1.final_weight(q1), right.final_weight(q2));
    if (!is_zero<S>(rho)) r.set_final(src, rho);
  }
  return trim(r);
}

// Returns a copy whose alphabets are widened to include the given sets.
template <Semiring S>
Wfst<S> with_alphabets(Wfst<S> t, const LabelSet& in, const LabelSet& out) {
  t.extend_alphabets(in, out);
  return t;
}

}  // namespace ratk
