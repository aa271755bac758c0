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
// Path-level evaluation: pair weights, exhaustive path enumeration, and
// shortest distance / best path on acyclic machines.

#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ratk/error.hpp"
#include "ratk/operations.hpp"
#include "ratk/wfst.hpp"

namespace ratk {

template <Semiring S>
struct Path {
  using Weight = typename S::Weight;
  std::vector<StateId> states;  // origin first, destination last
  std::vector<Arc<S>> arcs;
  Weight weight = S::one();     // times over the arcs only
  LabelString input;            // epsilon-free
  LabelString output;           // epsilon-free

  StateId origin() const { return states.front(); }
  StateId destination() const { return states.back(); }

  // lambda(origin) (x) weight (x) rho(destination).
  Weight total(const Wfst<S>& t) const {
    return S::times(S::times(t.initial_weight(origin()), weight),
                    t.final_weight(destination()));
  }
};

// Every accepting path with at most max_arcs arcs, each exactly once, in
// depth-first order from the initial states (ascending ids).
template <Semiring S>
std::vector<Path<S>> enumerate_paths(const Wfst<S>& t, std::size_t max_arcs) {
  std::vector<Path<S>> out;
  Path<S> cur;
  auto dfs = [&](auto&& self, StateId s) -> void {
    if (t.is_final(s)) out.push_back(cur);
    if (cur.arcs.size() >= max_arcs) return;
    for (const auto& a : t.arcs(s)) {
      const auto saved_weight = cur.weight;
      cur.arcs.push_back(a);
      cur.states.push_back(a.nextstate);
      cur.weight = S::times(cur.weight, a.weight);
      if (a.ilabel != kEpsilon) cur.input.push_back(a.ilabel);
      if (a.olabel != kEpsilon) cur.output.push_back(a.olabel);
      self(self, a.nextstate);
      if (a.olabel != kEpsilon) cur.output.pop_back();
      if (a.ilabel != kEpsilon) cur.input.pop_back();
      cur.weight = saved_weight;
      cur.states.pop_back();
      cur.arcs.pop_back();
    }
  };
  for (const auto& [s, w] : t.initial()) {
    cur = Path<S>{};
    cur.states.push_back(s);
    dfs(dfs, s);
  }
  return out;
}

// [[t]](x, y): (+) over accepting paths labelled (x, y) of
// lambda (x) w (x) rho.
//
// Acyclic machines are evaluated exactly by dynamic programming over
// (state, input position, output position) in topological order. Cyclic
// machines need an explicit bound on the number of arcs per path; the sum
// then ranges over paths with at most max_arcs arcs.
template <Semiring S>
typename S::Weight weight_of_pair(const Wfst<S>& t, std::span<const Label> x,
                                  std::span<const Label> y,
                                  std::optional<std::size_t> max_arcs = {}) {
  using Weight = typename S::Weight;
  const std::size_t nx = x.size() + 1, ny = y.size() + 1;
  const std::size_t n = t.num_states();
  auto idx = [&](StateId s, std::size_t i, std::size_t j) {
    return (static_cast<std::size_t>(s) * nx + i) * ny + j;
  };
  auto advance = [&](const Arc<S>& a, std::size_t i, std::size_t j,
                     std::size_t& ni, std::size_t& nj) {
    ni = i;
    nj = j;
    if (a.ilabel != kEpsilon) {
      if (i >= x.size() || x[i] != a.ilabel) return false;
      ni = i + 1;
    }
    if (a.olabel != kEpsilon) {
      if (j >= y.size() || y[j] != a.olabel) return false;
      nj = j + 1;
    }
    return true;
  };

  auto order = topological_order(t);
  Weight total = S::zero();
  if (order) {
    std::vector<Weight> alpha(n * nx * ny, S::zero());
    for (const auto& [s, w] : t.initial()) alpha[idx(s, 0, 0)] = w;
    for (StateId s : *order) {
      for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < ny; ++j) {
          const Weight cur = alpha[idx(s, i, j)];
          if (is_zero<S>(cur)) continue;
          for (const auto& a : t.arcs(s)) {
            std::size_t ni, nj;
            if (!advance(a, i, j, ni, nj)) continue;
            auto& slot = alpha[idx(a.nextstate, ni, nj)];
            slot = S::plus(slot, S::times(cur, a.weight));
          }
        }
      }
    }
    for (const auto& [f, rho] : t.finals()) {
      total = S::plus(total, S::times(alpha[idx(f, x.size(), y.size())], rho));
    }
    return total;
  }

  if (!max_arcs) {
    throw Error(
        "weight_of_pair: machine is not regulated under enumeration (cyclic "
        "and no path-length bound given)");
  }
  // Layered DP: layer k holds weights of paths with exactly k arcs.
  std::vector<Weight> layer(n * nx * ny, S::zero());
  for (const auto& [s, w] : t.initial()) layer[idx(s, 0, 0)] = w;
  for (std::size_t k = 0;; ++k) {
    for (const auto& [f, rho] : t.finals()) {
      total = S::plus(total, S::times(layer[idx(f, x.size(), y.size())], rho));
    }
    if (k == *max_arcs) break;
    std::vector<Weight> next(n * nx * ny, S::zero());
    bool any = false;
    for (StateId s = 0; s < static_cast<StateId>(n); ++s) {
      for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < ny; ++j) {
          const Weight cur = layer[idx(s, i, j)];
          if (is_zero<S>(cur)) continue;
          for (const auto& a : t.arcs(s)) {
            std::size_t ni, nj;
            if (!advance(a, i, j, ni, nj)) continue;
            auto& slot = next[idx(a.nextstate, ni, nj)];
            slot = S::plus(slot, S::times(cur, a.weight));
            any = true;
          }
        }
      }
    }
    if (!any) break;
    layer.swap(next);
  }
  return total;
}

// (+) over all accepting paths of lambda (x) w (x) rho. Acyclic only.
template <Semiring S>
typename S::Weight shortest_distance(const Wfst<S>& t) {
  const auto order = require_topological_order(t, "shortest_distance");
  std::vector<typename S::Weight> d(t.num_states(), S::zero());
  for (const auto& [s, w] : t.initial()) d[s] = w;
  auto total = S::zero();
  for (StateId s : order) {
    if (is_zero<S>(d[s])) continue;
    for (const auto& a : t.arcs(s)) {
      d[a.nextstate] = S::plus(d[a.nextstate], S::times(d[s], a.weight));
    }
    total = S::plus(total, S::times(d[s], t.final_weight(s)));
  }
  return total;
}

// Minimum-weight accepting path of an acyclic tropical machine, or nullopt
// if nothing is accepted. Among equal-weight paths the smallest output
// string wins, then the smallest state-id sequence.
inline std::optional<Path<TropicalSemiring>> best_path(const TropicalFst& t) {
  using S = TropicalSemiring;
  const auto order = require_topological_order(t, "best_path");
  const std::size_t n = t.num_states();

  // beta[s]: best completion weight from s (including rho).
  std::vector<double> beta(n, S::zero());
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const StateId s = *it;
    double b = t.final_weight(s);
    for (const auto& a : t.arcs(s)) {
      b = S::plus(b, S::times(a.weight, beta[a.nextstate]));
    }
    beta[s] = b;
  }

  // Lexicographically smallest (output, states) suffix among tight
  // continuations. Lexicographic order is stable under a shared prefix, so
  // the per-state minimum composes backwards.
  struct Suffix {
    bool valid = false;
    LabelString output;
    std::vector<StateId> states;  // states after s
    std::optional<std::size_t> arc;  // index of the first arc, none = stop
  };
  auto less = [](const LabelString& o1, const std::vector<StateId>& s1,
                 const LabelString& o2, const std::vector<StateId>& s2) {
    if (o1 != o2) return o1 < o2;
    return s1 < s2;
  };
  std::vector<Suffix> best(n);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const StateId s = *it;
    if (is_zero<S>(beta[s])) continue;
    Suffix cand;
    if (t.final_weight(s) == beta[s]) {
      cand.valid = true;
    }
    const auto arcs = t.arcs(s);
    for (std::size_t k = 0; k < arcs.size(); ++k) {
      const auto& a = arcs[k];
      const Suffix& next = best[a.nextstate];
      if (!next.valid || S::times(a.weight, beta[a.nextstate]) != beta[s]) {
        continue;
      }
      LabelString out;
      if (a.olabel != kEpsilon) out.push_back(a.olabel);
      out.insert(out.end(), next.output.begin(), next.output.end());
      std::vector<StateId> st{a.nextstate};
      st.insert(st.end(), next.states.begin(), next.states.end());
      if (!cand.valid || less(out, st, cand.output, cand.states)) {
        cand = Suffix{true, std::move(out), std::move(st), k};
      }
    }
    best[s] = std::move(cand);
  }

  double best_weight = S::zero();
  for (const auto& [s, lambda] : t.initial()) {
    best_weight = S::plus(best_weight, S::times(lambda, beta[s]));
  }
  if (is_zero<S>(best_weight)) return std::nullopt;

  std::optional<StateId> start;
  for (const auto& [s, lambda] : t.initial()) {
    if (!best[s].valid || S::times(lambda, beta[s]) != best_weight) continue;
    if (!start) {
      start = s;
      continue;
    }
    const auto& b = best[s];
    const auto& c = best[*start];
    std::vector<StateId> bs{s}, cs{*start};
    bs.insert(bs.end(), b.states.begin(), b.states.end());
    cs.insert(cs.end(), c.states.begin(), c.states.end());
    if (less(b.output, bs, c.output, cs)) start = s;
  }

  Path<S> p;
  StateId s = *start;
  p.states.push_back(s);
  while (best[s].arc) {
    const auto& a = t.arcs(s)[*best[s].arc];
    p.arcs.push_back(a);
    p.weight = S::times(p.weight, a.weight);
    if (a.ilabel != kEpsilon) p.input.push_back(a.ilabel);
    if (a.olabel != kEpsilon) p.output.push_back(a.olabel);
    s = a.nextstate;
    p.states.push_back(s);
  }
  return p;
}

}  // namespace ratk
