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
// Weighted finite-state transducer T = (in, out, Q, I, F, E, lambda, rho).
//
// States are dense ids 0..num_states()-1. Initial and final weights are
// partial maps; binding the semiring zero erases the entry, so absence and
// zero are the same thing. Every label on an arc must belong to the declared
// input/output alphabet or be epsilon (label 0).

#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ratk/error.hpp"
#include "ratk/semiring.hpp"

namespace ratk {

using Label = std::int32_t;
using StateId = std::int32_t;
using LabelString = std::vector<Label>;
using LabelSet = std::set<Label>;

inline constexpr Label kEpsilon = 0;
inline constexpr StateId kNoState = -1;

template <Semiring S>
struct Arc {
  using Weight = typename S::Weight;
  Label ilabel = kEpsilon;
  Label olabel = kEpsilon;
  Weight weight = S::one();
  StateId nextstate = kNoState;

  friend bool operator==(const Arc&, const Arc&) = default;
};

template <Semiring S>
class Wfst {
 public:
  using Semiring = S;
  using Weight = typename S::Weight;
  using ArcType = Arc<S>;

  Wfst() = default;
  Wfst(LabelSet input_alphabet, LabelSet output_alphabet)
      : input_alphabet_(std::move(input_alphabet)),
        output_alphabet_(std::move(output_alphabet)) {
    input_alphabet_.erase(kEpsilon);
    output_alphabet_.erase(kEpsilon);
  }

  StateId add_state() {
    arcs_.emplace_back();
    return static_cast<StateId>(arcs_.size() - 1);
  }

  void add_states(std::size_t n) { arcs_.resize(arcs_.size() + n); }

  void add_arc(StateId src, const ArcType& arc) {
    check_state(src);
    check_state(arc.nextstate);
    if (arc.ilabel != kEpsilon && !input_alphabet_.contains(arc.ilabel)) {
      throw Error("input label " + std::to_string(arc.ilabel) +
                  " is not in the input alphabet");
    }
    if (arc.olabel != kEpsilon && !output_alphabet_.contains(arc.olabel)) {
      throw Error("output label " + std::to_string(arc.olabel) +
                  " is not in the output alphabet");
    }
    arcs_[src].push_back(arc);
  }

  void add_arc(StateId src, Label ilabel, Label olabel, Weight w,
               StateId dst) {
    add_arc(src, ArcType{ilabel, olabel, w, dst});
  }

  void set_initial(StateId s, Weight w = S::one()) {
    check_state(s);
    if (is_zero<S>(w)) {
      initial_.erase(s);
    } else {
      initial_[s] = w;
    }
  }

  void set_final(StateId s, Weight w = S::one()) {
    check_state(s);
    if (is_zero<S>(w)) {
      final_.erase(s);
    } else {
      final_[s] = w;
    }
  }

  std::size_t num_states() const { return arcs_.size(); }
  std::size_t num_arcs() const {
    std::size_t n = 0;
    for (const auto& v : arcs_) n += v.size();
    return n;
  }

  std::span<const ArcType> arcs(StateId s) const {
    check_state(s);
    return arcs_[s];
  }

  // Mutable access for in-place arc reordering; labels must stay valid.
  std::vector<ArcType>& mutable_arcs(StateId s) {
    check_state(s);
    return arcs_[s];
  }

  Weight initial_weight(StateId s) const {
    auto it = initial_.find(s);
    return it == initial_.end() ? S::zero() : it->second;
  }
  Weight final_weight(StateId s) const {
    auto it = final_.find(s);
    return it == final_.end() ? S::zero() : it->second;
  }
  bool is_initial(StateId s) const { return initial_.contains(s); }
  bool is_final(StateId s) const { return final_.contains(s); }

  const std::map<StateId, Weight>& initial() const { return initial_; }
  const std::map<StateId, Weight>& finals() const { return final_; }

  const LabelSet& input_alphabet() const { return input_alphabet_; }
  const LabelSet& output_alphabet() const { return output_alphabet_; }

  // Widens the declared alphabets. Existing arcs stay valid.
  void extend_alphabets(const LabelSet& in, const LabelSet& out) {
    for (Label l : in) {
      if (l != kEpsilon) input_alphabet_.insert(l);
    }
    for (Label l : out) {
      if (l != kEpsilon) output_alphabet_.insert(l);
    }
  }

  friend bool operator==(const Wfst&, const Wfst&) = default;

 private:
  void check_state(StateId s) const {
    if (s < 0 || static_cast<std::size_t>(s) >= arcs_.size()) {
      throw Error("state " + std::to_string(s) + " does not exist");
    }
  }

  LabelSet input_alphabet_;
  LabelSet output_alphabet_;
  std::vector<std::vector<ArcType>> arcs_;
  std::map<StateId, Weight> initial_;
  std::map<StateId, Weight> final_;
};

using RealFst = Wfst<RealSemiring>;
using TropicalFst = Wfst<TropicalSemiring>;

}  // namespace ratk
