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
// Weight algebras (K, plus, times, zero, one). Weights are plain doubles;
// the semiring is a stateless policy type selected at compile time.

#pragma once

#include <algorithm>
#include <concepts>
#include <limits>
#include <string_view>

namespace ratk {

template <class S>
concept Semiring = requires(typename S::Weight a, typename S::Weight b) {
  { S::zero() } -> std::same_as<typename S::Weight>;
  { S::one() } -> std::same_as<typename S::Weight>;
  { S::plus(a, b) } -> std::same_as<typename S::Weight>;
  { S::times(a, b) } -> std::same_as<typename S::Weight>;
  { S::name } -> std::convertible_to<std::string_view>;
};

// Probability / count semiring (+, *, 0, 1).
struct RealSemiring {
  using Weight = double;
  static constexpr std::string_view name = "real";
  static constexpr Weight zero() { return 0.0; }
  static constexpr Weight one() { return 1.0; }
  static constexpr Weight plus(Weight a, Weight b) { return a + b; }
  static constexpr Weight times(Weight a, Weight b) { return a * b; }
};

// Min-plus semiring (min, +, +inf, 0).
struct TropicalSemiring {
  using Weight = double;
  static constexpr std::string_view name = "tropical";
  static constexpr Weight zero() {
    return std::numeric_limits<double>::infinity();
  }
  static constexpr Weight one() { return 0.0; }
  static constexpr Weight plus(Weight a, Weight b) { return std::min(a, b); }
  static constexpr Weight times(Weight a, Weight b) {
    // inf + x stays inf, which keeps zero annihilating.
    return a + b;
  }
};

static_assert(Semiring<RealSemiring>);
static_assert(Semiring<TropicalSemiring>);

template <Semiring S>
constexpr bool is_zero(typename S::Weight w) {
  return w == S::zero();
}

template <Semiring S>
constexpr bool is_one(typename S::Weight w) {
  return w == S::one();
}

}  // namespace ratk
