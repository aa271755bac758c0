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
// AT&T-style text serialization.
//
//   src<TAB>dst<TAB>ilabel<TAB>olabel[<TAB>weight]   arc, weight defaults to one
//   state[<TAB>weight]                               final state
//   @initial[<TAB>state[<TAB>weight]]                explicit initial list
//
// Without any @initial line the source of the first line is the sole initial
// state with weight one. The writer uses that short form whenever it is
// unambiguous and otherwise lists initial states explicitly (a bare
// "@initial" line declares an empty list). Labels are integers unless symbol
// tables are supplied. Weights print in shortest round-trip form, so
// write(read(text)) == text for any text produced by write.

#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "ratk/error.hpp"
#include "ratk/wfst.hpp"

namespace ratk {

// Bidirectional symbol <-> id map; id 0 is always epsilon.
class SymbolTable {
 public:
  explicit SymbolTable(std::string epsilon_symbol = "<eps>") {
    add(std::move(epsilon_symbol), kEpsilon);
  }

  void add(std::string symbol, Label id) {
    if (by_symbol_.contains(symbol)) {
      throw Error("duplicate symbol '" + symbol + "' in symbol table");
    }
    if (by_id_.contains(id)) {
      throw Error("duplicate id " + std::to_string(id) + " in symbol table");
    }
    by_id_.emplace(id, symbol);
    by_symbol_.emplace(std::move(symbol), id);
  }

  std::optional<Label> find(std::string_view symbol) const {
    auto it = by_symbol_.find(std::string(symbol));
    if (it == by_symbol_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<std::string> find(Label id) const {
    auto it = by_id_.find(id);
    if (it == by_id_.end()) return std::nullopt;
    return it->second;
  }

  // Ids other than epsilon.
  LabelSet labels() const {
    LabelSet out;
    for (const auto& [id, sym] : by_id_) {
      if (id != kEpsilon) out.insert(id);
    }
    return out;
  }

  const std::map<Label, std::string>& entries() const { return by_id_; }

  void write(std::ostream& os) const {
    for (const auto& [id, sym] : by_id_) os << sym << '\t' << id << '\n';
  }

  static SymbolTable read(std::istream& is) {
    std::string line;
    std::vector<std::pair<std::string, Label>> rows;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      if (line.empty()) continue;
      auto tab = line.find('\t');
      if (tab == std::string::npos) {
        throw Error("symbol table line " + std::to_string(lineno) +
                    ": expected symbol<TAB>id");
      }
      Label id = 0;
      const char* b = line.data() + tab + 1;
      const char* e = line.data() + line.size();
      auto [p, ec] = std::from_chars(b, e, id);
      if (ec != std::errc() || p != e || id < 0) {
        throw Error("symbol table line " + std::to_string(lineno) +
                    ": bad id");
      }
      rows.emplace_back(line.substr(0, tab), id);
    }
    SymbolTable t;
    t.by_id_.clear();
    t.by_symbol_.clear();
    for (auto& [sym, id] : rows) t.add(std::move(sym), id);
    if (!t.by_id_.contains(kEpsilon)) {
      throw Error("symbol table does not define id 0 (epsilon)");
    }
    return t;
  }

 private:
  std::map<Label, std::string> by_id_;
  std::map<std::string, Label> by_symbol_;
};

inline std::string format_weight(double w) {
  if (std::isinf(w)) return w > 0 ? "Infinity" : "-Infinity";
  if (std::isnan(w)) return "BadNumber";
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), w);
  return std::string(buf, p);
}

inline double parse_weight(std::string_view s) {
  if (s == "Infinity" || s == "inf" || s == "+inf") {
    return std::numeric_limits<double>::infinity();
  }
  if (s == "-Infinity" || s == "-inf") {
    return -std::numeric_limits<double>::infinity();
  }
  double w = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), w);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw Error("bad weight '" + std::string(s) + "'");
  }
  return w;
}

namespace detail {

inline std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

inline std::string label_text(Label l, const SymbolTable* syms) {
  if (!syms) return std::to_string(l);
  auto s = syms->find(l);
  if (!s) throw Error("label " + std::to_string(l) + " has no symbol");
  return *s;
}

inline Label parse_label(std::string_view s, const SymbolTable* syms,
                         std::size_t lineno) {
  if (syms) {
    auto id = syms->find(s);
    if (!id) {
      throw Error("line " + std::to_string(lineno) + ": unknown symbol '" +
                  std::string(s) + "'");
    }
    return *id;
  }
  Label l = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), l);
  if (ec != std::errc() || p != s.data() + s.size() || l < 0) {
    throw Error("line " + std::to_string(lineno) + ": bad label '" +
                std::string(s) + "'");
  }
  return l;
}

inline StateId parse_state(std::string_view s, std::size_t lineno) {
  StateId v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || v < 0) {
    throw Error("line " + std::to_string(lineno) + ": bad state '" +
                std::string(s) + "'");
  }
  return v;
}

}  // namespace detail

template <Semiring S>
void write_text(const Wfst<S>& t, std::ostream& os,
                const SymbolTable* isyms = nullptr,
                const SymbolTable* osyms = nullptr) {
  const auto n = static_cast<StateId>(t.num_states());
  auto emit_state = [&](StateId s) {
    for (const auto& a : t.arcs(s)) {
      os << s << '\t' << a.nextstate << '\t'
         << detail::label_text(a.ilabel, isyms) << '\t'
         << detail::label_text(a.olabel, osyms);
      if (!is_one<S>(a.weight)) os << '\t' << format_weight(a.weight);
      os << '\n';
    }
    if (t.is_final(s)) {
      os << s;
      if (!is_one<S>(t.final_weight(s))) {
        os << '\t' << format_weight(t.final_weight(s));
      }
      os << '\n';
    }
  };

  bool short_form = false;
  if (t.initial().size() == 1) {
    const auto& [s, w] = *t.initial().begin();
    short_form = is_one<S>(w) && (!t.arcs(s).empty() || t.is_final(s));
  }
  if (short_form) {
    const StateId start = t.initial().begin()->first;
    emit_state(start);
    for (StateId s = 0; s < n; ++s) {
      if (s != start) emit_state(s);
    }
    return;
  }
  // An empty machine with no lines needs no marker.
  bool has_lines = !t.finals().empty() || t.num_arcs() > 0;
  if (t.initial().empty()) {
    if (has_lines) os << "@initial\n";
  } else {
    for (const auto& [s, w] : t.initial()) {
      os << "@initial\t" << s;
      if (!is_one<S>(w)) os << '\t' << format_weight(w);
      os << '\n';
    }
  }
  for (StateId s = 0; s < n; ++s) emit_state(s);
}

template <Semiring S>
std::string to_text(const Wfst<S>& t, const SymbolTable* isyms = nullptr,
                    const SymbolTable* osyms = nullptr) {
  std::ostringstream os;
  write_text(t, os, isyms, osyms);
  return os.str();
}

// Alphabets are taken from the symbol tables when given, otherwise from
// the labels that occur, widened by the optional extra sets.
template <Semiring S>
Wfst<S> read_text(std::istream& is, const SymbolTable* isyms = nullptr,
                  const SymbolTable* osyms = nullptr,
                  const LabelSet& extra_input = {},
                  const LabelSet& extra_output = {}) {
  struct ArcRow {
    StateId src, dst;
    Label il, ol;
    double w;
  };
  std::vector<ArcRow> arcs;
  std::vector<std::pair<StateId, double>> finals, initials;
  bool explicit_initial = false;
  std::optional<StateId> first_source;
  StateId max_state = -1;
  LabelSet in = isyms ? isyms->labels() : LabelSet{};
  LabelSet out = osyms ? osyms->labels() : LabelSet{};

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto f = detail::split_tabs(line);
    if (f[0] == "@initial") {
      explicit_initial = true;
      if (f.size() == 1) continue;
      if (f.size() > 3) {
        throw Error("line " + std::to_string(lineno) + ": bad @initial");
      }
      StateId s = detail::parse_state(f[1], lineno);
      double w = f.size() == 3 ? parse_weight(f[2]) : S::one();
      initials.emplace_back(s, w);
      max_state = std::max(max_state, s);
      continue;
    }
    if (f.size() == 1 || f.size() == 2) {
      StateId s = detail::parse_state(f[0], lineno);
      double w = f.size() == 2 ? parse_weight(f[1]) : S::one();
      finals.emplace_back(s, w);
      if (!first_source) first_source = s;
      max_state = std::max(max_state, s);
    } else if (f.size() == 4 || f.size() == 5) {
      ArcRow r{detail::parse_state(f[0], lineno),
               detail::parse_state(f[1], lineno),
               detail::parse_label(f[2], isyms, lineno),
               detail::parse_label(f[3], osyms, lineno),
               f.size() == 5 ? parse_weight(f[4]) : S::one()};
      if (!first_source) first_source = r.src;
      max_state = std::max({max_state, r.src, r.dst});
      if (!isyms && r.il != kEpsilon) in.insert(r.il);
      if (!osyms && r.ol != kEpsilon) out.insert(r.ol);
      arcs.push_back(r);
    } else {
      throw Error("line " + std::to_string(lineno) +
                  ": expected 1, 2, 4 or 5 tab-separated fields");
    }
  }
  in.insert(extra_input.begin(), extra_input.end());
  out.insert(extra_output.begin(), extra_output.end());
  Wfst<S> t(in, out);
  t.add_states(static_cast<std::size_t>(max_state + 1));
  for (const auto& r : arcs) t.add_arc(r.src, r.il, r.ol, r.w, r.dst);
  for (const auto& [s, w] : finals) t.set_final(s, w);
  if (explicit_initial) {
    for (const auto& [s, w] : initials) t.set_initial(s, w);
  } else if (first_source) {
    t.set_initial(*first_source);
  }
  return t;
}

template <Semiring S>
Wfst<S> from_text(const std::string& text, const SymbolTable* isyms = nullptr,
                  const SymbolTable* osyms = nullptr) {
  std::istringstream is(text);
  return read_text<S>(is, isyms, osyms);
}

}  // namespace ratk
