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

#pragma once

#include <algorithm>
#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include "ratk/error.hpp"

namespace ratk {

struct ClassMetrics {
  std::string name;
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct MetricsReport {
  std::vector<ClassMetrics> classes;  // sorted by name
  ClassMetrics macro;                 // unweighted mean of the rows above
  double overall_accuracy = 0.0;      // fraction of exact matches
};

inline double safe_ratio(double num, double den) {
  return den > 0 ? num / den : 0.0;
}

// Per-class one-vs-rest counts over the union of predicted and gold labels.
inline MetricsReport evaluate(const std::vector<std::string>& pred,
                              const std::vector<std::string>& gold) {
  if (pred.size() != gold.size()) {
    throw Error("evaluate: " + std::to_string(pred.size()) +
                " predictions for " + std::to_string(gold.size()) +
                " gold labels");
  }
  std::set<std::string> names(pred.begin(), pred.end());
  names.insert(gold.begin(), gold.end());
  const std::size_t n = pred.size();

  MetricsReport r;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < n; ++i) correct += pred[i] == gold[i];
  r.overall_accuracy = safe_ratio(static_cast<double>(correct),
                                  static_cast<double>(n));
  r.macro.name = "macro";
  for (const auto& c : names) {
    ClassMetrics m;
    m.name = c;
    for (std::size_t i = 0; i < n; ++i) {
      const bool p = pred[i] == c, g = gold[i] == c;
      m.tp += p && g;
      m.fp += p && !g;
      m.fn += !p && g;
      m.tn += !p && !g;
    }
    m.accuracy = safe_ratio(static_cast<double>(m.tp + m.tn),
                            static_cast<double>(n));
    m.precision = safe_ratio(static_cast<double>(m.tp),
                             static_cast<double>(m.tp + m.fp));
    m.recall = safe_ratio(static_cast<double>(m.tp),
                          static_cast<double>(m.tp + m.fn));
    m.f1 = safe_ratio(2.0 * m.precision * m.recall, m.precision + m.recall);
    r.macro.accuracy += m.accuracy;
    r.macro.precision += m.precision;
    r.macro.recall += m.recall;
    r.macro.f1 += m.f1;
    r.classes.push_back(std::move(m));
  }
  if (!r.classes.empty()) {
    const auto k = static_cast<double>(r.classes.size());
    r.macro.accuracy /= k;
    r.macro.precision /= k;
    r.macro.recall /= k;
    r.macro.f1 /= k;
  }
  return r;
}

inline std::string format_metrics(const MetricsReport& r) {
  std::size_t width = 5;
  for (const auto& c : r.classes) width = std::max(width, c.name.size());
  auto row = [&](const std::string& name, const std::string& a,
                 const std::string& p, const std::string& rc,
                 const std::string& f) {
    std::string s = name;
    s.append(width - name.size() + 2, ' ');
    for (const auto* cell : {&a, &p, &rc, &f}) {
      s.append(cell->size() < 10 ? 10 - cell->size() : 0, ' ');
      s += *cell;
    }
    return s + "\n";
  };
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return std::string(buf);
  };
  std::string out = row("class", "accuracy", "precision", "recall", "F1");
  for (const auto& c : r.classes) {
    out += row(c.name, num(c.accuracy), num(c.precision), num(c.recall),
               num(c.f1));
  }
  out += row(r.macro.name, num(r.macro.accuracy), num(r.macro.precision),
             num(r.macro.recall), num(r.macro.f1));
  return out;
}

}  // namespace ratk
