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
// C-SVM on a precomputed Gram matrix, trained by sequential minimal
// optimization, and the one-vs-rest wrapper used for text categories.
//
// The dual is   min_a  1/2 a'Qa - e'a,  Q_ij = y_i y_j K_ij,
//               s.t.   0 <= a_i <= C,  y'a = 0.
// Each step takes the maximal KKT-violating pair (i in I_up with the
// largest -y G, j in I_low with the smallest -y G, lowest index on ties)
// and solves the two-variable subproblem analytically. Training stops
// when the violation gap drops below tol.

#pragma once

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ratk/error.hpp"
#include "ratk/kernel.hpp"
#include "ratk/parallel.hpp"

namespace ratk {

struct BinaryModel {
  std::vector<std::size_t> support;  // indices into the training documents
  std::vector<double> alpha_y;       // alpha_i * y_i, aligned with support
  double bias = 0.0;
  double C = 1.0;

  // sum_i alpha_i y_i K(x_i, x) + b over the support vectors.
  double decision(std::span<const double> k_row) const {
    double f = bias;
    for (std::size_t s = 0; s < support.size(); ++s) {
      f += alpha_y[s] * k_row[support[s]];
    }
    return f;
  }
};

struct SmoOptions {
  double C = 1.0;
  double tol = 1e-3;
  std::size_t max_iterations = 10'000'000;
  bool record_objective = false;
  bool check_psd = true;
};

struct SmoResult {
  BinaryModel model;
  std::vector<double> alpha;            // full dual vector
  std::vector<double> decision_values;  // f(x_i) on the training points
  std::vector<double> objective;        // dual objective after each step
  std::size_t iterations = 0;
  bool jittered = false;
  bool converged = false;
};

inline constexpr double kPsdJitter = 1e-8;

// Adds kPsdJitter to the diagonal when the smallest eigenvalue is below
// -1e-9 times the largest. Returns whether it did.
inline bool jitter_if_not_psd(Eigen::MatrixXd& k) {
  const auto [lo, hi] = eigen_range(k);
  if (lo >= -1e-9 * std::max(std::abs(hi), 1e-300)) return false;
  std::cerr << "warning: kernel matrix is not positive semidefinite "
            << "(smallest eigenvalue " << lo << "), adding " << kPsdJitter
            << " to the diagonal\n";
  k.diagonal().array() += kPsdJitter;
  return true;
}

inline SmoResult smo_train(const Eigen::MatrixXd& gram,
                           std::span<const int> y, const SmoOptions& opt) {
  const auto n = static_cast<std::size_t>(gram.rows());
  if (gram.rows() != gram.cols() || y.size() != n) {
    throw Error("smo_train: kernel and labels are not aligned");
  }
  if (!(opt.C > 0)) throw Error("smo_train: C must be positive");
  bool pos = false, neg = false;
  for (int v : y) {
    if (v == 1) {
      pos = true;
    } else if (v == -1) {
      neg = true;
    } else {
      throw Error("smo_train: labels must be +1 or -1");
    }
  }
  if (!pos || !neg) {
    throw Error("smo_train: degenerate problem, only one class present");
  }

  SmoResult res;
  Eigen::MatrixXd k = gram;
  if (opt.check_psd) res.jittered = jitter_if_not_psd(k);

  const double C = opt.C;
  constexpr double kTau = 1e-12;
  std::vector<double> alpha(n, 0.0), grad(n, -1.0);
  auto q = [&](std::size_t i, std::size_t j) { return y[i] * y[j] * k(i, j); };
  auto in_up = [&](std::size_t t) {
    return (y[t] == 1 && alpha[t] < C) || (y[t] == -1 && alpha[t] > 0);
  };
  auto in_low = [&](std::size_t t) {
    return (y[t] == 1 && alpha[t] > 0) || (y[t] == -1 && alpha[t] < C);
  };
  auto objective = [&] {
    double d = 0.0;
    for (std::size_t t = 0; t < n; ++t) d += alpha[t] * (1.0 - grad[t]);
    return 0.5 * d;
  };

  while (res.iterations < opt.max_iterations) {
    std::optional<std::size_t> i, j;
    double gmax = -std::numeric_limits<double>::infinity();
    double gmin = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n; ++t) {
      const double v = -y[t] * grad[t];
      if (in_up(t) && v > gmax) {
        gmax = v;
        i = t;
      }
      if (in_low(t) && v < gmin) {
        gmin = v;
        j = t;
      }
    }
    if (!i || !j || gmax - gmin < opt.tol) {
      res.converged = true;
      break;
    }
    const std::size_t a = *i, b = *j;
    const double old_a = alpha[a], old_b = alpha[b];
    if (y[a] != y[b]) {
      double quad = k(a, a) + k(b, b) + 2.0 * q(a, b);
      if (quad <= 0) quad = kTau;
      const double delta = (-grad[a] - grad[b]) / quad;
      const double diff = alpha[a] - alpha[b];
      alpha[a] += delta;
      alpha[b] += delta;
      if (diff > 0) {
        if (alpha[b] < 0) {
          alpha[b] = 0;
          alpha[a] = diff;
        }
      } else if (alpha[a] < 0) {
        alpha[a] = 0;
        alpha[b] = -diff;
      }
      if (diff > 0) {
        if (alpha[a] > C) {
          alpha[a] = C;
          alpha[b] = C - diff;
        }
      } else if (alpha[b] > C) {
        alpha[b] = C;
        alpha[a] = C + diff;
      }
    } else {
      double quad = k(a, a) + k(b, b) - 2.0 * q(a, b);
      if (quad <= 0) quad = kTau;
      const double delta = (grad[a] - grad[b]) / quad;
      const double sum = alpha[a] + alpha[b];
      alpha[a] -= delta;
      alpha[b] += delta;
      if (sum > C) {
        if (alpha[a] > C) {
          alpha[a] = C;
          alpha[b] = sum - C;
        }
      } else if (alpha[b] < 0) {
        alpha[b] = 0;
        alpha[a] = sum;
      }
      if (sum > C) {
        if (alpha[b] > C) {
          alpha[b] = C;
          alpha[a] = sum - C;
        }
      } else if (alpha[a] < 0) {
        alpha[a] = 0;
        alpha[b] = sum;
      }
    }
    const double da = alpha[a] - old_a, db = alpha[b] - old_b;
    for (std::size_t t = 0; t < n; ++t) {
      grad[t] += q(t, a) * da + q(t, b) * db;
    }
    ++res.iterations;
    if (opt.record_objective) res.objective.push_back(objective());
  }

  // Bias from free vectors, or the midpoint of the feasible interval.
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double sum_free = 0.0;
  std::size_t nr_free = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = y[t] * grad[t];
    if (alpha[t] >= C) {
      if (y[t] == -1) {
        ub = std::min(ub, yg);
      } else {
        lb = std::max(lb, yg);
      }
    } else if (alpha[t] <= 0) {
      if (y[t] == 1) {
        ub = std::min(ub, yg);
      } else {
        lb = std::max(lb, yg);
      }
    } else {
      ++nr_free;
      sum_free += yg;
    }
  }
  const double rho = nr_free > 0 ? sum_free / static_cast<double>(nr_free)
                                 : (ub + lb) / 2.0;

  res.model.C = C;
  res.model.bias = -rho;
  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] > 0) {
      res.model.support.push_back(t);
      res.model.alpha_y.push_back(alpha[t] * y[t]);
    }
  }
  res.decision_values.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    // f(x_t) = y_t (G_t + 1) - rho, using the unjittered kernel.
    double f = res.model.bias;
    for (std::size_t s = 0; s < res.model.support.size(); ++s) {
      f += res.model.alpha_y[s] * gram(res.model.support[s], t);
    }
    res.decision_values[t] = f;
  }
  res.alpha = std::move(alpha);
  return res;
}

struct OvrModel {
  std::vector<std::string> classes;  // sorted
  std::vector<BinaryModel> models;   // aligned with classes
  std::vector<std::string> training_names;
  std::size_t order = 0;
  bool normalized = false;
};

struct Prediction {
  std::string label;
  std::vector<double> decision_values;  // aligned with OvrModel::classes
};

// One binary problem per class (+1 = class, -1 = rest) on the training
// documents, in the given order. `classes`, when non-empty, lists the
// expected classes; each must have at least one example.
inline OvrModel ovr_train(const KernelMatrix& kernel,
                          const std::vector<std::pair<std::string, std::string>>&
                              labelled,
                          double C = 1.0, double tol = 1e-3,
                          std::vector<std::string> classes = {}) {
  std::set<std::string> present;
  for (const auto& [doc, label] : labelled) present.insert(label);
  if (classes.empty()) {
    classes.assign(present.begin(), present.end());
  } else {
    std::sort(classes.begin(), classes.end());
    if (std::adjacent_find(classes.begin(), classes.end()) != classes.end()) {
      throw Error("ovr_train: duplicate class name");
    }
    for (const auto& c : classes) {
      if (!present.contains(c)) {
        throw Error("ovr_train: class '" + c + "' has no training examples");
      }
    }
    for (const auto& c : present) {
      if (!std::binary_search(classes.begin(), classes.end(), c)) {
        throw Error("ovr_train: unexpected class '" + c + "'");
      }
    }
  }
  if (classes.size() < 2) {
    throw Error("ovr_train: need at least two classes");
  }

  const std::size_t n = labelled.size();
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) {
    idx[i] = kernel.index_of(labelled[i].first);
  }
  Eigen::MatrixXd sub(static_cast<Eigen::Index>(n),
                      static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) sub(i, j) = kernel(idx[i], idx[j]);
  }
  jitter_if_not_psd(sub);

  OvrModel m;
  m.classes = classes;
  m.order = kernel.order;
  m.normalized = kernel.normalized;
  for (const auto& [doc, label] : labelled) m.training_names.push_back(doc);
  m.models.resize(classes.size());
  parallel_for(classes.size(), [&](std::size_t c) {
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = labelled[i].second == classes[c] ? 1 : -1;
    }
    SmoOptions opt;
    opt.C = C;
    opt.tol = tol;
    opt.check_psd = false;
    m.models[c] = smo_train(sub, y, opt).model;
  });
  return m;
}

// Argmax of the one-vs-rest decision values; ties go to the first class
// in name order.
inline Prediction predict(const OvrModel& m, std::span<const double> k_row) {
  if (k_row.size() != m.training_names.size()) {
    throw Error("predict: kernel row does not match the training documents");
  }
  Prediction p;
  std::size_t best = 0;
  for (std::size_t c = 0; c < m.classes.size(); ++c) {
    const double f = m.models[c].decision(k_row);
    p.decision_values.push_back(f);
    if (f > p.decision_values[best]) best = c;
  }
  p.label = m.classes[best];
  return p;
}

inline void check_compatible(const OvrModel& m, const KernelMatrix& k) {
  if (m.order != k.order || m.normalized != k.normalized) {
    throw Error("kernel header (order=" + std::to_string(k.order) +
                " normalized=" + (k.normalized ? "1" : "0") +
                ") does not match the model (order=" +
                std::to_string(m.order) + " normalized=" +
                (m.normalized ? "1" : "0") + ")");
  }
}

// Kernel row of `doc` against the model's training documents.
inline std::vector<double> kernel_row(const OvrModel& m,
                                      const KernelMatrix& k,
                                      const std::string& doc) {
  check_compatible(m, k);
  const std::size_t d = k.index_of(doc);
  std::vector<double> row;
  row.reserve(m.training_names.size());
  for (const auto& t : m.training_names) row.push_back(k(d, k.index_of(t)));
  return row;
}

inline Prediction predict(const OvrModel& m, const KernelMatrix& k,
                          const std::string& doc) {
  return predict(m, kernel_row(m, k, doc));
}

// Model file:
//   RKSVM1 classes=<k> order=<n> normalized=<0|1>
//   training <N>, then N document names
//   per class: "class <name>", "C <C>", "b <b>", "support <m>", then m
//   lines "index<TAB>alpha_y"
inline std::string serialize_model(const OvrModel& m) {
  std::string out = "RKSVM1 classes=" + std::to_string(m.classes.size()) +
                    " order=" + std::to_string(m.order) +
                    " normalized=" + (m.normalized ? "1" : "0") + "\n";
  out += "training " + std::to_string(m.training_names.size()) + "\n";
  for (const auto& n : m.training_names) out += n + "\n";
  for (std::size_t c = 0; c < m.classes.size(); ++c) {
    const auto& b = m.models[c];
    out += "class " + m.classes[c] + "\n";
    out += "C " + detail::format_17g(b.C) + "\n";
    out += "b " + detail::format_17g(b.bias) + "\n";
    out += "support " + std::to_string(b.support.size()) + "\n";
    for (std::size_t s = 0; s < b.support.size(); ++s) {
      out += std::to_string(b.support[s]) + "\t" +
             detail::format_17g(b.alpha_y[s]) + "\n";
    }
  }
  return out;
}

inline OvrModel deserialize_model(const std::string& text) {
  constexpr const char* what = "model file";
  std::istringstream is(text);
  std::string line;
  auto next = [&]() -> std::string& {
    if (!std::getline(is, line)) throw Error("model file: truncated");
    return line;
  };
  auto keyed = [&](const std::string& key) {
    const std::string& l = next();
    if (!l.starts_with(key + " ")) {
      throw Error("model file: expected '" + key + "'");
    }
    return l.substr(key.size() + 1);
  };
  const auto f = detail::header_fields(next(), "RKSVM1", what);
  OvrModel m;
  const std::size_t k =
      detail::parse_size(detail::field(f, "classes", what), what);
  m.order = detail::parse_size(detail::field(f, "order", what), what);
  const auto& norm = detail::field(f, "normalized", what);
  if (norm != "0" && norm != "1") throw Error("model file: bad normalized");
  m.normalized = norm == "1";
  const std::size_t n = detail::parse_size(keyed("training"), what);
  for (std::size_t i = 0; i < n; ++i) m.training_names.push_back(next());
  for (std::size_t c = 0; c < k; ++c) {
    m.classes.push_back(keyed("class"));
    BinaryModel b;
    b.C = detail::parse_double(keyed("C"), what);
    b.bias = detail::parse_double(keyed("b"), what);
    const std::size_t sv = detail::parse_size(keyed("support"), what);
    for (std::size_t s = 0; s < sv; ++s) {
      const auto cells = io::split(next(), '\t');
      if (cells.size() != 2) throw Error("model file: bad support line");
      const std::size_t idx =
          detail::parse_size(std::string(cells[0]), what);
      if (idx >= n) throw Error("model file: support index out of range");
      b.support.push_back(idx);
      b.alpha_y.push_back(detail::parse_double(cells[1], what));
    }
    m.models.push_back(std::move(b));
  }
  if (!std::is_sorted(m.classes.begin(), m.classes.end())) {
    throw Error("model file: classes are not in name order");
  }
  return m;
}

}  // namespace ratk
