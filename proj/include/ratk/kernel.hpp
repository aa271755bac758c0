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
// n-gram rational kernels over acyclic weighted acceptors.
//
//   K_n(x, y) = sum_z c_x(z) c_y(z)
//
// where c_x(z) is the expected number of occurrences of the n-gram z in x
// (Real semiring, input tape). The same value is the total weight of
// x o T o T^-1 o y for the n-gram counting transducer T; both routes are
// available. n-grams that contain the word-boundary label never count.

#pragma once

#include <charconv>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ratk/archive.hpp"
#include "ratk/error.hpp"
#include "ratk/operations.hpp"
#include "ratk/parallel.hpp"
#include "ratk/paths.hpp"
#include "ratk/wfst.hpp"

namespace ratk {

using NgramCounts = std::map<LabelString, double>;

// Expected n-gram counts of an acyclic machine. Pass kEpsilon as boundary
// when no label should be excluded.
inline NgramCounts ngram_counts(const RealFst& t, std::size_t n,
                                Label boundary) {
  if (n == 0) throw Error("ngram_counts: order must be at least 1");
  const auto order = require_topological_order(t, "ngram_counts");
  const std::size_t ns = t.num_states();
  std::vector<double> alpha(ns, 0.0), beta(ns, 0.0);
  for (const auto& [s, w] : t.initial()) alpha[s] = w;
  for (StateId s : order) {
    for (const auto& a : t.arcs(s)) alpha[a.nextstate] += alpha[s] * a.weight;
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    double b = t.final_weight(*it);
    for (const auto& a : t.arcs(*it)) b += a.weight * beta[a.nextstate];
    beta[*it] = b;
  }

  NgramCounts counts;
  LabelString gram;
  // Each occurrence is anchored at the source of its first labelled arc and
  // ends right after its n-th labelled arc; epsilon arcs inside are crossed.
  auto extend = [&](auto&& self, StateId s, double w, double prefix) -> void {
    for (const auto& a : t.arcs(s)) {
      if (a.ilabel == kEpsilon) {
        if (!gram.empty()) self(self, a.nextstate, w * a.weight, prefix);
        continue;
      }
      if (a.ilabel == boundary) continue;
      gram.push_back(a.ilabel);
      const double nw = w * a.weight;
      if (gram.size() == n) {
        const double c = prefix * nw * beta[a.nextstate];
        if (c != 0.0) counts[gram] += c;
      } else {
        self(self, a.nextstate, nw, prefix);
      }
      gram.pop_back();
    }
  };
  for (StateId s = 0; s < static_cast<StateId>(ns); ++s) {
    if (alpha[s] == 0.0) continue;
    extend(extend, s, 1.0, alpha[s]);
  }
  return counts;
}

inline double dot(const NgramCounts& a, const NgramCounts& b) {
  const NgramCounts& small = a.size() <= b.size() ? a : b;
  const NgramCounts& large = a.size() <= b.size() ? b : a;
  double k = 0.0;
  for (const auto& [g, c] : small) {
    auto it = large.find(g);
    if (it != large.end()) k += c * it->second;
  }
  return k;
}

inline double ngram_kernel(const RealFst& x, const RealFst& y, std::size_t n,
                           Label boundary) {
  return dot(ngram_counts(x, n, boundary), ngram_counts(y, n, boundary));
}

// T maps a string to each of its n-grams: eat a prefix (a:eps loops), copy
// n labels, eat the rest. The boundary may be eaten but never copied.
inline RealFst counting_transducer(const LabelSet& alphabet, std::size_t n,
                                   Label boundary) {
  RealFst t(alphabet, alphabet);
  t.add_states(n + 1);
  const auto last = static_cast<StateId>(n);
  for (Label a : alphabet) {
    t.add_arc(0, a, kEpsilon, 1.0, 0);
    t.add_arc(last, a, kEpsilon, 1.0, last);
    if (a == boundary) continue;
    for (StateId i = 0; i < last; ++i) t.add_arc(i, a, a, 1.0, i + 1);
  }
  t.set_initial(0);
  t.set_final(last);
  return t;
}

// K_n(x, y) as the total weight of x o T o T^-1 o y.
inline double ngram_kernel_by_composition(const RealFst& x, const RealFst& y,
                                          std::size_t n, Label boundary) {
  LabelSet sigma = x.output_alphabet();
  sigma.insert(y.input_alphabet().begin(), y.input_alphabet().end());
  const RealFst counter = counting_transducer(sigma, n, boundary);
  const RealFst left = compose(with_alphabets(x, {}, sigma), counter);
  const RealFst right = compose(invert(counter), with_alphabets(y, sigma, {}));
  return shortest_distance(compose(left, right));
}

struct KernelMatrix {
  std::vector<std::string> names;
  Eigen::MatrixXd values;
  std::size_t order = 0;
  std::size_t sigma = 0;
  bool normalized = false;

  std::size_t index_of(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == name) return i;
    }
    throw Error("kernel matrix has no document named '" + name + "'");
  }
  double operator()(std::size_t i, std::size_t j) const {
    return values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
};

inline Label max_label(const RealFst& t) {
  Label m = 0;
  for (StateId s = 0; s < static_cast<StateId>(t.num_states()); ++s) {
    for (const auto& a : t.arcs(s)) m = std::max({m, a.ilabel, a.olabel});
  }
  return m;
}

struct KernelOptions {
  std::size_t order = 3;
  std::size_t sigma = 29;
  bool normalize = true;
  Label boundary = 29;  // kEpsilon: nothing excluded
};

// Gram matrix over the archive; rows are filled in parallel, every entry
// is computed once for i <= j and mirrored.
inline KernelMatrix kernel_matrix(const FstArchive& ar,
                                  const KernelOptions& opt) {
  if (opt.order == 0) throw Error("kernel: order must be at least 1");
  const auto docs = far_read<RealSemiring>(ar);
  const std::size_t n = docs.size();
  std::vector<NgramCounts> counts(n);
  parallel_for(n, [&](std::size_t i) {
    const Label m = max_label(docs[i].second);
    if (static_cast<std::size_t>(m) > opt.sigma) {
      throw Error("kernel: document '" + docs[i].first + "' uses symbol id " +
                  std::to_string(m) + " beyond sigma=" +
                  std::to_string(opt.sigma));
    }
    counts[i] = ngram_counts(docs[i].second, opt.order, opt.boundary);
  });

  KernelMatrix km;
  km.order = opt.order;
  km.sigma = opt.sigma;
  km.normalized = opt.normalize;
  km.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                    static_cast<Eigen::Index>(n));
  for (const auto& d : docs) km.names.push_back(d.first);
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = 0; j <= i; ++j) {
      km.values(i, j) = dot(counts[i], counts[j]);
    }
  });
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) km.values(j, i) = km.values(i, j);
  }
  if (opt.normalize) {
    const Eigen::VectorXd diag = km.values.diagonal();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double d = diag(i) * diag(j);
        if (i == j) {
          km.values(i, i) = diag(i) > 0 ? 1.0 : 0.0;
        } else {
          km.values(i, j) = d > 0 ? km.values(i, j) / std::sqrt(d) : 0.0;
        }
      }
    }
  }
  return km;
}

// Kernel-induced distance sqrt(K(x,x) - 2K(x,y) + K(y,y)). A radicand
// below -1e-9 means the kernel is not PSD; smaller negatives clamp to 0.
inline double kernel_distance(double kxx, double kxy, double kyy) {
  const double r = kxx - 2.0 * kxy + kyy;
  if (r < -1e-9) {
    throw Error("kernel_distance: negative radicand " + std::to_string(r) +
                " (kernel is not positive semidefinite)");
  }
  return r <= 0.0 ? 0.0 : std::sqrt(r);
}

inline double kernel_distance(const KernelMatrix& k, std::size_t i,
                              std::size_t j) {
  return kernel_distance(k(i, i), k(i, j), k(j, j));
}

// Smallest and largest eigenvalue of a symmetric matrix.
inline std::pair<double, double> eigen_range(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return {0.0, 0.0};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m,
                                                    Eigen::EigenvaluesOnly);
  return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
}

namespace detail {

inline std::string format_17g(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v,
                               std::chars_format::general, 17);
  return std::string(buf, p);
}

inline double parse_double(std::string_view s, const char* what) {
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw Error(std::string(what) + ": bad number '" + std::string(s) + "'");
  }
  return v;
}

// Parses "key=value" tokens of a header line after the magic word.
inline std::map<std::string, std::string> header_fields(
    const std::string& line, std::string_view magic, const char* what) {
  std::istringstream is(line);
  std::string tok;
  is >> tok;
  if (tok != magic) {
    throw Error(std::string(what) + ": bad header, expected " +
                std::string(magic));
  }
  std::map<std::string, std::string> out;
  while (is >> tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) {
      throw Error(std::string(what) + ": bad header field '" + tok + "'");
    }
    out[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return out;
}

inline std::size_t parse_size(const std::string& s, const char* what) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw Error(std::string(what) + ": bad integer '" + s + "'");
  }
  return v;
}

inline const std::string& field(const std::map<std::string, std::string>& f,
                                const std::string& key, const char* what) {
  auto it = f.find(key);
  if (it == f.end()) {
    throw Error(std::string(what) + ": header lacks '" + key + "'");
  }
  return it->second;
}

}  // namespace detail

// Kernel archive text:
//   RKKAR1 order=<n> sigma=<s> normalized=<0|1>
//   <document count>
//   <one name per line>
//   <lower triangle, row i holds K(i,0..i), 17 significant digits>
inline std::string serialize_kernel(const KernelMatrix& k) {
  std::string out = "RKKAR1 order=" + std::to_string(k.order) +
                    " sigma=" + std::to_string(k.sigma) +
                    " normalized=" + (k.normalized ? "1" : "0") + "\n";
  out += std::to_string(k.names.size()) + "\n";
  for (const auto& n : k.names) out += n + "\n";
  for (std::size_t i = 0; i < k.names.size(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      if (j) out += ' ';
      out += detail::format_17g(k(i, j));
    }
    out += '\n';
  }
  return out;
}

inline KernelMatrix deserialize_kernel(const std::string& text) {
  constexpr const char* what = "kernel archive";
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw Error("kernel archive: empty file");
  const auto f = detail::header_fields(line, "RKKAR1", what);
  KernelMatrix k;
  k.order = detail::parse_size(detail::field(f, "order", what), what);
  k.sigma = detail::parse_size(detail::field(f, "sigma", what), what);
  const auto& norm = detail::field(f, "normalized", what);
  if (norm != "0" && norm != "1") throw Error("kernel archive: bad normalized");
  k.normalized = norm == "1";
  if (!std::getline(is, line)) throw Error("kernel archive: missing count");
  const std::size_t n = detail::parse_size(line, what);
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::getline(is, line)) throw Error("kernel archive: missing names");
    k.names.push_back(line);
  }
  k.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                   static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::getline(is, line)) throw Error("kernel archive: missing rows");
    auto cells = io::split(line, ' ');
    if (cells.size() != i + 1) {
      throw Error("kernel archive: row " + std::to_string(i) +
                  " has the wrong length");
    }
    for (std::size_t j = 0; j <= i; ++j) {
      const double v = detail::parse_double(cells[j], what);
      k.values(i, j) = v;
      k.values(j, i) = v;
    }
  }
  return k;
}

}  // namespace ratk
