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
// Named, ordered archive of text-serialized transducers.
//
// File layout: the 6 magic bytes "RKFAR1", then for every entry a
// little-endian uint64 byte length followed by the UTF-8 name, and a
// little-endian uint64 byte length followed by the AT&T text.

#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ratk/error.hpp"
#include "ratk/io.hpp"
#include "ratk/text_format.hpp"
#include "ratk/wfst.hpp"

namespace ratk {

class FstArchive {
 public:
  static constexpr std::string_view kMagic = "RKFAR1";

  struct Entry {
    std::string name;
    std::string text;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  void add(std::string name, std::string text) {
    if (name.empty()) throw Error("archive: empty entry name");
    if (!names_.insert(name).second) {
      throw Error("archive: duplicate entry name '" + name + "'");
    }
    entries_.push_back({std::move(name), std::move(text)});
  }

  template <Semiring S>
  void add(std::string name, const Wfst<S>& t) {
    add(std::move(name), to_text(t));
  }

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  std::string serialize() const {
    std::string out(kMagic);
    for (const auto& e : entries_) {
      put_u64(out, e.name.size());
      out += e.name;
      put_u64(out, e.text.size());
      out += e.text;
    }
    return out;
  }

  static FstArchive deserialize(std::string_view bytes) {
    if (!bytes.starts_with(kMagic)) throw Error("archive: bad magic bytes");
    FstArchive ar;
    std::size_t pos = kMagic.size();
    auto take = [&](const char* what) {
      const std::uint64_t len = get_u64(bytes, pos);
      if (len > bytes.size() - pos) {
        throw Error(std::string("archive: truncated ") + what);
      }
      std::string s(bytes.substr(pos, len));
      pos += len;
      return s;
    };
    while (pos < bytes.size()) {
      std::string name = take("name");
      std::string text = take("entry");
      ar.add(std::move(name), std::move(text));
    }
    return ar;
  }

  void write(const std::filesystem::path& path) const {
    io::write_file_atomic(path, serialize());
  }
  static FstArchive read(const std::filesystem::path& path) {
    return deserialize(io::read_file(path));
  }

  friend bool operator==(const FstArchive& a, const FstArchive& b) {
    return a.entries_ == b.entries_;
  }

 private:
  static void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
  }
  static std::uint64_t get_u64(std::string_view in, std::size_t& pos) {
    if (in.size() - pos < 8) throw Error("archive: truncated length field");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[pos + i]))
           << (8 * i);
    }
    pos += 8;
    return v;
  }

  std::vector<Entry> entries_;
  std::set<std::string> names_;
};

template <Semiring S>
FstArchive far_create(const std::vector<std::pair<std::string, Wfst<S>>>& docs) {
  FstArchive ar;
  for (const auto& [name, t] : docs) ar.add(name, t);
  return ar;
}

template <Semiring S = RealSemiring>
std::vector<std::pair<std::string, Wfst<S>>> far_read(const FstArchive& ar) {
  std::vector<std::pair<std::string, Wfst<S>>> out;
  out.reserve(ar.size());
  for (const auto& e : ar.entries()) {
    out.emplace_back(e.name, from_text<S>(e.text));
  }
  return out;
}

}  // namespace ratk
