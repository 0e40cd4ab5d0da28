// Copyright 2026 The SemLM Authors.
//
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

#ifndef SEMLM_SERIALIZE_H_
#define SEMLM_SERIALIZE_H_

#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "semlm/common.h"

namespace semlm {

// Raw little-endian scalar I/O for the versioned binary model files.
class BinaryWriter {
 public:
  explicit BinaryWriter(std::ostream &out) : out_(out) {}

  template <typename T>
  void Write(T value) {
    static_assert(std::is_arithmetic_v<T>);
    out_.write(reinterpret_cast<const char *>(&value), sizeof(T));
  }
  void WriteString(std::string_view s) {
    Write<uint64_t>(s.size());
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }
  template <typename T>
  void WriteVector(const std::vector<T> &values) {
    Write<uint64_t>(values.size());
    for (T v : values) Write(v);
  }

 private:
  std::ostream &out_;
};

class BinaryReader {
 public:
  explicit BinaryReader(std::istream &in) : in_(in) {}

  template <typename T>
  T Read() {
    static_assert(std::is_arithmetic_v<T>);
    T value;
    in_.read(reinterpret_cast<char *>(&value), sizeof(T));
    if (!in_) throw Error("truncated model file");
    return value;
  }
  std::string ReadString() {
    const auto size = Read<uint64_t>();
    if (size > (1u << 30)) throw Error("corrupt string length in model file");
    std::string s(size, '\0');
    in_.read(s.data(), static_cast<std::streamsize>(size));
    if (!in_) throw Error("truncated model file");
    return s;
  }
  template <typename T>
  std::vector<T> ReadVector() {
    const auto size = Read<uint64_t>();
    if (size > (1ull << 34)) throw Error("corrupt vector length in model file");
    std::vector<T> values(size);
    for (T &v : values) v = Read<T>();
    return values;
  }

 private:
  std::istream &in_;
};

// "%.17g": shortest form that reads back to the identical double.
std::string ExactDouble(double value);

}  // namespace semlm

#endif  // SEMLM_SERIALIZE_H_
