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

#ifndef SEMLM_COMMON_H_
#define SEMLM_COMMON_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace semlm {

using TokenId = int32_t;

// Error raised for malformed input, invalid arguments and I/O failures.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string &what) : std::runtime_error(what) {}
};

// Stable 64-bit FNV-1a hash used for corpus and artifact checksums.
class Checksum {
 public:
  void Update(std::string_view data);
  void Update(const void *data, size_t size);
  uint64_t value() const { return hash_; }
  std::string hex() const;

 private:
  uint64_t hash_ = 14695981039346656037ULL;
};

std::string ChecksumOf(std::string_view data);
std::string ChecksumOfFile(const std::string &path);

// Maps a raw 64-bit generator draw onto [0, 1) with 53 bits of precision.
// Used instead of std::uniform_real_distribution so draws are identical
// across standard library implementations.
inline double UnitDouble(uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace semlm

#endif  // SEMLM_COMMON_H_
