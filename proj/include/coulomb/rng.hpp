// Copyright 2026 The coulombgas Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>

namespace coulomb::rng {

// SplitMix64 finalizer (Steele, Lea, Flood 2014).  Any language reproduces
// the streams from this one function.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Counter-based stream: output(i) = splitmix64(key + i * GAMMA) where the
// per-replica key is key = splitmix64(seed ^ splitmix64(replica + 1)).
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t replica)
      : key_(splitmix64(seed ^ splitmix64(replica + 1))), counter_(0) {}

  std::uint64_t key() const { return key_; }

  std::uint64_t next_u64() {
    return splitmix64(key_ + (++counter_) * 0x9E3779B97F4A7C15ULL);
  }

  // uniform double in [0, 1) with 53 random bits
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
};

}  // namespace coulomb::rng
