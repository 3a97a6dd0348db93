//
// Copyright 2026 The przcdp Authors.
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
//

#ifndef PRZCDP_RNG_H_
#define PRZCDP_RNG_H_

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace przcdp {

// A root seed plus a derivation path such as {"postsplit", "3", "Mining",
// "sum"}. Each path names an independent stream, so the order in which
// releases are computed never changes their noise.
//
// Stream seed: s = splitmix64(seed); for each component c,
// s = splitmix64(s ^ fnv1a64(c)). The engine is std::mt19937_64 seeded with s.
class SeededRng {
 public:
  explicit SeededRng(uint64_t seed = 0) : seed_(seed) {}

  SeededRng Child(std::string_view component) const;
  SeededRng Child(uint64_t index) const;

  uint64_t seed() const { return seed_; }
  const std::vector<std::string>& path() const { return path_; }
  std::string PathString() const;

  uint64_t StreamSeed() const;
  std::mt19937_64 Engine() const { return std::mt19937_64(StreamSeed()); }

 private:
  uint64_t seed_;
  std::vector<std::string> path_;
};

uint64_t SplitMix64(uint64_t x);
uint64_t Fnv1a64(std::string_view bytes);

}  // namespace przcdp

#endif  // PRZCDP_RNG_H_
