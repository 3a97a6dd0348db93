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

#include "przcdp/rng.h"

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"

namespace przcdp {

uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

uint64_t Fnv1a64(std::string_view bytes) {
  uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

SeededRng SeededRng::Child(std::string_view component) const {
  SeededRng child = *this;
  child.path_.emplace_back(component);
  return child;
}

SeededRng SeededRng::Child(uint64_t index) const {
  return Child(absl::StrCat(index));
}

std::string SeededRng::PathString() const {
  return absl::StrCat(seed_, ":", absl::StrJoin(path_, "/"));
}

uint64_t SeededRng::StreamSeed() const {
  uint64_t state = SplitMix64(seed_);
  for (const std::string& component : path_) {
    state = SplitMix64(state ^ Fnv1a64(component));
  }
  return state;
}

}  // namespace przcdp
