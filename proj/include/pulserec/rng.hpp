// Copyright 2026 The pulserec Authors
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

#include <cstdint>
#include <initializer_list>
#include <random>

namespace pulserec {

using Rng = std::mt19937_64;

// SplitMix64 finalizer; mixes a 64-bit value into a well-spread seed.
inline uint64_t mix_seed(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Child seed for a labelled stream under a master seed. The derivation
// depends only on (master, labels), never on evaluation order.
inline uint64_t derive_seed(uint64_t master, std::initializer_list<uint64_t> labels) {
  uint64_t s = mix_seed(master);
  for (uint64_t label : labels) s = mix_seed(s ^ mix_seed(label + 0x632be59bd9b4e019ULL));
  return s;
}

}  // namespace pulserec
