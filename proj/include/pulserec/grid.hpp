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

#include <cstddef>
#include <cstdint>

namespace pulserec {

// Closed range of grid indices [lo, hi].
struct IndexRange {
  int64_t lo = 0;
  int64_t hi = -1;

  std::size_t size() const { return hi < lo ? 0 : static_cast<std::size_t>(hi - lo + 1); }
  bool empty() const { return hi < lo; }
  bool contains(int64_t k) const { return k >= lo && k <= hi; }
  std::size_t offset(int64_t k) const { return static_cast<std::size_t>(k - lo); }
  IndexRange dilated(int64_t w) const { return {lo - w, hi + w}; }
  bool symmetric() const { return lo == -hi; }

  friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

// Product of two index ranges; storage is row-major with the first axis slow.
struct Rect {
  IndexRange rows;
  IndexRange cols;

  std::size_t size() const { return rows.size() * cols.size(); }
  bool contains(int64_t k1, int64_t k2) const { return rows.contains(k1) && cols.contains(k2); }
  std::size_t offset(int64_t k1, int64_t k2) const {
    return rows.offset(k1) * cols.size() + cols.offset(k2);
  }
  Rect dilated(int64_t w) const { return {rows.dilated(w), cols.dilated(w)}; }

  friend bool operator==(const Rect&, const Rect&) = default;
};

}  // namespace pulserec
