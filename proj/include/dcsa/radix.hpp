/* Copyright 2026 The dcsa Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 */

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dcsa/text.hpp"

namespace dcsa::radix {

/// Elementary-operation counter shared by the sorting primitives.  Each
/// counting pass adds (elements + buckets).
struct OpCount {
  std::uint64_t ops = 0;
  std::uint64_t passes = 0;
};

/// Stable counting sort of keys in [-1, bound).  Returns the permutation
/// listing input positions in ascending key order.  Throws
/// std::out_of_range for a key outside the declared range.
std::vector<std::size_t> stable_counting_sort(std::span<const index_t> keys,
                                              index_t bound,
                                              OpCount* ops = nullptr);

/// Bucket count for one counting pass over `count` elements with keys in
/// [0, range).  Ranges much larger than the element count are split into
/// the fewest digits of at most max(256, 2*count) buckets, and then the
/// smallest base that still needs only that many digits.
inline std::uint64_t digit_base(std::size_t count, std::uint64_t range) {
  const std::uint64_t cap = std::max<std::uint64_t>(256, 2 * count);
  if (range <= cap) return std::max<std::uint64_t>(range, 1);
  auto digits = [range](std::uint64_t base) {
    std::uint64_t k = 1;
    for (std::uint64_t covered = base; covered < range; ++k) {
      if (covered > range / base) return k + 1;
      covered *= base;
    }
    return k;
  };
  const std::uint64_t need = digits(cap);
  std::uint64_t lo = 2, hi = cap;
  while (lo < hi) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (digits(mid) <= need) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

//----------------------------------------------------------------------
// lsd_sort
//
// Stable LSD radix sort of `count` fixed-width keys.  key(row, col)
// returns a value in [-1, bound(col)); columns are processed from last
// to first, each column least-significant digit first.  `perm` is the
// starting order (identity when empty) and is permuted in place, so ties
// keep their starting order.
//----------------------------------------------------------------------
template <class KeyFn, class BoundFn>
void lsd_sort(std::vector<std::size_t>& perm, std::size_t count,
              std::size_t columns, BoundFn bound, KeyFn key,
              OpCount* ops = nullptr) {
  if (perm.empty()) {
    perm.resize(count);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
  }
  if (count <= 1) return;
  std::vector<std::size_t> next(count);
  std::vector<std::uint64_t> shifted(count), moved(count);
  std::vector<std::size_t> bucket;
  for (std::size_t c = columns; c-- > 0;) {
    const index_t hi = static_cast<index_t>(bound(c));
    const std::uint64_t range = static_cast<std::uint64_t>(hi) + 1;
    const std::uint64_t base = digit_base(count, range);
    for (std::size_t t = 0; t < count; ++t) {
      const index_t k = key(perm[t], c);
      if (k < -1 || k >= hi) {
        throw std::out_of_range("lsd_sort: key " + std::to_string(k) +
                                " outside [-1, " + std::to_string(hi) + ")");
      }
      shifted[t] = static_cast<std::uint64_t>(k + 1);
    }
    std::uint64_t scale = 1;
    do {
      bucket.assign(static_cast<std::size_t>(base) + 1, 0);
      for (std::size_t t = 0; t < count; ++t) {
        ++bucket[static_cast<std::size_t>((shifted[t] / scale) % base) + 1];
      }
      for (std::size_t b = 1; b <= base; ++b) bucket[b] += bucket[b - 1];
      for (std::size_t t = 0; t < count; ++t) {
        const auto d = static_cast<std::size_t>((shifted[t] / scale) % base);
        const std::size_t to = bucket[d]++;
        next[to] = perm[t];
        moved[to] = shifted[t];
      }
      perm.swap(next);
      shifted.swap(moved);
      if (ops) {
        ops->ops += count + base;
        ++ops->passes;
      }
      scale *= base;
    } while (scale < range && base < range);
  }
}

//----------------------------------------------------------------------
// RowTable: m rows of width kappa, entries in [-1, bound).
//----------------------------------------------------------------------
struct RowTable {
  std::size_t width = 0;
  index_t bound = 0;
  std::vector<index_t> cells;

  std::size_t rows() const { return width == 0 ? 0 : cells.size() / width; }
  std::span<const index_t> row(std::size_t r) const {
    return std::span<const index_t>(cells).subspan(r * width, width);
  }
};

struct RowRanking {
  std::vector<std::size_t> order;  // rows sorted, ties by row index
  std::vector<index_t> ranks;      // dense rank of each row
  index_t distinct = 0;
};

/// Sorts rows lexicographically (stable) and assigns dense ranks.
RowRanking radix_rank_rows(const RowTable& table, OpCount* ops = nullptr);

/// Only the sorting half of radix_rank_rows.
std::vector<std::size_t> radix_sort_rows(const RowTable& table,
                                         OpCount* ops = nullptr);

}  // namespace dcsa::radix
