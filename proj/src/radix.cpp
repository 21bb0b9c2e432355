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

#include "dcsa/radix.hpp"

#include <algorithm>

namespace dcsa::radix {

std::vector<std::size_t> stable_counting_sort(std::span<const index_t> keys,
                                              index_t bound, OpCount* ops) {
  std::vector<std::size_t> bucket(static_cast<std::size_t>(bound) + 2, 0);
  for (index_t k : keys) {
    if (k < -1 || k >= bound) {
      throw std::out_of_range("stable_counting_sort: key " +
                              std::to_string(k) + " outside [-1, " +
                              std::to_string(bound) + ")");
    }
    ++bucket[static_cast<std::size_t>(k + 1) + 1];
  }
  for (std::size_t b = 1; b < bucket.size(); ++b) bucket[b] += bucket[b - 1];
  std::vector<std::size_t> perm(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) {
    perm[bucket[static_cast<std::size_t>(keys[i] + 1)]++] = i;
  }
  if (ops) {
    ops->ops += keys.size() + bucket.size();
    ++ops->passes;
  }
  return perm;
}

std::vector<std::size_t> radix_sort_rows(const RowTable& table,
                                         OpCount* ops) {
  std::vector<std::size_t> perm;
  const index_t bound = table.bound;
  lsd_sort(
      perm, table.rows(), table.width, [bound](std::size_t) { return bound; },
      [&table](std::size_t r, std::size_t c) {
        return table.cells[r * table.width + c];
      },
      ops);
  return perm;
}

RowRanking radix_rank_rows(const RowTable& table, OpCount* ops) {
  RowRanking out;
  out.order = radix_sort_rows(table, ops);
  out.ranks.assign(table.rows(), 0);
  index_t rank = -1;
  for (std::size_t t = 0; t < out.order.size(); ++t) {
    const std::size_t r = out.order[t];
    if (t == 0 || !std::ranges::equal(table.row(r),
                                      table.row(out.order[t - 1]))) {
      ++rank;
    }
    out.ranks[r] = rank;
  }
  if (ops) ops->ops += table.rows() * std::max<std::size_t>(table.width, 1);
  out.distinct = rank + 1;
  return out;
}

}  // namespace dcsa::radix
