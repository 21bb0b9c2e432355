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

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "dcsa/text.hpp"

namespace dcsa {

//----------------------------------------------------------------------
// DifferenceCover
//
// A set D of residues modulo v such that every d in [0, v) equals
// (a - b) mod v for some a, b in D.  Covers built here never contain 0,
// so a class block of sampled v-grams always ends with padding.
//
// For v <= 64 the cover has minimum size (exhaustive search).  Larger
// moduli use the two-ruler construction {0..r-1} u {0, r, .., (r-1)r},
// r = ceil(sqrt(v)), which has 2r - 1 elements.
//
// pair_table[d] holds the lexicographically smallest (a, b) with
// (a - b) mod v = d; this makes shift() O(1) and deterministic.
//----------------------------------------------------------------------
class DifferenceCover {
 public:
  /// Throws std::invalid_argument for v < 3.
  explicit DifferenceCover(index_t v);

  index_t period() const { return v_; }
  std::span<const index_t> elements() const { return elements_; }
  index_t size() const { return static_cast<index_t>(elements_.size()); }

  bool contains(index_t residue) const {
    return position_[static_cast<std::size_t>(residue)] >= 0;
  }
  /// Index of `residue` within elements(), or -1.
  index_t position(index_t residue) const {
    return position_[static_cast<std::size_t>(residue)];
  }

  std::pair<index_t, index_t> witness(index_t d) const {
    return pair_table_[static_cast<std::size_t>(d)];
  }

  /// Returns l in [0, v) with (k1 + l) mod v and (k2 + l) mod v both in D.
  index_t shift(index_t k1, index_t k2) const {
    const index_t d = mod(k2 - k1);
    return mod(pair_table_[static_cast<std::size_t>(d)].second - k1);
  }

  /// Smallest l in [1, v) with (k + l) mod v in D.
  index_t forward_step(index_t k) const;

 private:
  index_t mod(index_t a) const { return ((a % v_) + v_) % v_; }

  index_t v_;
  std::vector<index_t> elements_;
  std::vector<index_t> position_;
  std::vector<std::pair<index_t, index_t>> pair_table_;
};

DifferenceCover build_cover(index_t v);

/// True iff every residue of Z_v is a difference of two members of
/// `candidate`.  Members outside [0, v) are reduced modulo v.
bool is_cover(std::span<const index_t> candidate, index_t v);

/// Same as dc.shift(k1, k2).
inline index_t shift_for_pair(const DifferenceCover& dc, index_t k1,
                              index_t k2) {
  return dc.shift(k1, k2);
}

/// {(d - z) mod v | d in cover}, sorted ascending.
std::vector<index_t> translate_cover(std::span<const index_t> cover,
                                     index_t z, index_t v);

/// Minimum-size cover containing 0, by iterative deepening.  Practical
/// for v up to about 64.
std::vector<index_t> minimum_cover(index_t v);

/// {0..r-1} u {0, r, .., (r-1)r} mod v with r = ceil(sqrt(v)).
std::vector<index_t> ruler_cover(index_t v);

}  // namespace dcsa
