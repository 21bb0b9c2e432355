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
#include <string_view>
#include <vector>

namespace dcsa {

using index_t = std::int64_t;

/// Reads past the end of a text yield this value; it sorts before every
/// real character.
inline constexpr index_t kPad = -1;

//----------------------------------------------------------------------
// Text
//
// An integer string x[0..n) over the alphabet [0, sigma) with
// sigma <= max(n, 1).  The padding x[k] = -1 for k >= n is virtual and
// never stored.
//----------------------------------------------------------------------
class Text {
 public:
  Text() = default;

  /// Takes ownership of already-encoded symbols.  Throws
  /// std::invalid_argument unless every symbol lies in [0, n).
  explicit Text(std::vector<index_t> symbols);

  index_t size() const { return static_cast<index_t>(chars_.size()); }
  bool empty() const { return chars_.empty(); }

  /// One past the largest symbol (0 for the empty text).
  index_t alphabet() const { return alphabet_; }

  index_t at(index_t i) const {
    return i < size() ? chars_[static_cast<std::size_t>(i)] : kPad;
  }

  std::span<const index_t> chars() const { return chars_; }

  friend bool operator==(const Text&, const Text&) = default;

 private:
  std::vector<index_t> chars_;
  index_t alphabet_ = 0;
};

/// Replaces every byte by its rank among the distinct bytes of `raw`.
Text encode_bytes(std::span<const unsigned char> raw);
Text encode_bytes(std::string_view raw);

/// Rank-reduces arbitrary non-negative symbols onto [0, d), d distinct.
Text encode_symbols(std::span<const index_t> symbols);

/// Same as t.at(i).
inline index_t char_at(const Text& t, index_t i) { return t.at(i); }

}  // namespace dcsa
