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

#include "dcsa/text.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>

namespace dcsa {

Text::Text(std::vector<index_t> symbols) : chars_(std::move(symbols)) {
  const index_t n = size();
  for (index_t c : chars_) {
    if (c < 0 || c >= n) {
      throw std::invalid_argument("Text: symbol " + std::to_string(c) +
                                  " outside [0, " + std::to_string(n) + ")");
    }
    alphabet_ = std::max(alphabet_, c + 1);
  }
}

Text encode_bytes(std::span<const unsigned char> raw) {
  std::array<index_t, 256> rank{};
  for (unsigned char b : raw) rank[b] = 1;
  index_t next = 0;
  for (auto& r : rank) {
    if (r) r = next++;
  }
  std::vector<index_t> out;
  out.reserve(raw.size());
  for (unsigned char b : raw) out.push_back(rank[b]);
  return Text(std::move(out));
}

Text encode_bytes(std::string_view raw) {
  return encode_bytes(std::span<const unsigned char>(
      reinterpret_cast<const unsigned char*>(raw.data()), raw.size()));
}

Text encode_symbols(std::span<const index_t> symbols) {
  std::vector<index_t> distinct(symbols.begin(), symbols.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()),
                 distinct.end());
  if (!distinct.empty() && distinct.front() < 0) {
    throw std::invalid_argument("encode_symbols: negative symbol");
  }
  std::vector<index_t> out;
  out.reserve(symbols.size());
  for (index_t s : symbols) {
    out.push_back(std::lower_bound(distinct.begin(), distinct.end(), s) -
                  distinct.begin());
  }
  return Text(std::move(out));
}

}  // namespace dcsa
