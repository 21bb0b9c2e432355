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

#include "dcsa/dcover.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

namespace dcsa {

namespace {

constexpr index_t kExhaustiveLimit = 64;

// Depth-first search over ascending element lists starting at 0.
// `count[d]` is the number of ordered pairs realizing difference d.
class CoverSearch {
 public:
  CoverSearch(index_t v, index_t target)
      : v_(v), target_(target), count_(static_cast<std::size_t>(v), 0) {}

  bool run() {
    chosen_.push_back(0);
    count_[0] = 1;
    covered_ = 1;
    return extend(1);
  }

  const std::vector<index_t>& result() const { return chosen_; }

 private:
  void add(index_t e, int delta) {
    for (index_t a : chosen_) {
      for (index_t d : {(e - a + v_) % v_, (a - e + v_) % v_}) {
        auto& c = count_[static_cast<std::size_t>(d)];
        if (delta > 0 && c++ == 0) ++covered_;
        if (delta < 0 && --c == 0) --covered_;
      }
    }
  }

  bool extend(index_t next) {
    const index_t have = static_cast<index_t>(chosen_.size());
    if (covered_ == v_) return true;
    const index_t left = target_ - have;
    if (left == 0) return false;
    // Each future element adds at most 2 * (current size) differences.
    index_t reachable = covered_;
    for (index_t j = 0; j < left; ++j) reachable += 2 * (have + j);
    if (reachable < v_) return false;

    for (index_t e = next; e + (left - 1) < v_; ++e) {
      add(e, +1);
      chosen_.push_back(e);
      if (extend(e + 1)) return true;
      chosen_.pop_back();
      add(e, -1);
    }
    return false;
  }

  index_t v_;
  index_t target_;
  std::vector<int> count_;
  index_t covered_ = 0;
  std::vector<index_t> chosen_;
};

std::vector<index_t> make_zero_free(std::vector<index_t> cover, index_t v) {
  // Rotate forward by the smallest t >= 1 with (v - t) not in the cover,
  // so no element lands on 0.
  std::vector<char> in(static_cast<std::size_t>(v), 0);
  for (index_t d : cover) in[static_cast<std::size_t>(d)] = 1;
  index_t t = 1;
  while (in[static_cast<std::size_t>(v - t)]) ++t;
  return translate_cover(cover, v - t, v);
}

const std::vector<index_t>& cached_minimum_cover(index_t v) {
  static std::mutex mu;
  static std::map<index_t, std::vector<index_t>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(v);
  if (it == cache.end()) it = cache.emplace(v, minimum_cover(v)).first;
  return it->second;
}

}  // namespace

std::vector<index_t> translate_cover(std::span<const index_t> cover, index_t z,
                                     index_t v) {
  std::vector<index_t> out;
  out.reserve(cover.size());
  for (index_t d : cover) out.push_back((((d - z) % v) + v) % v);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<index_t> minimum_cover(index_t v) {
  if (v <= 1) return {0};
  // |D|(|D| - 1) + 1 >= v
  index_t size = 1;
  while (size * (size - 1) + 1 < v) ++size;
  for (;; ++size) {
    CoverSearch search(v, size);
    if (search.run()) return search.result();
  }
}

std::vector<index_t> ruler_cover(index_t v) {
  index_t r = static_cast<index_t>(std::sqrt(static_cast<double>(v)));
  while (r * r < v) ++r;
  std::vector<index_t> out;
  for (index_t i = 0; i < r; ++i) {
    out.push_back(i % v);
    out.push_back((i * r) % v);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool is_cover(std::span<const index_t> candidate, index_t v) {
  if (v <= 0) return false;
  std::vector<char> hit(static_cast<std::size_t>(v), 0);
  index_t covered = 0;
  for (index_t a : candidate) {
    for (index_t b : candidate) {
      const index_t d = (((a - b) % v) + v) % v;
      if (!hit[static_cast<std::size_t>(d)]) {
        hit[static_cast<std::size_t>(d)] = 1;
        ++covered;
      }
    }
  }
  return covered == v;
}

DifferenceCover::DifferenceCover(index_t v) : v_(v) {
  if (v < 3) {
    throw std::invalid_argument("difference cover needs v >= 3, got " +
                                std::to_string(v));
  }
  elements_ = make_zero_free(
      v <= kExhaustiveLimit ? cached_minimum_cover(v) : ruler_cover(v), v);

  position_.assign(static_cast<std::size_t>(v), -1);
  for (std::size_t t = 0; t < elements_.size(); ++t) {
    position_[static_cast<std::size_t>(elements_[t])] =
        static_cast<index_t>(t);
  }

  pair_table_.assign(static_cast<std::size_t>(v), {-1, -1});
  index_t filled = 0;
  for (index_t a : elements_) {
    for (index_t b : elements_) {
      auto& slot = pair_table_[static_cast<std::size_t>(mod(a - b))];
      if (slot.first < 0) {
        slot = {a, b};
        ++filled;
      }
    }
  }
  if (filled != v) {
    throw std::logic_error("difference cover construction failed for v=" +
                           std::to_string(v));
  }
}

index_t DifferenceCover::forward_step(index_t k) const {
  for (index_t l = 1; l < v_; ++l) {
    if (contains(mod(k + l))) return l;
  }
  // Unreachable for a cover with at least one element.
  throw std::logic_error("difference cover: no forward step");
}

DifferenceCover build_cover(index_t v) { return DifferenceCover(v); }

}  // namespace dcsa
