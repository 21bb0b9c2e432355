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
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dcsa/dcover.hpp"
#include "dcsa/radix.hpp"
#include "dcsa/text.hpp"

namespace dcsa {

using SuffixArray = std::vector<index_t>;

//----------------------------------------------------------------------
// VSchedule
//
// Chooses the period of the next recursion level from the current period
// v, the cover size |D| and the recursive input length |X'|.  Every value
// is clamped into [3, min(v^2/|D| - 1, |X'|)], the range that keeps the
// total work linear.
//
// Note that accelerated(3) never leaves 3: ceil(3^{5/4}) = 4 exceeds
// 3^2/2 - 1 = 3.5.  Starting at 5 or above the clamp lets it grow.
//----------------------------------------------------------------------
class VSchedule {
 public:
  using Rule = std::function<index_t(index_t v, index_t cover, index_t xlen)>;

  static VSchedule fixed(index_t v0);
  static VSchedule accelerated(index_t start = 3);
  static VSchedule custom(index_t start, Rule rule,
                          std::string name = "custom");

  /// Period for the top level of a text of length n (n >= 3).
  index_t initial(index_t n) const;
  /// Period for the next level, already clamped.
  index_t next(index_t v, index_t cover, index_t xlen) const;
  /// Upper end of the legal range; may be below 3 for tiny inputs.
  static index_t legal_max(index_t v, index_t cover, index_t xlen);

  const std::string& name() const { return name_; }

 private:
  VSchedule(index_t start, Rule rule, std::string name)
      : start_(start), rule_(std::move(rule)), name_(std::move(name)) {}

  index_t start_;
  Rule rule_;
  std::string name_;
};

/// "fixed:V" or "accel"; throws std::invalid_argument otherwise.
VSchedule parse_schedule(std::string_view spec);

/// ceil(v^{5/4}), computed without floating-point rounding surprises.
index_t accelerate(index_t v);

/// Per-level instrumentation of dc_suffix_array.
struct SeqLevel {
  index_t v = 0;
  index_t cover = 0;
  index_t n = 0;
  std::uint64_t ops = 0;
};

struct SeqStats {
  std::vector<SeqLevel> levels;
  std::uint64_t total_ops() const;
};

/// Direct comparison sort of all suffixes.  O(n^2 log n) worst case;
/// this is the oracle for every other builder.
SuffixArray naive_suffix_array(const Text& t);

/// Recursive difference-cover construction.  Equals
/// naive_suffix_array(t) for every schedule.
SuffixArray dc_suffix_array(const Text& t, const VSchedule& schedule,
                            SeqStats* stats = nullptr);

//----------------------------------------------------------------------
// The individual stages of dc_suffix_array, exposed for testing and for
// reuse by the distributed builder.
//----------------------------------------------------------------------

/// Sampled v-grams x[i..i+v) for i mod v in D and i <= n, grouped by
/// residue class (ascending) and by position inside a class, with their
/// dense ranks.  Position n appears only when n mod v is in D; its row
/// is all padding and terminates that class.
struct SuperString {
  index_t v = 0;
  std::vector<index_t> origin;  // text position of each row
  radix::RowTable rows;
  std::vector<index_t> encoded;  // dense rank of each row (the string X')
  index_t distinct = 0;
};

SuperString build_sample_string(const Text& t, const DifferenceCover& dc,
                                radix::OpCount* ops = nullptr);

/// class_order[k] lists the positions i = k (mod v) in ascending suffix
/// order.
using ClassOrders = std::vector<std::vector<index_t>>;

/// Orders every non-sample class k by the tuples
/// (x[i], .., x[i+l_k-1], rank[i+l_k]) with l_k = dc.forward_step(k).
/// `rank` has length n + v and holds the sample ranks (-1 elsewhere).
/// Sample classes are left empty.
ClassOrders order_nonsample(const Text& t, const DifferenceCover& dc,
                            std::span<const index_t> rank,
                            radix::OpCount* ops = nullptr);

/// Fills the sample classes of `orders` by sorting on rank.
void order_sample_classes(ClassOrders& orders, index_t n,
                          const DifferenceCover& dc,
                          std::span<const index_t> rank,
                          radix::OpCount* ops = nullptr);

/// All suffixes grouped by their first v characters.  Group g is
/// order[starts[g] .. starts[g+1]); inside a group positions ascend.
struct PrefixGroups {
  std::vector<index_t> order;
  std::vector<std::size_t> starts;

  std::size_t groups() const { return starts.empty() ? 0 : starts.size() - 1; }
};

PrefixGroups prefix_partition(const Text& t, index_t v,
                              radix::OpCount* ops = nullptr);

/// Orders each group by merging its per-class runs.  Two suffixes from
/// classes k' and k'' are compared through rank[. + l], l = dc.shift(k', k'').
/// Throws std::logic_error if two distinct suffixes compare equal.
SuffixArray merge_groups(const PrefixGroups& groups, const ClassOrders& orders,
                         std::span<const index_t> rank,
                         const DifferenceCover& dc,
                         radix::OpCount* ops = nullptr);

//----------------------------------------------------------------------
// tournament_merge
//
// Merges sorted runs of handles with a winner tree; `less(a, b)` orders
// two handles from different runs.  Each output element costs
// O(log #runs) comparisons.
//----------------------------------------------------------------------
template <class Less>
void tournament_merge(std::span<const std::span<const index_t>> runs,
                      Less less, std::vector<index_t>& out,
                      std::uint64_t* comparisons = nullptr) {
  const std::size_t r = runs.size();
  if (r == 0) return;
  if (r == 1) {
    out.insert(out.end(), runs[0].begin(), runs[0].end());
    return;
  }
  std::size_t leaves = 1;
  while (leaves < r) leaves <<= 1;
  std::vector<std::size_t> pos(r, 0);
  std::vector<std::ptrdiff_t> tree(2 * leaves, -1);
  std::uint64_t cmp = 0;

  auto better = [&](std::ptrdiff_t a, std::ptrdiff_t b) -> std::ptrdiff_t {
    if (a < 0) return b;
    if (b < 0) return a;
    ++cmp;
    const auto ua = static_cast<std::size_t>(a);
    const auto ub = static_cast<std::size_t>(b);
    return less(runs[ub][pos[ub]], runs[ua][pos[ua]]) ? b : a;
  };
  for (std::size_t i = 0; i < r; ++i) {
    if (!runs[i].empty()) tree[leaves + i] = static_cast<std::ptrdiff_t>(i);
  }
  for (std::size_t node = leaves; node-- > 1;) {
    tree[node] = better(tree[2 * node], tree[2 * node + 1]);
  }
  while (tree[1] >= 0) {
    const auto w = static_cast<std::size_t>(tree[1]);
    out.push_back(runs[w][pos[w]]);
    if (++pos[w] == runs[w].size()) tree[leaves + w] = -1;
    for (std::size_t node = (leaves + w) / 2; node >= 1; node /= 2) {
      tree[node] = better(tree[2 * node], tree[2 * node + 1]);
    }
  }
  if (comparisons) *comparisons += cmp;
}

//----------------------------------------------------------------------
// Verification
//----------------------------------------------------------------------
enum class VerifyStatus { ok, length_mismatch, not_permutation, order_violation };

struct VerifyResult {
  VerifyStatus status = VerifyStatus::ok;
  index_t position = -1;  // offending SA slot, when meaningful
  std::string message;

  explicit operator bool() const { return status == VerifyStatus::ok; }
};

/// Linear-time check: permutation test, then adjacent pairs compared by
/// first character and the inverse array at the next position.
VerifyResult verify_suffix_array(const Text& t, std::span<const index_t> sa);

}  // namespace dcsa
