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

#include "dcsa/seqsa.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dcsa {

//----------------------------------------------------------------------
// Schedules
//----------------------------------------------------------------------

index_t accelerate(index_t v) {
  // smallest c with c^4 >= v^5
  using wide = __int128;
  auto c = static_cast<index_t>(std::ceil(std::pow(static_cast<double>(v), 1.25)));
  const wide target = static_cast<wide>(v) * v * v * v * v;
  auto fourth = [](index_t a) { return static_cast<wide>(a) * a * a * a; };
  while (c > 1 && fourth(c - 1) >= target) --c;
  while (fourth(c) < target) ++c;
  return c;
}

VSchedule VSchedule::fixed(index_t v0) {
  if (v0 < 3) throw std::invalid_argument("fixed schedule needs v >= 3");
  return VSchedule(v0, [v0](index_t, index_t, index_t) { return v0; },
                   "fixed:" + std::to_string(v0));
}

VSchedule VSchedule::accelerated(index_t start) {
  if (start < 3) throw std::invalid_argument("accelerated schedule needs v >= 3");
  return VSchedule(start,
                   [](index_t v, index_t, index_t) { return accelerate(v); },
                   start == 3 ? "accel" : "accel:" + std::to_string(start));
}

VSchedule VSchedule::custom(index_t start, Rule rule, std::string name) {
  if (start < 3) throw std::invalid_argument("custom schedule needs v >= 3");
  return VSchedule(start, std::move(rule), std::move(name));
}

index_t VSchedule::initial(index_t n) const {
  return std::clamp<index_t>(start_, 3, std::max<index_t>(n, 3));
}

index_t VSchedule::legal_max(index_t v, index_t cover, index_t xlen) {
  // largest integer v' with v' <= v^2/|D| - 1
  const index_t by_work = (v * v - cover) / cover;
  return std::min(by_work, xlen);
}

index_t VSchedule::next(index_t v, index_t cover, index_t xlen) const {
  const index_t want = rule_(v, cover, xlen);
  const index_t hi = legal_max(v, cover, xlen);
  return std::max<index_t>(3, std::min(want, hi));
}

VSchedule parse_schedule(std::string_view spec) {
  if (spec == "accel") return VSchedule::accelerated();
  if (spec.starts_with("accel:")) {
    return VSchedule::accelerated(std::stoll(std::string(spec.substr(6))));
  }
  if (spec.starts_with("fixed:")) {
    return VSchedule::fixed(std::stoll(std::string(spec.substr(6))));
  }
  throw std::invalid_argument("unknown schedule '" + std::string(spec) +
                              "' (expected fixed:V or accel)");
}

std::uint64_t SeqStats::total_ops() const {
  std::uint64_t sum = 0;
  for (const auto& l : levels) sum += l.ops;
  return sum;
}

//----------------------------------------------------------------------
// Oracle
//----------------------------------------------------------------------

SuffixArray naive_suffix_array(const Text& t) {
  const auto x = t.chars();
  SuffixArray sa(static_cast<std::size_t>(t.size()));
  std::iota(sa.begin(), sa.end(), index_t{0});
  std::sort(sa.begin(), sa.end(), [&x](index_t a, index_t b) {
    // A proper prefix sorts first, which is what -1 padding gives.
    return std::lexicographical_compare(x.begin() + a, x.end(), x.begin() + b,
                                        x.end());
  });
  return sa;
}

//----------------------------------------------------------------------
// Stages
//----------------------------------------------------------------------

SuperString build_sample_string(const Text& t, const DifferenceCover& dc,
                                radix::OpCount* ops) {
  const index_t n = t.size();
  const index_t v = dc.period();
  SuperString s;
  s.v = v;
  s.rows.width = static_cast<std::size_t>(v);
  s.rows.bound = std::max<index_t>(t.alphabet(), 1);
  // A class whose last row would end exactly at n gets the all-padding
  // row at n; otherwise nothing marks where that class stops in X'.
  for (index_t k : dc.elements()) {
    for (index_t i = k; i <= n; i += v) {
      s.origin.push_back(i);
      for (index_t c = 0; c < v; ++c) s.rows.cells.push_back(t.at(i + c));
    }
  }
  if (ops) ops->ops += s.rows.cells.size();
  auto ranking = radix::radix_rank_rows(s.rows, ops);
  s.encoded = std::move(ranking.ranks);
  s.distinct = ranking.distinct;
  return s;
}

ClassOrders order_nonsample(const Text& t, const DifferenceCover& dc,
                            std::span<const index_t> rank,
                            radix::OpCount* ops) {
  const index_t n = t.size();
  const index_t v = dc.period();
  const index_t char_bound = std::max<index_t>(t.alphabet(), 1);
  const index_t rank_bound = std::max<index_t>(n, 1);
  ClassOrders orders(static_cast<std::size_t>(v));
  for (index_t k = 0; k < v && k < n; ++k) {
    if (dc.contains(k)) continue;
    const index_t step = dc.forward_step(k);
    std::vector<index_t> members;
    for (index_t i = k; i < n; i += v) members.push_back(i);
    const auto width = static_cast<std::size_t>(step) + 1;
    std::vector<std::size_t> perm;
    radix::lsd_sort(
        perm, members.size(), width,
        [&](std::size_t c) {
          return c + 1 == width ? rank_bound : char_bound;
        },
        [&](std::size_t r, std::size_t c) {
          const index_t i = members[r];
          return c + 1 == width ? rank[static_cast<std::size_t>(i + step)]
                                : t.at(i + static_cast<index_t>(c));
        },
        ops);
    auto& out = orders[static_cast<std::size_t>(k)];
    out.reserve(members.size());
    for (std::size_t r : perm) out.push_back(members[r]);
    if (ops) ops->ops += members.size() * width;
  }
  return orders;
}

void order_sample_classes(ClassOrders& orders, index_t n,
                          const DifferenceCover& dc,
                          std::span<const index_t> rank, radix::OpCount* ops) {
  const index_t v = dc.period();
  for (index_t k : dc.elements()) {
    std::vector<index_t> members;
    std::vector<index_t> keys;
    for (index_t i = k; i < n; i += v) {
      members.push_back(i);
      keys.push_back(rank[static_cast<std::size_t>(i)]);
    }
    const auto perm = radix::stable_counting_sort(keys, std::max<index_t>(n, 1),
                                                  ops);
    auto& out = orders[static_cast<std::size_t>(k)];
    out.clear();
    for (std::size_t r : perm) out.push_back(members[r]);
  }
}

PrefixGroups prefix_partition(const Text& t, index_t v, radix::OpCount* ops) {
  const index_t n = t.size();
  const index_t bound = std::max<index_t>(t.alphabet(), 1);
  std::vector<std::size_t> perm;
  radix::lsd_sort(
      perm, static_cast<std::size_t>(n), static_cast<std::size_t>(v),
      [bound](std::size_t) { return bound; },
      [&t](std::size_t r, std::size_t c) {
        return t.at(static_cast<index_t>(r + c));
      },
      ops);
  PrefixGroups g;
  g.order.reserve(perm.size());
  for (std::size_t t_ = 0; t_ < perm.size(); ++t_) {
    const auto i = static_cast<index_t>(perm[t_]);
    bool fresh = t_ == 0;
    if (!fresh) {
      const index_t j = g.order.back();
      for (index_t c = 0; c < v && !fresh; ++c) fresh = t.at(i + c) != t.at(j + c);
    }
    if (fresh) g.starts.push_back(g.order.size());
    g.order.push_back(i);
  }
  g.starts.push_back(g.order.size());
  if (ops) ops->ops += static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(v);
  return g;
}

SuffixArray merge_groups(const PrefixGroups& groups, const ClassOrders& orders,
                         std::span<const index_t> rank,
                         const DifferenceCover& dc, radix::OpCount* ops) {
  const index_t n = static_cast<index_t>(groups.order.size());
  const index_t v = dc.period();
  const std::size_t ngroups = groups.groups();
  std::vector<index_t> gid(static_cast<std::size_t>(n));
  for (std::size_t g = 0; g < ngroups; ++g) {
    for (std::size_t t = groups.starts[g]; t < groups.starts[g + 1]; ++t) {
      gid[static_cast<std::size_t>(groups.order[t])] = static_cast<index_t>(g);
    }
  }
  // Suffixes in class order, then stably bucketed by group: every group
  // becomes a concatenation of sorted per-class runs.
  std::vector<index_t> by_class;
  by_class.reserve(static_cast<std::size_t>(n));
  for (const auto& run : orders) by_class.insert(by_class.end(), run.begin(), run.end());
  if (static_cast<index_t>(by_class.size()) != n) {
    throw std::logic_error("merge_groups: class orders do not cover the text");
  }
  std::vector<index_t> keys(by_class.size());
  for (std::size_t t = 0; t < by_class.size(); ++t) {
    keys[t] = gid[static_cast<std::size_t>(by_class[t])];
  }
  const auto perm = radix::stable_counting_sort(
      keys, std::max<index_t>(static_cast<index_t>(ngroups), 1), ops);
  std::vector<index_t> arranged(by_class.size());
  for (std::size_t t = 0; t < perm.size(); ++t) arranged[t] = by_class[perm[t]];

  auto less = [&](index_t a, index_t b) {
    const index_t l = dc.shift(a % v, b % v);
    const index_t ra = rank[static_cast<std::size_t>(a + l)];
    const index_t rb = rank[static_cast<std::size_t>(b + l)];
    if (ra == rb) {
      throw std::logic_error("merge_groups: suffixes " + std::to_string(a) +
                             " and " + std::to_string(b) + " compare equal");
    }
    return ra < rb;
  };

  SuffixArray sa;
  sa.reserve(static_cast<std::size_t>(n));
  std::uint64_t comparisons = 0;
  std::vector<std::span<const index_t>> runs;
  const std::span<const index_t> all(arranged);
  for (std::size_t g = 0; g < ngroups; ++g) {
    const std::size_t lo = groups.starts[g];
    const std::size_t hi = groups.starts[g + 1];
    runs.clear();
    std::size_t start = lo;
    for (std::size_t t = lo + 1; t <= hi; ++t) {
      if (t == hi || arranged[t] % v != arranged[t - 1] % v) {
        runs.push_back(all.subspan(start, t - start));
        start = t;
      }
    }
    tournament_merge(std::span<const std::span<const index_t>>(runs), less, sa,
                     &comparisons);
  }
  if (ops) ops->ops += comparisons + static_cast<std::uint64_t>(n);
  return sa;
}

//----------------------------------------------------------------------
// Driver
//----------------------------------------------------------------------

namespace {

SuffixArray tiny_suffix_array(const Text& t) { return naive_suffix_array(t); }

SuffixArray dc_level(const Text& t, index_t v, const VSchedule& schedule,
                     SeqStats* stats) {
  const index_t n = t.size();
  if (n < 3) return tiny_suffix_array(t);

  radix::OpCount ops;
  // Recursion base: distinct characters give the answer directly.
  const auto by_char = radix::stable_counting_sort(
      t.chars(), std::max<index_t>(t.alphabet(), 1), &ops);
  bool distinct = true;
  for (std::size_t r = 1; r < by_char.size() && distinct; ++r) {
    distinct = t.chars()[by_char[r]] != t.chars()[by_char[r - 1]];
  }
  if (distinct) {
    if (stats) stats->levels.push_back({0, 0, n, ops.ops});
    return SuffixArray(by_char.begin(), by_char.end());
  }

  v = std::clamp<index_t>(v, 3, n);
  const DifferenceCover dc(v);
  const std::size_t slot = stats ? stats->levels.size() : 0;
  if (stats) stats->levels.push_back({v, dc.size(), n, 0});

  // Step 0
  std::vector<index_t> rank(static_cast<std::size_t>(n + v), kPad);
  ops.ops += static_cast<std::uint64_t>(n + v);

  // Step 1
  SuperString x = build_sample_string(t, dc, &ops);
  const auto xlen = static_cast<index_t>(x.origin.size());
  if (xlen >= n) throw std::logic_error("dc_suffix_array: sample did not shrink");
  ClassOrders orders(static_cast<std::size_t>(v));
  SuffixArray sub;
  if (x.distinct == xlen) {
    sub.assign(static_cast<std::size_t>(xlen), 0);
    for (index_t j = 0; j < xlen; ++j) sub[static_cast<std::size_t>(x.encoded[j])] = j;
  } else {
    const index_t next_v = schedule.next(v, dc.size(), xlen);
    sub = dc_level(Text(std::move(x.encoded)), next_v, schedule, stats);
  }
  for (index_t q = 0; q < xlen; ++q) {
    const index_t i = x.origin[static_cast<std::size_t>(sub[static_cast<std::size_t>(q)])];
    rank[static_cast<std::size_t>(i)] = q;
    if (i < n) orders[static_cast<std::size_t>(i % v)].push_back(i);
  }
  ops.ops += static_cast<std::uint64_t>(xlen);

  // Step 2
  ClassOrders rest = order_nonsample(t, dc, rank, &ops);
  for (index_t k = 0; k < v; ++k) {
    if (!dc.contains(k)) orders[static_cast<std::size_t>(k)] = std::move(rest[static_cast<std::size_t>(k)]);
  }

  // Steps 3 and 4
  const PrefixGroups groups = prefix_partition(t, v, &ops);
  SuffixArray sa = merge_groups(groups, orders, rank, dc, &ops);

  if (stats) stats->levels[slot].ops = ops.ops;
  return sa;
}

}  // namespace

SuffixArray dc_suffix_array(const Text& t, const VSchedule& schedule,
                            SeqStats* stats) {
  if (t.size() < 3) return tiny_suffix_array(t);
  return dc_level(t, schedule.initial(t.size()), schedule, stats);
}

//----------------------------------------------------------------------
// Verification
//----------------------------------------------------------------------

VerifyResult verify_suffix_array(const Text& t, std::span<const index_t> sa) {
  const index_t n = t.size();
  if (static_cast<index_t>(sa.size()) != n) {
    return {VerifyStatus::length_mismatch, -1,
            "length mismatch: text has " + std::to_string(n) +
                " characters, suffix array has " + std::to_string(sa.size()) +
                " entries"};
  }
  std::vector<index_t> inverse(static_cast<std::size_t>(n), -1);
  for (index_t j = 0; j < n; ++j) {
    const index_t i = sa[static_cast<std::size_t>(j)];
    if (i < 0 || i >= n || inverse[static_cast<std::size_t>(i)] >= 0) {
      return {VerifyStatus::not_permutation, j,
              "not a permutation: entry " + std::to_string(i) + " at slot " +
                  std::to_string(j)};
    }
    inverse[static_cast<std::size_t>(i)] = j;
  }
  auto rank_after = [&](index_t i) {
    return i + 1 < n ? inverse[static_cast<std::size_t>(i + 1)] : kPad;
  };
  for (index_t j = 0; j + 1 < n; ++j) {
    const index_t a = sa[static_cast<std::size_t>(j)];
    const index_t b = sa[static_cast<std::size_t>(j + 1)];
    const index_t ca = t.at(a);
    const index_t cb = t.at(b);
    if (ca < cb) continue;
    if (ca == cb && rank_after(a) < rank_after(b)) continue;
    return {VerifyStatus::order_violation, j,
            "order violation: suffix " + std::to_string(a) + " at slot " +
                std::to_string(j) + " is not smaller than suffix " +
                std::to_string(b)};
  }
  return {};
}

}  // namespace dcsa
