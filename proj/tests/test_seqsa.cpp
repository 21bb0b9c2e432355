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

#include <gtest/gtest.h>

#include <random>

#include "dcsa/seqsa.hpp"
#include "oracles.hpp"

namespace dcsa {
namespace {

using testing::brute_suffix_array;
using testing::bytes;

const SuffixArray kWorkedSa{11, 3, 0, 4, 2, 8, 9, 1, 5, 7, 10, 6};

// Ranks of the sample suffixes (i mod v in D, i <= n) by true suffix
// order; the empty suffix at n is the smallest.
std::vector<index_t> sample_ranks(const Text& t, const DifferenceCover& dc) {
  const index_t n = t.size();
  const index_t v = dc.period();
  std::vector<index_t> rank(static_cast<std::size_t>(n + v), kPad);
  index_t q = 0;
  if (dc.contains(n % v)) rank[static_cast<std::size_t>(n)] = q++;
  for (index_t i : brute_suffix_array(t)) {
    if (dc.contains(i % v)) rank[static_cast<std::size_t>(i)] = q++;
  }
  return rank;
}

TEST(NaiveSuffixArray, PaperExamples) {
  EXPECT_EQ(naive_suffix_array(bytes("acbaacedbbea")), kWorkedSa);
  EXPECT_EQ(naive_suffix_array(bytes("aaa")), (SuffixArray{2, 1, 0}));
  EXPECT_EQ(naive_suffix_array(bytes("aaaaab")), (SuffixArray{0, 1, 2, 3, 4, 5}));
  EXPECT_TRUE(naive_suffix_array(bytes("")).empty());
  EXPECT_EQ(naive_suffix_array(bytes("z")), (SuffixArray{0}));
}

TEST(DcSuffixArray, WorkedExample) {
  const Text t = bytes("acbaacedbbea");
  EXPECT_EQ(dc_suffix_array(t, VSchedule::fixed(3)), kWorkedSa);
  EXPECT_EQ(dc_suffix_array(t, VSchedule::accelerated()), kWorkedSa);
  for (index_t v = 3; v <= 14; ++v) {
    EXPECT_EQ(dc_suffix_array(t, VSchedule::fixed(v)), kWorkedSa) << v;
  }
}

TEST(DcSuffixArray, ShortTexts) {
  for (const char* s : {"", "a", "ab", "ba", "aa", "aaa", "aba", "cab"}) {
    const Text t = bytes(s);
    EXPECT_EQ(dc_suffix_array(t, VSchedule::accelerated()), brute_suffix_array(t)) << s;
  }
}

TEST(DcSuffixArray, ClassEndingAtTextEnd) {
  // n mod v lies in D; that class needs the all-padding row at n.
  const Text t(std::vector<index_t>{1, 0, 0, 0, 0, 0});
  EXPECT_EQ(dc_suffix_array(t, VSchedule::fixed(4)), brute_suffix_array(t));
}

TEST(DcSuffixArray, RandomTextsMatchOracle) {
  std::mt19937_64 rng(11);
  int cases = 0;
  for (index_t sigma : {2, 4, 16, 0}) {
    for (int trial = 0; trial < 125; ++trial) {
      const index_t n = 1 + static_cast<index_t>(rng() % 2000);
      const Text t = testing::random_text(rng, n, sigma == 0 ? n : sigma);
      const auto want = brute_suffix_array(t);
      ASSERT_EQ(dc_suffix_array(t, VSchedule::fixed(3)), want) << n;
      ASSERT_EQ(dc_suffix_array(t, VSchedule::accelerated()), want) << n;
      ++cases;
    }
  }
  EXPECT_EQ(cases, 500);
}

TEST(DcSuffixArray, PeriodicTexts) {
  for (index_t n : {3, 10, 64, 255, 1000}) {
    for (index_t period : {1, 2, 3, 7}) {
      const Text t = testing::periodic_text(n, period);
      const auto want = brute_suffix_array(t);
      EXPECT_EQ(dc_suffix_array(t, VSchedule::fixed(3)), want);
      EXPECT_EQ(dc_suffix_array(t, VSchedule::accelerated(5)), want);
      EXPECT_EQ(dc_suffix_array(t, VSchedule::fixed(8)), want);
    }
  }
}

TEST(DcSuffixArray, StatsRecordLevels) {
  SeqStats stats;
  dc_suffix_array(testing::periodic_text(3000, 2), VSchedule::fixed(3), &stats);
  ASSERT_GE(stats.levels.size(), 2u);
  EXPECT_EQ(stats.levels[0].n, 3000);
  EXPECT_EQ(stats.levels[0].v, 3);
  EXPECT_EQ(stats.levels[0].cover, 2);
  for (std::size_t k = 1; k < stats.levels.size(); ++k) {
    EXPECT_LT(stats.levels[k].n, stats.levels[k - 1].n);
  }
  EXPECT_GT(stats.total_ops(), 0u);
}

TEST(SampleString, WorkedExampleRows) {
  const Text t = bytes("acbaacedbbea");
  const DifferenceCover dc(3);
  const SuperString x = build_sample_string(t, dc);
  EXPECT_EQ(x.origin, (std::vector<index_t>{1, 4, 7, 10, 2, 5, 8, 11}));
  ASSERT_EQ(x.rows.rows(), 8u);
  // each class block ends with padding
  for (std::size_t r : {3u, 7u}) {
    const auto row = x.rows.row(r);
    EXPECT_NE(std::find(row.begin(), row.end(), kPad), row.end());
  }
  // encoded ranks order the rows
  for (std::size_t a = 0; a < 8; ++a) {
    for (std::size_t b = 0; b < 8; ++b) {
      const auto ra = x.rows.row(a);
      const auto rb = x.rows.row(b);
      const bool lt = std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
      EXPECT_EQ(lt, x.encoded[a] < x.encoded[b]);
    }
  }
}

TEST(SampleString, TerminatingRowAtTextEnd) {
  const Text t(std::vector<index_t>{1, 0, 0, 0, 0, 0});
  const DifferenceCover dc(4);  // {1,2,3}; 6 mod 4 = 2 is sampled
  const SuperString x = build_sample_string(t, dc);
  const auto it = std::find(x.origin.begin(), x.origin.end(), 6);
  ASSERT_NE(it, x.origin.end());
  const auto row = x.rows.row(static_cast<std::size_t>(it - x.origin.begin()));
  for (index_t c : row) EXPECT_EQ(c, kPad);
  EXPECT_EQ(x.encoded[static_cast<std::size_t>(it - x.origin.begin())], 0);
}

// The order of each class must agree with the suffix order restricted to it.
void expect_class_orders(const Text& t, index_t v) {
  const DifferenceCover dc(v);
  const auto rank = sample_ranks(t, dc);
  ClassOrders orders = order_nonsample(t, dc, rank);
  order_sample_classes(orders, t.size(), dc, rank);
  const auto sa = brute_suffix_array(t);
  for (index_t k = 0; k < v; ++k) {
    std::vector<index_t> want;
    for (index_t i : sa) {
      if (i % v == k) want.push_back(i);
    }
    EXPECT_EQ(orders[static_cast<std::size_t>(k)], want) << "v=" << v << " k=" << k;
  }
}

TEST(ClassOrders, WorkedExample) {
  expect_class_orders(bytes("acbaacedbbea"), 3);
  const DifferenceCover dc(3);
  EXPECT_EQ(dc.forward_step(0), 1);
}

TEST(ClassOrders, RandomTexts) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 60; ++trial) {
    const index_t n = 3 + static_cast<index_t>(rng() % 300);
    const Text t = testing::random_text(rng, n, 1 + static_cast<index_t>(rng() % 4));
    expect_class_orders(t, 3 + static_cast<index_t>(rng() % std::min<index_t>(n - 2, 12)));
  }
}

TEST(PrefixPartition, Aaa) {
  const PrefixGroups g = prefix_partition(bytes("aaa"), 3);
  EXPECT_EQ(g.order, (std::vector<index_t>{2, 1, 0}));
  EXPECT_EQ(g.starts, (std::vector<std::size_t>{0, 1, 2, 3}));
}

TEST(PrefixPartition, GroupsFollowSuffixOrder) {
  const Text t = bytes("acbaacedbbea");
  const index_t v = 3;
  const PrefixGroups g = prefix_partition(t, v);
  auto gram = [&](index_t i) {
    std::vector<index_t> out;
    for (index_t k = 0; k < v; ++k) out.push_back(t.at(i + k));
    return out;
  };
  // groups listed in SA order have the same v-grams as the SA sequence
  std::vector<std::vector<index_t>> want;
  for (index_t i : kWorkedSa) {
    if (want.empty() || want.back() != gram(i)) want.push_back(gram(i));
  }
  ASSERT_EQ(g.groups(), want.size());
  for (std::size_t k = 0; k < g.groups(); ++k) {
    for (std::size_t j = g.starts[k]; j < g.starts[k + 1]; ++j) {
      EXPECT_EQ(gram(g.order[j]), want[k]);
      if (j > g.starts[k]) {
        EXPECT_LT(g.order[j - 1], g.order[j]);
      }
    }
  }
}

TEST(MergeGroups, CompletesTheOrder) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    const index_t n = 3 + static_cast<index_t>(rng() % 400);
    const Text t = testing::random_text(rng, n, 2);
    const index_t v = 3 + static_cast<index_t>(rng() % 6);
    if (v > n) continue;
    const DifferenceCover dc(v);
    const auto rank = sample_ranks(t, dc);
    ClassOrders orders = order_nonsample(t, dc, rank);
    order_sample_classes(orders, n, dc, rank);
    const auto groups = prefix_partition(t, v);
    EXPECT_EQ(merge_groups(groups, orders, rank, dc), brute_suffix_array(t));
  }
}

TEST(TournamentMerge, MergesRuns) {
  const std::vector<index_t> a{1, 4, 9}, b{2, 3, 10, 11}, c{}, d{0};
  const std::vector<std::span<const index_t>> runs{a, b, c, d};
  std::vector<index_t> out;
  std::uint64_t cmp = 0;
  tournament_merge(std::span<const std::span<const index_t>>(runs),
                   [](index_t x, index_t y) { return x < y; }, out, &cmp);
  EXPECT_EQ(out, (std::vector<index_t>{0, 1, 2, 3, 4, 9, 10, 11}));
  EXPECT_LE(cmp, 8u * 2u + 4u);
}

TEST(Schedule, Accelerate) {
  EXPECT_EQ(accelerate(3), 4);
  EXPECT_EQ(accelerate(4), 6);
  EXPECT_EQ(accelerate(16), 32);
  EXPECT_EQ(accelerate(81), 243);
}

TEST(Schedule, ClampsToLegalRange) {
  const auto accel = VSchedule::accelerated();
  EXPECT_EQ(accel.next(3, 2, 1000000), 3);  // 4 > 9/2 - 1
  EXPECT_EQ(VSchedule::legal_max(3, 2, 1000000), 3);
  EXPECT_EQ(VSchedule::legal_max(8, 4, 10), 10);
  const auto from5 = VSchedule::accelerated(5);
  EXPECT_EQ(from5.initial(1000), 5);
  EXPECT_EQ(from5.next(5, 3, 1000000), 7);  // ceil(5^{5/4}) = 8 > 25/3 - 1
  EXPECT_EQ(VSchedule::fixed(9).next(9, 4, 5), 5);
  EXPECT_EQ(VSchedule::fixed(9).next(9, 4, 2), 3);
}

TEST(Schedule, Parse) {
  EXPECT_EQ(parse_schedule("accel").name(), VSchedule::accelerated().name());
  EXPECT_EQ(parse_schedule("fixed:7").initial(100), 7);
  EXPECT_THROW(parse_schedule("fixed:2"), std::invalid_argument);
  EXPECT_THROW(parse_schedule("fixed:"), std::invalid_argument);
  EXPECT_THROW(parse_schedule("fast"), std::invalid_argument);
}

TEST(Verify, DistinguishesFailures) {
  const Text t = bytes("acbaacedbbea");
  EXPECT_TRUE(verify_suffix_array(t, kWorkedSa));

  SuffixArray swapped = kWorkedSa;
  std::swap(swapped[0], swapped[1]);
  auto r = verify_suffix_array(t, swapped);
  EXPECT_EQ(r.status, VerifyStatus::order_violation);
  EXPECT_NE(r.message.find("order violation"), std::string::npos);

  SuffixArray dup = kWorkedSa;
  dup[1] = dup[0];
  r = verify_suffix_array(t, dup);
  EXPECT_EQ(r.status, VerifyStatus::not_permutation);
  EXPECT_NE(r.message.find("not a permutation"), std::string::npos);

  r = verify_suffix_array(t, SuffixArray{0, 1});
  EXPECT_EQ(r.status, VerifyStatus::length_mismatch);

  SuffixArray out_of_range = kWorkedSa;
  out_of_range[0] = 12;
  EXPECT_EQ(verify_suffix_array(t, out_of_range).status, VerifyStatus::not_permutation);
}

TEST(Verify, AcceptsOnlyTheTrueArray) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 100; ++trial) {
    const index_t n = 2 + static_cast<index_t>(rng() % 60);
    const Text t = testing::random_text(rng, n, 3);
    auto sa = brute_suffix_array(t);
    ASSERT_TRUE(verify_suffix_array(t, sa));
    const auto i = rng() % sa.size();
    const auto j = (i + 1 + rng() % (sa.size() - 1)) % sa.size();
    std::swap(sa[i], sa[j]);
    EXPECT_FALSE(verify_suffix_array(t, sa));
  }
}

}  // namespace
}  // namespace dcsa
