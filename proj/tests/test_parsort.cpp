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

#include "dcsa/parsort.hpp"

namespace dcsa {
namespace {

radix::RowTable random_table(std::mt19937_64& rng, std::size_t m, std::size_t width,
                             index_t bound) {
  radix::RowTable t{width, bound, {}};
  for (std::size_t i = 0; i < m * width; ++i) {
    t.cells.push_back(static_cast<index_t>(rng() % static_cast<std::uint64_t>(bound + 1)) - 1);
  }
  return t;
}

// Row indices in lexicographic order, ties by index.
std::vector<index_t> oracle_order(const radix::RowTable& t) {
  std::vector<index_t> ids(t.rows());
  std::iota(ids.begin(), ids.end(), index_t{0});
  std::stable_sort(ids.begin(), ids.end(), [&](index_t a, index_t b) {
    const auto ra = t.row(static_cast<std::size_t>(a));
    const auto rb = t.row(static_cast<std::size_t>(b));
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  });
  return ids;
}

void expect_balanced(const DistRows& out, std::size_t m, int p) {
  const auto ranges = bsp::block_ranges(static_cast<std::int64_t>(m), p);
  ASSERT_EQ(out.parts.size(), static_cast<std::size_t>(p));
  for (int pi = 0; pi < p; ++pi) {
    EXPECT_EQ(static_cast<std::int64_t>(out.parts[static_cast<std::size_t>(pi)].ids.size()),
              ranges[static_cast<std::size_t>(pi)].size());
  }
}

TEST(StringSort, SingleProcessor) {
  std::mt19937_64 rng(31);
  const auto t = random_table(rng, 100, 3, 5);
  const auto run = bsp_string_sort(DistRows::block(t, 1), bsp::Config{1}, SlackPolicy::enforce);
  EXPECT_LE(run.ledger.S(), 1u);
  EXPECT_EQ(run.rows.gather_ids(), oracle_order(t));
}

TEST(StringSort, MatchesOracleAtMinimumSlack) {
  std::mt19937_64 rng(32);
  for (int p : {2, 4, 8}) {
    for (std::size_t m : {static_cast<std::size_t>(p * p * p), static_cast<std::size_t>(4 * p * p * p)}) {
      for (index_t bound : {2, 50}) {
        const auto t = random_table(rng, m, 3, bound);
        const auto run = bsp_string_sort(DistRows::block(t, p), bsp::Config{p},
                                         SlackPolicy::enforce);
        EXPECT_EQ(run.rows.gather_ids(), oracle_order(t)) << p << ' ' << m;
        expect_balanced(run.rows, m, p);
        // keys travel with their ids
        const auto sorted = run.rows.gather_table();
        const auto ids = run.rows.gather_ids();
        for (std::size_t k = 0; k < m; ++k) {
          const auto got = sorted.row(k);
          const auto want = t.row(static_cast<std::size_t>(ids[k]));
          EXPECT_TRUE(std::equal(got.begin(), got.end(), want.begin()));
        }
        EXPECT_TRUE(run.warnings.empty());
      }
    }
  }
}

TEST(StringSort, ConstantSuperstepsAndBoundedTraffic) {
  std::mt19937_64 rng(33);
  const std::size_t width = 4;
  for (int p : {2, 4, 8}) {
    for (int scale : {1, 4}) {
      const std::size_t m = static_cast<std::size_t>(scale * p * p * p);
      const auto t = random_table(rng, m, width, 1000);
      const auto run = bsp_string_sort(DistRows::block(t, p), bsp::Config{p},
                                       SlackPolicy::enforce);
      EXPECT_EQ(run.ledger.S(), 5u) << p << ' ' << m;
      const std::uint64_t share = (m + static_cast<std::size_t>(p) - 1) / static_cast<std::size_t>(p);
      for (const auto& s : run.ledger.supersteps()) {
        EXPECT_LE(std::max(s.h_out, s.h_in), 4 * (width + 2) * share) << p << ' ' << m;
      }
    }
  }
}

TEST(StringSort, EqualRowsKeepInputOrder) {
  const int p = 4;
  const radix::RowTable t{2, 3, std::vector<index_t>(2 * 128, 1)};
  const auto run = bsp_string_sort(DistRows::block(t, p), bsp::Config{p}, SlackPolicy::enforce);
  std::vector<index_t> want(128);
  std::iota(want.begin(), want.end(), index_t{0});
  EXPECT_EQ(run.rows.gather_ids(), want);
}

TEST(StringSort, SkewedInputDistribution) {
  // All rows start on one processor; the output is still balanced.
  std::mt19937_64 rng(34);
  const int p = 4;
  const auto t = random_table(rng, 200, 2, 7);
  DistRows in = DistRows::block(t, 1);
  in.parts.resize(p);
  std::swap(in.parts[0], in.parts[2]);
  const auto run = bsp_string_sort(in, bsp::Config{p}, SlackPolicy::enforce);
  EXPECT_EQ(run.rows.gather_ids(), oracle_order(t));
  expect_balanced(run.rows, 200, p);
}

TEST(StringSort, SlackPolicies) {
  std::mt19937_64 rng(35);
  const auto t = random_table(rng, 20, 2, 4);
  EXPECT_THROW(bsp_string_sort(DistRows::block(t, 4), bsp::Config{4}, SlackPolicy::enforce),
               SlackError);
  const auto run = bsp_string_sort(DistRows::block(t, 4), bsp::Config{4}, SlackPolicy::relaxed);
  EXPECT_EQ(run.rows.gather_ids(), oracle_order(t));
  EXPECT_EQ(run.warnings.size(), 1u);
  EXPECT_TRUE(sort_slack_ok(64, 4));
  EXPECT_FALSE(sort_slack_ok(63, 4));
  EXPECT_EQ(parse_slack("relaxed"), SlackPolicy::relaxed);
  EXPECT_EQ(to_string(SlackPolicy::enforce), "enforce");
  EXPECT_THROW(parse_slack("loose"), std::invalid_argument);
}

TEST(StringSort, RejectsMalformedInput) {
  std::mt19937_64 rng(36);
  const auto t = random_table(rng, 64, 2, 4);
  DistRows in = DistRows::block(t, 4);
  in.parts[1].keys.pop_back();
  EXPECT_THROW(bsp_string_sort(in, bsp::Config{4}, SlackPolicy::enforce), std::invalid_argument);
  bsp::Machine m(bsp::Config{4});
  StringSortOptions opts;
  opts.designated = 4;
  EXPECT_THROW(bsp_string_sort(m, DistRows::block(t, 4), opts), std::invalid_argument);
}

TEST(StringSort, IndependentOfExecutionOrder) {
  std::mt19937_64 rng(37);
  const auto t = random_table(rng, 512, 3, 9);
  const auto base = bsp_string_sort(DistRows::block(t, 8), bsp::Config{8}, SlackPolicy::enforce);
  for (auto e : {bsp::Execution::shuffled, bsp::Execution::parallel}) {
    bsp::MachineOptions opts;
    opts.execution = e;
    opts.seed = 3;
    const auto other = bsp_string_sort(DistRows::block(t, 8), bsp::Config{8},
                                       SlackPolicy::enforce, opts);
    EXPECT_EQ(other.rows.gather_ids(), base.rows.gather_ids());
    EXPECT_EQ(other.ledger.to_json(8), base.ledger.to_json(8));
  }
}

TEST(StringSort, DesignatedProcessorChoice) {
  std::mt19937_64 rng(38);
  const auto t = random_table(rng, 256, 2, 30);
  for (int d = 0; d < 4; ++d) {
    bsp::Machine m(bsp::Config{4});
    StringSortOptions opts;
    opts.designated = d;
    const auto out = bsp_string_sort(m, DistRows::block(t, 4), opts);
    EXPECT_EQ(out.gather_ids(), oracle_order(t));
  }
}

}  // namespace
}  // namespace dcsa
